#ifndef DASPA_BASELINES_HPP_
#define DASPA_BASELINES_HPP_

#include <Eigen/Core>

#include "daspa/problem.hpp"
#include "daspa/scenario.hpp"

namespace daspa {

struct OracleConfig {
  long max_iters = 200000;
  double tol = 1e-12;  // inf-norm threshold on consecutive iterate changes
};

struct OracleResult {
  Eigen::VectorXd powers;
  double value = 0.0;
  bool converged = false;
  long iterations = 0;
};

/// Euclidean projection onto { q >= 0, sum q <= cap }.
Eigen::VectorXd capped_simplex_project(const Eigen::VectorXd& q, double cap);

/// Centralized reference solver: projected gradient ascent on the weighted
/// sum-rate objective with per-antenna capped-simplex projection and a fixed
/// 1/L step. Shares no code with the decomposed iteration.
OracleResult oracle_solve(const ProblemInstance& inst, const OracleConfig& config);

/// Each antenna splits its budget evenly across the users it serves.
Eigen::VectorXd equal_power_allocation(const ProblemInstance& inst);

struct NoInterferenceBound {
  Eigen::VectorXd per_user_rate;  // bit/s/Hz
  Eigen::VectorXd powers;
  bool converged = false;
};

/// Interference-free performance ceiling: gains renormalized to the bare
/// noise floor (margin removed), solved by the oracle, rated with an empty
/// interference set.
NoInterferenceBound no_interference_bound(const ChannelScenario& scenario,
                                          const AccessMap& access,
                                          const Eigen::VectorXd& weights,
                                          const Eigen::VectorXd& budgets,
                                          const OracleConfig& config);

}  // namespace daspa

#endif  // DASPA_BASELINES_HPP_
