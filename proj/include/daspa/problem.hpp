#ifndef DASPA_PROBLEM_HPP_
#define DASPA_PROBLEM_HPP_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "daspa/access_map.hpp"

namespace daspa {

/// Data of the weighted sum-rate power allocation program: maximize
/// sum_n w_n * log2(1 + sum_{k in R(n)} p_kn * gain_kn) subject to
/// per-antenna power budgets and p >= 0.
///
/// Gains are normalized channel power gains (per-variable, flat layout),
/// budgets are in Watts, proximal weights are per user.
struct ProblemInstance {
  AccessMap access;
  Eigen::VectorXd gains;     // per flat variable, > 0
  Eigen::VectorXd weights;   // per user, > 0
  Eigen::VectorXd budgets;   // per antenna, Watts, > 0
  Eigen::VectorXd proximal;  // per user, > 0

  int num_antennas() const { return access.num_antennas(); }
  int num_users() const { return access.num_users(); }
  int num_variables() const { return access.num_variables(); }
};

enum class ViolationKind {
  NonPositiveGain,
  NonPositiveBudget,
  NonPositiveWeight,
  NonPositiveProximal,
  InconsistentAccessMap,
  EmptyServingSet,
  ShapeMismatch,
};

struct Violation {
  ViolationKind kind;
  int antenna = -1;  // -1 when not applicable
  int user = -1;
  std::string detail;
};

const char* to_string(ViolationKind kind);

/// Checks every instance invariant. Returns an empty list when the instance
/// is valid; otherwise one entry per violation naming the offending index.
std::vector<Violation> validate_instance(const ProblemInstance& inst);

/// Step sizes of the iteration: one dual step per antenna plus the shared
/// anchor relaxation factor in (0, 1]. Antennas serving no user carry a
/// zero sentinel and are skipped by the dual update.
struct StepSizes {
  Eigen::VectorXd dual_steps;  // per antenna
  double anchor_step = 1.0;
};

/// Largest per-antenna dual steps with a convergence guarantee:
/// alpha_k = 2 * min_{n in U(k)} c_n / (3 |U(k)|), nudged down by at most a
/// few ulps so that 1/alpha_k - (3/2) * sum_{n in U(k)} 1/c_n evaluates
/// nonnegative in double arithmetic. Depends only on the access relation
/// and proximal weights, never on the gains.
StepSizes compute_theorem1_step_sizes(const ProblemInstance& inst);

/// Conservative uniform steps of the earlier proximal-dual scheme:
/// alpha = min_n c_n / (2 max_k |U(k)|) for every antenna.
StepSizes compute_lin2006_step_sizes(const ProblemInstance& inst);

/// Primal/dual/anchor iterates of the solver.
struct AlgorithmState {
  Eigen::VectorXd powers;   // flat, >= 0
  Eigen::VectorXd anchors;  // proximal centers, flat
  Eigen::VectorXd duals;    // per antenna, >= 0
  int iteration = 0;
};

/// Objective of the program at p: weighted sum of conservative rates,
/// in bit/s/Hz.
double objective_value(const ProblemInstance& inst, const Eigen::VectorXd& powers);

/// Gradient of objective_value with respect to the flat power vector.
Eigen::VectorXd objective_gradient(const ProblemInstance& inst,
                                   const Eigen::VectorXd& powers);

}  // namespace daspa

#endif  // DASPA_PROBLEM_HPP_
