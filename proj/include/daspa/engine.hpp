#ifndef DASPA_ENGINE_HPP_
#define DASPA_ENGINE_HPP_

#include <Eigen/Core>
#include <limits>
#include <optional>
#include <vector>

#include "daspa/local_solver.hpp"
#include "daspa/problem.hpp"

namespace daspa {

struct RunConfig {
  StepSizes step_sizes;
  int max_iterations = 20000;
  double stop_tol = 1e-8;       // inf-norm threshold on consecutive dual/anchor changes
  bool record_trace = true;
  bool record_iterates = false; // keep (powers, duals, anchors) per iteration
  std::optional<double> reference_value;        // optimum objective, for gap reporting
  std::optional<AlgorithmState> initial_state;  // warm start
};

struct IterationRecord {
  int iteration = 0;
  double lagrangian = 0.0;
  double dual_gap = std::numeric_limits<double>::quiet_NaN();
  double dual_step_inf = 0.0;
  double anchor_step_inf = 0.0;
  long messages_exchanged = 0;  // filled by the distributed runtime
};

/// Iterates captured at the start of an iteration, for replay diagnostics.
struct IterateSnapshot {
  Eigen::VectorXd powers;
  Eigen::VectorXd duals;
  Eigen::VectorXd anchors;
};

struct RunResult {
  AlgorithmState state;
  std::vector<IterationRecord> trace;
  std::vector<IterateSnapshot> iterates;
  bool converged = false;
};

/// Lagrangian of the proximal reformulation at (powers, duals, anchors).
double lagrangian_value(const ProblemInstance& inst, const Eigen::VectorXd& powers,
                        const Eigen::VectorXd& duals, const Eigen::VectorXd& anchors);

/// Builds the one-user subproblem view at the given duals/anchors.
SubproblemInput make_subproblem_input(const ProblemInstance& inst, int user,
                                      const Eigen::VectorXd& duals,
                                      const Eigen::VectorXd& anchors);

/// Maximizes the Lagrangian over powers >= 0 for fixed duals and anchors by
/// concatenating the per-user closed-form solutions.
Eigen::VectorXd maximize_lagrangian(const ProblemInstance& inst,
                                    const Eigen::VectorXd& duals,
                                    const Eigen::VectorXd& anchors);

/// Projected subgradient ascent step on the per-antenna prices. Antennas with
/// a zero step sentinel are left untouched.
Eigen::VectorXd dual_update(const Eigen::VectorXd& duals, const Eigen::VectorXd& powers,
                            const ProblemInstance& inst, const Eigen::VectorXd& dual_steps);

/// Damped move of the proximal centers toward the fresh maximizer.
Eigen::VectorXd anchor_update(const Eigen::VectorXd& anchors, const Eigen::VectorXd& target,
                              double anchor_step);

/// Default cold start: zero prices and an equal split of each antenna's
/// budget across its users.
AlgorithmState initial_state(const ProblemInstance& inst);

/// Runs the full iteration until the consecutive dual and anchor changes both
/// drop below stop_tol or the iteration budget runs out. The final power
/// allocation is the anchor vector.
RunResult run(const ProblemInstance& inst, const RunConfig& config);

struct StationarityReport {
  bool stationary = false;
  double resolve_gap_inf = 0.0;      // |argmax - anchors|_inf at the final point
  double budget_violation = 0.0;     // max positive part of antenna over-use
  double min_dual = 0.0;             // most negative price (>= 0 required)
  double complementary_slack = 0.0;  // max |price * budget slack|
};

/// Verifies the fixed-point conditions of the iteration at (duals, anchors):
/// the anchors maximize the Lagrangian at themselves, they are feasible, and
/// complementary slackness holds, each within tol.
StationarityReport check_stationary(const AlgorithmState& state, const ProblemInstance& inst,
                                    double tol);

/// Weighted squared distance to a reference point:
///   sum_k (duals_k - ref_k)^2 / alpha_k  +  (1/beta) sum_i c_(user i) (anchors_i - ref_i)^2.
/// Idle antennas (zero step sentinel) are skipped.
double lyapunov_value(const Eigen::VectorXd& duals, const Eigen::VectorXd& anchors,
                      const Eigen::VectorXd& ref_duals, const Eigen::VectorXd& ref_anchors,
                      const StepSizes& steps, const ProblemInstance& inst);

}  // namespace daspa

#endif  // DASPA_ENGINE_HPP_
