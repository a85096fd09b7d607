#ifndef DASPA_LOCAL_SOLVER_HPP_
#define DASPA_LOCAL_SOLVER_HPP_

#include <Eigen/Core>
#include <vector>

namespace daspa {

/// One user's share of the Lagrangian maximization: all vectors are aligned
/// with the user's serving set in ascending antenna order.
struct SubproblemInput {
  int user = 0;
  Eigen::VectorXd gains;    // > 0
  double weight = 1.0;      // > 0
  double proximal = 3.0;    // > 0
  Eigen::VectorXd duals;    // >= 0, price of each serving antenna
  Eigen::VectorXd anchors;  // proximal centers
};

/// Optimizer output for one user. powers aligns with the serving set;
/// active_set holds the positions (into the serving set) that carry
/// positive power; signal = sum of powers[i] * gains[i] over the active set.
struct SubproblemSolution {
  int user = 0;
  std::vector<int> active_set;
  double signal = 0.0;
  Eigen::VectorXd powers;
};

/// Larger root of  c s^2 + (c + m) s + (m - q) = 0  for c > 0, q > 0.
/// The root is always > -1. Evaluated in the cancellation-safe form
/// 2(q - m) / ((c + m) + sqrt(disc)) when m <= q.
double signal_quadratic_root(double prox_weight, double net_price, double utility_mass);

/// Coordinates at or below this value are treated as zero when shrinking
/// the active set.
inline constexpr double kEliminationTol = 1e-12;

/// Maximizes  weight * log2(1 + sum p_i g_i) - sum duals_i p_i
///            - (c/2) sum (p_i - anchors_i)^2   over p >= 0
/// by the closed-form root plus simultaneous elimination of every
/// nonpositive coordinate. Terminates within |serving set| passes.
SubproblemSolution solve_user_subproblem(const SubproblemInput& input);

/// Objective of the subproblem at the given powers.
double subproblem_objective(const SubproblemInput& input, const Eigen::VectorXd& powers);

/// Max KKT residual of a candidate solution: |gradient| on positive
/// coordinates, positive part of the gradient on zero coordinates.
double kkt_residual(const SubproblemInput& input, const SubproblemSolution& solution);

}  // namespace daspa

#endif  // DASPA_LOCAL_SOLVER_HPP_
