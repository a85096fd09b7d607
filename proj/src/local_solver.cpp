#include "daspa/local_solver.hpp"

#include <cmath>
#include <numeric>

namespace daspa {
namespace {

constexpr double kInvLn2 = 1.4426950408889634;  // 1/ln(2)

}  // namespace

double signal_quadratic_root(double prox_weight, double net_price, double utility_mass) {
  const double c = prox_weight;
  const double m = net_price;
  const double q = utility_mass;
  const double disc = (c + m) * (c + m) - 4.0 * c * (m - q);
  const double root = std::sqrt(disc);
  if (m <= q) return 2.0 * (q - m) / ((c + m) + root);
  return (-(c + m) + root) / (2.0 * c);
}

SubproblemSolution solve_user_subproblem(const SubproblemInput& input) {
  const int dim = static_cast<int>(input.gains.size());
  const double c = input.proximal;

  SubproblemSolution sol;
  sol.user = input.user;
  sol.powers = Eigen::VectorXd::Zero(dim);

  std::vector<int> active(dim);
  std::iota(active.begin(), active.end(), 0);

  Eigen::VectorXd powers = Eigen::VectorXd::Zero(dim);
  double signal = 0.0;
  while (!active.empty()) {
    double net_price = 0.0;    // sum g_i (dual_i - c * anchor_i)
    double utility_mass = 0.0; // sum w g_i^2 / ln 2
    for (int i : active) {
      net_price += input.gains[i] * (input.duals[i] - c * input.anchors[i]);
      utility_mass += input.weight * input.gains[i] * input.gains[i] * kInvLn2;
    }
    signal = signal_quadratic_root(c, net_price, utility_mass);
    const double slope = input.weight * kInvLn2 / (1.0 + signal);

    powers.setZero();
    bool all_positive = true;
    std::vector<int> survivors;
    survivors.reserve(active.size());
    for (int i : active) {
      const double p = input.anchors[i] + (slope * input.gains[i] - input.duals[i]) / c;
      if (p > kEliminationTol) {
        powers[i] = p;
        survivors.push_back(i);
      } else {
        all_positive = false;
      }
    }
    if (all_positive) break;
    active = std::move(survivors);
    powers.setZero();
    signal = 0.0;
  }

  sol.active_set = std::move(active);
  sol.powers = std::move(powers);
  sol.signal = 0.0;
  for (int i : sol.active_set) sol.signal += sol.powers[i] * input.gains[i];
  return sol;
}

double subproblem_objective(const SubproblemInput& input, const Eigen::VectorXd& powers) {
  const double signal = powers.dot(input.gains);
  double value = input.weight * std::log1p(signal) * kInvLn2;
  value -= input.duals.dot(powers);
  value -= 0.5 * input.proximal * (powers - input.anchors).squaredNorm();
  return value;
}

double kkt_residual(const SubproblemInput& input, const SubproblemSolution& solution) {
  const double signal = solution.powers.dot(input.gains);
  const double slope = input.weight * kInvLn2 / (1.0 + signal);
  double worst = 0.0;
  for (int i = 0; i < input.gains.size(); ++i) {
    const double grad = slope * input.gains[i] - input.duals[i] -
                        input.proximal * (solution.powers[i] - input.anchors[i]);
    const double res = solution.powers[i] > 0.0 ? std::abs(grad) : std::max(0.0, grad);
    worst = std::max(worst, res);
  }
  return worst;
}

}  // namespace daspa
