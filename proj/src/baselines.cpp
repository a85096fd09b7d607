#include "daspa/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace daspa {
namespace {

constexpr double kInvLn2 = 1.4426950408889634;

}  // namespace

Eigen::VectorXd capped_simplex_project(const Eigen::VectorXd& q, double cap) {
  Eigen::VectorXd clipped = q.cwiseMax(0.0);
  if (clipped.sum() <= cap) return clipped;
  // Find the threshold t with sum(max(q - t, 0)) == cap by scanning the
  // sorted breakpoints.
  std::vector<double> sorted(q.data(), q.data() + q.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double prefix = 0.0;
  double threshold = 0.0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    prefix += sorted[i];
    const double candidate = (prefix - cap) / static_cast<double>(i + 1);
    const bool last = i + 1 == sorted.size();
    if (candidate >= (last ? 0.0 : sorted[i + 1]) || last) {
      threshold = candidate;
      break;
    }
  }
  return (q.array() - threshold).max(0.0).matrix();
}

namespace {

Eigen::VectorXd budget_project(const ProblemInstance& inst, const Eigen::VectorXd& proposal) {
  const AccessMap& access = inst.access;
  Eigen::VectorXd out(access.num_variables());
  for (int k = 0; k < access.num_antennas(); ++k) {
    const auto& users = access.served_set(k);
    if (users.empty()) continue;
    Eigen::VectorXd block(users.size());
    for (size_t j = 0; j < users.size(); ++j)
      block[j] = proposal[access.variable_index(k, users[j])];
    block = capped_simplex_project(block, inst.budgets[k]);
    for (size_t j = 0; j < users.size(); ++j)
      out[access.variable_index(k, users[j])] = block[j];
  }
  return out;
}

}  // namespace

OracleResult oracle_solve(const ProblemInstance& inst, const OracleConfig& config) {
  const AccessMap& access = inst.access;

  // Start from the equal split so every antenna block is strictly feasible.
  Eigen::VectorXd p = equal_power_allocation(inst);

  // Curvature at the start sets the initial step; channel-scaled gains vary
  // over many decades, so the step then adapts by backtracking with gentle
  // regrowth instead of sticking to a global worst-case constant.
  double curvature = 0.0;
  for (int n = 0; n < access.num_users(); ++n) {
    const int off = access.user_offset(n);
    const int len = static_cast<int>(access.serving_set(n).size());
    const double signal = p.segment(off, len).dot(inst.gains.segment(off, len));
    curvature = std::max(curvature, inst.weights[n] * kInvLn2 *
                                        inst.gains.segment(off, len).squaredNorm() /
                                        ((1.0 + signal) * (1.0 + signal)));
  }
  double step = curvature > 0.0 ? 1.0 / curvature : 1.0;

  OracleResult result;
  result.powers = p;
  result.value = objective_value(inst, p);
  Eigen::VectorXd grad(access.num_variables());
  for (long it = 0; it < config.max_iters; ++it) {
    // Gradient computed inline: this solver must not share the decomposed
    // iteration's code path.
    for (int n = 0; n < access.num_users(); ++n) {
      const int off = access.user_offset(n);
      const int len = static_cast<int>(access.serving_set(n).size());
      const double signal = p.segment(off, len).dot(inst.gains.segment(off, len));
      grad.segment(off, len) =
          (inst.weights[n] * kInvLn2 / (1.0 + signal)) * inst.gains.segment(off, len);
    }
    const double value = objective_value(inst, p);
    Eigen::VectorXd next;
    bool backtracked = false;
    for (int halvings = 0; halvings < 120; ++halvings) {
      next = budget_project(inst, p + step * grad);
      const double gain = grad.dot(next - p);
      if (objective_value(inst, next) >= value + 1e-4 * gain) break;
      step *= 0.5;
      backtracked = true;
    }
    const double move = (next - p).lpNorm<Eigen::Infinity>();
    p = next;
    result.iterations = it + 1;
    const double next_value = objective_value(inst, p);
    if (next_value > result.value) {
      result.value = next_value;
      result.powers = p;
    }
    if (!backtracked && move <= config.tol * std::max(1.0, p.lpNorm<Eigen::Infinity>())) {
      result.converged = true;
      break;
    }
    step *= 1.3;
  }
  return result;
}

Eigen::VectorXd equal_power_allocation(const ProblemInstance& inst) {
  const AccessMap& access = inst.access;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(access.num_variables());
  for (int k = 0; k < access.num_antennas(); ++k) {
    const auto& users = access.served_set(k);
    if (users.empty()) continue;
    const double share = inst.budgets[k] / static_cast<double>(users.size());
    for (int n : users) p[access.variable_index(k, n)] = share;
  }
  return p;
}

NoInterferenceBound no_interference_bound(const ChannelScenario& scenario,
                                          const AccessMap& access,
                                          const Eigen::VectorXd& weights,
                                          const Eigen::VectorXd& budgets,
                                          const OracleConfig& config) {
  ProblemInstance ideal;
  ideal.access = access;
  ideal.weights = weights;
  ideal.budgets = budgets;
  ideal.proximal = Eigen::VectorXd::Constant(access.num_users(), 1.0);
  ideal.gains.resize(access.num_variables());
  for (int i = 0; i < access.num_variables(); ++i) {
    const int k = access.antenna_of_variable(i);
    const int n = access.user_of_variable(i);
    ideal.gains[i] = scenario.raw_gain(k, n) / scenario.noise_power;
  }

  const OracleResult solved = oracle_solve(ideal, config);
  NoInterferenceBound bound;
  bound.powers = solved.powers;
  bound.converged = solved.converged;
  bound.per_user_rate.resize(access.num_users());
  for (int n = 0; n < access.num_users(); ++n) {
    const int off = access.user_offset(n);
    const int len = static_cast<int>(access.serving_set(n).size());
    const double signal = solved.powers.segment(off, len).dot(ideal.gains.segment(off, len));
    bound.per_user_rate[n] = std::log1p(signal) * kInvLn2;
  }
  return bound;
}

}  // namespace daspa
