#include "daspa/engine.hpp"

#include <cmath>

namespace daspa {

double lagrangian_value(const ProblemInstance& inst, const Eigen::VectorXd& powers,
                        const Eigen::VectorXd& duals, const Eigen::VectorXd& anchors) {
  double value = objective_value(inst, powers);
  const Eigen::VectorXd used = antenna_sum(inst.access, powers);
  value -= duals.dot(used - inst.budgets);
  const Eigen::VectorXd prox = lift_per_user(inst.access, inst.proximal);
  value -= 0.5 * (prox.array() * (powers - anchors).array().square()).sum();
  return value;
}

SubproblemInput make_subproblem_input(const ProblemInstance& inst, int user,
                                      const Eigen::VectorXd& duals,
                                      const Eigen::VectorXd& anchors) {
  const AccessMap& access = inst.access;
  const int off = access.user_offset(user);
  const int len = static_cast<int>(access.serving_set(user).size());
  SubproblemInput input;
  input.user = user;
  input.gains = inst.gains.segment(off, len);
  input.weight = inst.weights[user];
  input.proximal = inst.proximal[user];
  input.duals.resize(len);
  for (int j = 0; j < len; ++j) input.duals[j] = duals[access.serving_set(user)[j]];
  input.anchors = anchors.segment(off, len);
  return input;
}

Eigen::VectorXd maximize_lagrangian(const ProblemInstance& inst,
                                    const Eigen::VectorXd& duals,
                                    const Eigen::VectorXd& anchors) {
  const AccessMap& access = inst.access;
  Eigen::VectorXd powers(access.num_variables());
  for (int n = 0; n < access.num_users(); ++n) {
    const SubproblemInput input = make_subproblem_input(inst, n, duals, anchors);
    const SubproblemSolution sol = solve_user_subproblem(input);
    powers.segment(access.user_offset(n), input.gains.size()) = sol.powers;
  }
  return powers;
}

Eigen::VectorXd dual_update(const Eigen::VectorXd& duals, const Eigen::VectorXd& powers,
                            const ProblemInstance& inst, const Eigen::VectorXd& dual_steps) {
  const AccessMap& access = inst.access;
  Eigen::VectorXd next = duals;
  for (int k = 0; k < access.num_antennas(); ++k) {
    if (access.served_set(k).empty()) continue;
    double used = 0.0;
    for (int n : access.served_set(k)) used += powers[access.variable_index(k, n)];
    next[k] = std::max(0.0, duals[k] + dual_steps[k] * (used - inst.budgets[k]));
  }
  return next;
}

Eigen::VectorXd anchor_update(const Eigen::VectorXd& anchors, const Eigen::VectorXd& target,
                              double anchor_step) {
  return anchors + anchor_step * (target - anchors);
}

AlgorithmState initial_state(const ProblemInstance& inst) {
  const AccessMap& access = inst.access;
  AlgorithmState state;
  state.duals = Eigen::VectorXd::Zero(access.num_antennas());
  state.anchors = Eigen::VectorXd::Zero(access.num_variables());
  for (int k = 0; k < access.num_antennas(); ++k) {
    const auto& users = access.served_set(k);
    if (users.empty()) continue;
    const double share = inst.budgets[k] / static_cast<double>(users.size());
    for (int n : users) state.anchors[access.variable_index(k, n)] = share;
  }
  state.powers = state.anchors;
  state.iteration = 0;
  return state;
}

RunResult run(const ProblemInstance& inst, const RunConfig& config) {
  RunResult result;
  AlgorithmState state = config.initial_state ? *config.initial_state : initial_state(inst);

  Eigen::VectorXd duals = state.duals;
  Eigen::VectorXd anchors = state.anchors;
  Eigen::VectorXd powers = state.powers;
  bool converged = false;
  int t = 0;
  for (; t < config.max_iterations; ++t) {
    powers = maximize_lagrangian(inst, duals, anchors);
    const Eigen::VectorXd next_duals = dual_update(duals, powers, inst, config.step_sizes.dual_steps);
    const Eigen::VectorXd target = maximize_lagrangian(inst, next_duals, anchors);
    const Eigen::VectorXd next_anchors = anchor_update(anchors, target, config.step_sizes.anchor_step);

    const double dual_step = (next_duals - duals).lpNorm<Eigen::Infinity>();
    const double anchor_step = (next_anchors - anchors).lpNorm<Eigen::Infinity>();

    if (config.record_iterates) result.iterates.push_back({powers, duals, anchors});
    if (config.record_trace) {
      IterationRecord rec;
      rec.iteration = t;
      rec.lagrangian = lagrangian_value(inst, powers, duals, anchors);
      if (config.reference_value) rec.dual_gap = rec.lagrangian - *config.reference_value;
      rec.dual_step_inf = dual_step;
      rec.anchor_step_inf = anchor_step;
      result.trace.push_back(rec);
    }

    duals = next_duals;
    anchors = next_anchors;
    if (std::max(dual_step, anchor_step) <= config.stop_tol) {
      ++t;
      converged = true;
      break;
    }
  }

  state.powers = anchors;  // the anchor vector is the primal answer
  state.duals = duals;
  state.anchors = anchors;
  state.iteration = t;
  result.state = std::move(state);
  result.converged = converged;
  return result;
}

StationarityReport check_stationary(const AlgorithmState& state, const ProblemInstance& inst,
                                    double tol) {
  StationarityReport report;
  const Eigen::VectorXd resolved = maximize_lagrangian(inst, state.duals, state.anchors);
  report.resolve_gap_inf = (resolved - state.anchors).lpNorm<Eigen::Infinity>();

  const Eigen::VectorXd used = antenna_sum(inst.access, state.anchors);
  report.budget_violation = (used - inst.budgets).maxCoeff();
  report.min_dual = state.duals.minCoeff();
  report.complementary_slack =
      (state.duals.array() * (used - inst.budgets).array()).abs().maxCoeff();

  report.stationary = report.resolve_gap_inf <= tol && report.budget_violation <= tol &&
                      report.min_dual >= 0.0 && report.complementary_slack <= tol;
  return report;
}

double lyapunov_value(const Eigen::VectorXd& duals, const Eigen::VectorXd& anchors,
                      const Eigen::VectorXd& ref_duals, const Eigen::VectorXd& ref_anchors,
                      const StepSizes& steps, const ProblemInstance& inst) {
  double value = 0.0;
  for (int k = 0; k < duals.size(); ++k) {
    if (steps.dual_steps[k] <= 0.0) continue;  // idle antenna sentinel
    const double d = duals[k] - ref_duals[k];
    value += d * d / steps.dual_steps[k];
  }
  const Eigen::VectorXd prox = lift_per_user(inst.access, inst.proximal);
  value += (prox.array() * (anchors - ref_anchors).array().square()).sum() / steps.anchor_step;
  return value;
}

}  // namespace daspa
