#include "daspa/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace daspa {
namespace {

constexpr double kInvLn2 = 1.4426950408889634;  // 1/ln(2)

}  // namespace

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NonPositiveGain: return "NonPositiveGain";
    case ViolationKind::NonPositiveBudget: return "NonPositiveBudget";
    case ViolationKind::NonPositiveWeight: return "NonPositiveWeight";
    case ViolationKind::NonPositiveProximal: return "NonPositiveProximal";
    case ViolationKind::InconsistentAccessMap: return "InconsistentAccessMap";
    case ViolationKind::EmptyServingSet: return "EmptyServingSet";
    case ViolationKind::ShapeMismatch: return "ShapeMismatch";
  }
  return "Unknown";
}

std::vector<Violation> validate_instance(const ProblemInstance& inst) {
  std::vector<Violation> out;
  const AccessMap& access = inst.access;
  const int K = access.num_antennas();
  const int N = access.num_users();

  if (inst.gains.size() != access.num_variables())
    out.push_back({ViolationKind::ShapeMismatch, -1, -1, "gains length != variable count"});
  if (inst.weights.size() != N)
    out.push_back({ViolationKind::ShapeMismatch, -1, -1, "weights length != user count"});
  if (inst.budgets.size() != K)
    out.push_back({ViolationKind::ShapeMismatch, -1, -1, "budgets length != antenna count"});
  if (inst.proximal.size() != N)
    out.push_back({ViolationKind::ShapeMismatch, -1, -1, "proximal length != user count"});
  if (!out.empty()) return out;  // index checks below assume matching shapes

  for (int n = 0; n < N; ++n) {
    const auto& set = access.serving_set(n);
    if (set.empty())
      out.push_back({ViolationKind::EmptyServingSet, -1, n, "user has no serving antenna"});
    for (size_t j = 0; j < set.size(); ++j) {
      const int k = set[j];
      if (k < 0 || k >= K) {
        out.push_back({ViolationKind::InconsistentAccessMap, k, n, "antenna index out of range"});
        continue;
      }
      if (j > 0 && set[j] == set[j - 1])
        out.push_back({ViolationKind::InconsistentAccessMap, k, n, "duplicate antenna in serving set"});
      const auto& users = access.served_set(k);
      if (!std::binary_search(users.begin(), users.end(), n))
        out.push_back({ViolationKind::InconsistentAccessMap, k, n,
                       "serving set lists antenna whose served set misses the user"});
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int n : access.served_set(k)) {
      const auto& set = access.serving_set(n);
      if (!std::binary_search(set.begin(), set.end(), k))
        out.push_back({ViolationKind::InconsistentAccessMap, k, n,
                       "served set lists user whose serving set misses the antenna"});
    }
  }

  for (int i = 0; i < access.num_variables(); ++i) {
    if (!(inst.gains[i] > 0.0))
      out.push_back({ViolationKind::NonPositiveGain, access.antenna_of_variable(i),
                     access.user_of_variable(i), "gain must be positive"});
  }
  for (int n = 0; n < N; ++n) {
    if (!(inst.weights[n] > 0.0))
      out.push_back({ViolationKind::NonPositiveWeight, -1, n, "weight must be positive"});
    if (!(inst.proximal[n] > 0.0))
      out.push_back({ViolationKind::NonPositiveProximal, -1, n, "proximal weight must be positive"});
  }
  for (int k = 0; k < K; ++k) {
    if (!(inst.budgets[k] > 0.0))
      out.push_back({ViolationKind::NonPositiveBudget, k, -1, "budget must be positive"});
  }
  return out;
}

StepSizes compute_theorem1_step_sizes(const ProblemInstance& inst) {
  const AccessMap& access = inst.access;
  StepSizes steps;
  steps.dual_steps = Eigen::VectorXd::Zero(access.num_antennas());
  steps.anchor_step = 1.0;
  for (int k = 0; k < access.num_antennas(); ++k) {
    const auto& users = access.served_set(k);
    if (users.empty()) continue;  // zero sentinel, excluded from dual updates
    double min_prox = std::numeric_limits<double>::infinity();
    double inv_prox_sum = 0.0;
    for (int n : users) {
      min_prox = std::min(min_prox, inst.proximal[n]);
      inv_prox_sum += 1.0 / inst.proximal[n];
    }
    double alpha = 2.0 * min_prox / (3.0 * static_cast<double>(users.size()));
    // Rounding can land 1/alpha a hair below (3/2) * sum 1/c_n when the
    // proximal weights are uniform; nudge down until the margin is clean.
    while (1.0 / alpha < 1.5 * inv_prox_sum) alpha = std::nextafter(alpha, 0.0);
    steps.dual_steps[k] = alpha;
  }
  return steps;
}

StepSizes compute_lin2006_step_sizes(const ProblemInstance& inst) {
  const AccessMap& access = inst.access;
  size_t max_served = 0;
  for (int k = 0; k < access.num_antennas(); ++k)
    max_served = std::max(max_served, access.served_set(k).size());
  const double alpha = inst.proximal.minCoeff() / (2.0 * static_cast<double>(max_served));
  StepSizes steps;
  steps.dual_steps = Eigen::VectorXd::Constant(access.num_antennas(), alpha);
  steps.anchor_step = 1.0;
  return steps;
}

double objective_value(const ProblemInstance& inst, const Eigen::VectorXd& powers) {
  const AccessMap& access = inst.access;
  double total = 0.0;
  for (int n = 0; n < access.num_users(); ++n) {
    const int off = access.user_offset(n);
    const int len = static_cast<int>(access.serving_set(n).size());
    const double signal = powers.segment(off, len).dot(inst.gains.segment(off, len));
    total += inst.weights[n] * std::log1p(signal) * kInvLn2;
  }
  return total;
}

Eigen::VectorXd objective_gradient(const ProblemInstance& inst,
                                   const Eigen::VectorXd& powers) {
  const AccessMap& access = inst.access;
  Eigen::VectorXd grad(access.num_variables());
  for (int n = 0; n < access.num_users(); ++n) {
    const int off = access.user_offset(n);
    const int len = static_cast<int>(access.serving_set(n).size());
    const double signal = powers.segment(off, len).dot(inst.gains.segment(off, len));
    const double slope = inst.weights[n] * kInvLn2 / (1.0 + signal);
    grad.segment(off, len) = slope * inst.gains.segment(off, len);
  }
  return grad;
}

}  // namespace daspa
