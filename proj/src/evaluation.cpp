#include "daspa/evaluation.hpp"

#include <cmath>

namespace daspa {
namespace {

constexpr double kInvLn2 = 1.4426950408889634;

}  // namespace

double conservative_rate(const ProblemInstance& inst, const Eigen::VectorXd& powers, int user) {
  const AccessMap& access = inst.access;
  const int off = access.user_offset(user);
  const int len = static_cast<int>(access.serving_set(user).size());
  const double signal = powers.segment(off, len).dot(inst.gains.segment(off, len));
  return std::log1p(signal) * kInvLn2;
}

double true_rate(const Eigen::VectorXd& powers, const ChannelScenario& scenario,
                 const AccessMap& access, int user) {
  double signal = 0.0;
  for (int k : access.serving_set(user))
    signal += scenario.raw_gain(k, user) * powers[access.variable_index(k, user)];
  double interference = 0.0;
  for (const auto& [antenna, other] : scenario.schedule.interference[user]) {
    const int var = access.variable_index(antenna, other);
    if (var >= 0) interference += scenario.raw_gain(antenna, user) * powers[var];
  }
  return std::log1p(signal / (scenario.noise_power + interference)) * kInvLn2;
}

ThroughputReport make_throughput_report(const ChannelScenario& scenario, const AccessMap& access,
                                        const ProblemInstance& inst, const Eigen::VectorXd& powers,
                                        const std::string& strategy, std::uint64_t seed) {
  ThroughputReport report;
  report.seed = seed;
  report.strategy = strategy;
  report.bandwidth_hz = scenario.bandwidth_hz;
  const int N = access.num_users();
  report.conservative_bps_hz.resize(N);
  report.true_bps_hz.resize(N);
  for (int n = 0; n < N; ++n) {
    report.conservative_bps_hz[n] = conservative_rate(inst, powers, n);
    report.true_bps_hz[n] = true_rate(powers, scenario, access, n);
  }
  report.weighted_sum_conservative = inst.weights.dot(report.conservative_bps_hz);
  report.weighted_sum_true = inst.weights.dot(report.true_bps_hz);
  return report;
}

ThroughputReport make_bound_report(const ChannelScenario& scenario,
                                   const Eigen::VectorXd& per_user_rate,
                                   const Eigen::VectorXd& weights, std::uint64_t seed) {
  ThroughputReport report;
  report.seed = seed;
  report.strategy = "no_interference";
  report.bandwidth_hz = scenario.bandwidth_hz;
  report.conservative_bps_hz = per_user_rate;
  report.true_bps_hz = per_user_rate;
  report.weighted_sum_conservative = weights.dot(per_user_rate);
  report.weighted_sum_true = report.weighted_sum_conservative;
  return report;
}

std::vector<double> dual_gap_trace(const std::vector<IterationRecord>& trace,
                                   double reference_value) {
  std::vector<double> gaps;
  gaps.reserve(trace.size());
  for (const auto& rec : trace) gaps.push_back(rec.lagrangian - reference_value);
  return gaps;
}

int iterations_to_gap(const std::vector<IterationRecord>& trace, double reference_value,
                      double threshold) {
  int settled = -1;
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    if (std::abs(it->lagrangian - reference_value) > threshold) break;
    settled = it->iteration;
  }
  return settled;
}

}  // namespace daspa
