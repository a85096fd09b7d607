#ifndef DASPA_EVALUATION_HPP_
#define DASPA_EVALUATION_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "daspa/engine.hpp"
#include "daspa/problem.hpp"
#include "daspa/scenario.hpp"

namespace daspa {

/// Rate of one user under the conservative noise cap, bit/s/Hz.
double conservative_rate(const ProblemInstance& inst, const Eigen::VectorXd& powers, int user);

/// Rate of one user with the actual noise floor and the co-channel
/// interference produced by the same power vector, bit/s/Hz.
double true_rate(const Eigen::VectorXd& powers, const ChannelScenario& scenario,
                 const AccessMap& access, int user);

/// Per-user rates of one strategy on one realization.
struct ThroughputReport {
  std::uint64_t seed = 0;
  std::string strategy;
  Eigen::VectorXd conservative_bps_hz;
  Eigen::VectorXd true_bps_hz;
  double weighted_sum_conservative = 0.0;  // objective value, bit/s/Hz
  double weighted_sum_true = 0.0;
  double bandwidth_hz = 1e6;

  double mean_true_bps() const { return true_bps_hz.mean() * bandwidth_hz; }
  double mean_conservative_bps() const { return conservative_bps_hz.mean() * bandwidth_hz; }
};

ThroughputReport make_throughput_report(const ChannelScenario& scenario, const AccessMap& access,
                                        const ProblemInstance& inst, const Eigen::VectorXd& powers,
                                        const std::string& strategy, std::uint64_t seed);

/// Variant for rate vectors computed elsewhere (the interference-free bound).
ThroughputReport make_bound_report(const ChannelScenario& scenario,
                                   const Eigen::VectorXd& per_user_rate,
                                   const Eigen::VectorXd& weights, std::uint64_t seed);

/// Gap of every recorded iteration against a reference optimum value.
std::vector<double> dual_gap_trace(const std::vector<IterationRecord>& trace,
                                   double reference_value);

/// First iteration from which |gap| stays at or below the threshold for the
/// rest of the trace; -1 if the trace never settles there. Transient band
/// crossings during an overshoot do not count.
int iterations_to_gap(const std::vector<IterationRecord>& trace, double reference_value,
                      double threshold);

}  // namespace daspa

#endif  // DASPA_EVALUATION_HPP_
