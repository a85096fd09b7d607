#ifndef DASPA_SCENARIO_HPP_
#define DASPA_SCENARIO_HPP_

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "daspa/access_map.hpp"
#include "daspa/problem.hpp"

namespace daspa {

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Antenna and user placement. Each cell owns seven antennas: one at the
/// cell center and six on the surrounding hexagon at one lattice spacing.
/// Cell centers sit on the reuse-7 sublattice, so all antennas together form
/// a subset of one hexagonal lattice with minimum spacing equal to the cell
/// spacing.
struct Topology {
  Eigen::MatrixX2d antenna_positions;  // meters
  Eigen::MatrixX2d user_positions;     // meters
  std::vector<int> bs_of_antenna;      // antenna -> owning base station (cell)
  double spacing = 1000.0;             // meters
};

/// Minimum user-to-antenna distance enforced by the generator.
inline constexpr double kMinUserDistance = 10.0;

/// Users are drawn uniformly over the disk covering every antenna plus half
/// a spacing of margin, resampled until clear of every antenna.
Topology generate_topology(int cells, double spacing, int users_per_cell, std::uint64_t seed);

/// Urban-macro scalar path loss, 34.5 + 35 log10(d). Throws std::domain_error
/// for distances below one meter where the formula turns negative.
double path_loss_db(double distance_m);

struct ChannelModel {
  double shadowing_std_db = 8.0;
  bool unit_fading = false;  // replace the Rayleigh power draw with 1
};

struct ChannelDraw {
  Eigen::MatrixXd large_scale_db;  // K x N, path loss + shadowing
  Eigen::MatrixXd raw_gain;        // K x N, |h|^2 including fading
};

/// Draws i.i.d. per-link channels: log-normal shadowing around the path loss
/// plus unit-mean exponential fading power.
ChannelDraw draw_channel(const Topology& topology, std::uint64_t seed,
                         const ChannelModel& model = {});

/// Serving sets are the per_user_count antennas with the smallest large-scale
/// loss (fading excluded), ties broken toward the lower antenna index.
AccessMap select_serving_antennas(const ChannelDraw& draw, int per_user_count);

/// Co-channel layout: channel id per user plus the interfering
/// (antenna, user) pairs seen by each user.
struct Schedule {
  std::vector<int> channel_of_user;
  std::vector<std::vector<std::pair<int, int>>> interference;
};

/// Greedy pairing in seeded random order: two users share a channel only if
/// their serving sets are disjoint; everyone else gets a private channel.
Schedule schedule_users(const AccessMap& access, std::uint64_t seed);

struct ChannelScenario {
  Topology topology;
  Eigen::MatrixXd large_scale_db;
  Eigen::MatrixXd raw_gain;
  double noise_power = 0.0;     // Watts
  double bandwidth_hz = 1e6;
  Eigen::VectorXd sigma_peak;   // per user, Watts
  Schedule schedule;
  std::uint64_t seed = 0;
};

struct ScenarioParams {
  int cells = 7;
  double spacing_m = 1000.0;
  int users_per_cell = 10;
  int serving_count = 3;
  double margin_db = 5.0;        // sigma_peak over the noise floor
  double bandwidth_hz = 1e6;
  double noise_figure_db = 5.0;
  ChannelModel model;
};

struct BuiltScenario {
  ChannelScenario scenario;
  AccessMap access;
};

/// Full pipeline: topology, channel draw, antenna selection, scheduling.
/// Sub-seeds are derived deterministically from the master seed.
BuiltScenario make_scenario(const ScenarioParams& params, std::uint64_t seed);

/// Normalizes raw gains by each user's conservative noise-plus-interference
/// cap to produce the optimization instance.
ProblemInstance build_problem_instance(const ChannelScenario& scenario, const AccessMap& access,
                                       const Eigen::VectorXd& weights,
                                       const Eigen::VectorXd& budgets,
                                       const Eigen::VectorXd& proximal);

/// Thermal noise floor in Watts for the given bandwidth and noise figure.
double noise_floor_watt(double bandwidth_hz, double noise_figure_db);

/// Deterministic sub-seed derivation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace daspa

#endif  // DASPA_SCENARIO_HPP_
