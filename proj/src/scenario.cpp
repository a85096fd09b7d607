#include "daspa/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace daspa {
namespace {

// splitmix64, the usual seed scrambler
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(seed ^ splitmix64(salt));
}

Topology generate_topology(int cells, double spacing, int users_per_cell,
                           std::uint64_t seed) {
  if (cells < 1) throw std::invalid_argument("generate_topology: cells must be >= 1");
  if (!(spacing > 0.0)) throw std::invalid_argument("generate_topology: spacing must be positive");

  const double D = spacing;
  // Reuse-7 sublattice basis: cell centers one step apart are sqrt(7) D away.
  const Eigen::Vector2d cluster_u(2.5 * D, std::sqrt(3.0) / 2.0 * D);
  const Eigen::Vector2d cluster_v(0.5 * D, 1.5 * std::sqrt(3.0) * D);

  std::vector<Eigen::Vector2d> centers;
  const int radius = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cells)))) + 2;
  for (int a = -radius; a <= radius; ++a)
    for (int b = -radius; b <= radius; ++b)
      centers.emplace_back(a * cluster_u + b * cluster_v);
  std::sort(centers.begin(), centers.end(), [](const auto& lhs, const auto& rhs) {
    const double ln = lhs.squaredNorm(), rn = rhs.squaredNorm();
    if (ln != rn) return ln < rn;
    const double la = std::atan2(lhs.y(), lhs.x()), ra = std::atan2(rhs.y(), rhs.x());
    return la < ra;
  });
  centers.resize(cells);

  Topology topo;
  topo.spacing = D;
  topo.antenna_positions.resize(7 * cells, 2);
  topo.bs_of_antenna.resize(7 * cells);
  int idx = 0;
  for (int c = 0; c < cells; ++c) {
    topo.antenna_positions.row(idx) = centers[c].transpose();
    topo.bs_of_antenna[idx++] = c;
    for (int corner = 0; corner < 6; ++corner) {
      const double angle = corner * M_PI / 3.0;
      const Eigen::Vector2d pos = centers[c] + D * Eigen::Vector2d(std::cos(angle), std::sin(angle));
      topo.antenna_positions.row(idx) = pos.transpose();
      topo.bs_of_antenna[idx++] = c;
    }
  }

  const Eigen::Vector2d centroid = topo.antenna_positions.colwise().mean().transpose();
  double max_radius = 0.0;
  for (int k = 0; k < topo.antenna_positions.rows(); ++k)
    max_radius = std::max(max_radius,
                          (topo.antenna_positions.row(k).transpose() - centroid).norm());
  const double area_radius = max_radius + D / 2.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int num_users = cells * users_per_cell;
  topo.user_positions.resize(num_users, 2);
  for (int n = 0; n < num_users; ++n) {
    while (true) {
      const double r = area_radius * std::sqrt(unit(rng));
      const double angle = 2.0 * M_PI * unit(rng);
      const Eigen::Vector2d pos = centroid + r * Eigen::Vector2d(std::cos(angle), std::sin(angle));
      double nearest = std::numeric_limits<double>::infinity();
      for (int k = 0; k < topo.antenna_positions.rows(); ++k)
        nearest = std::min(nearest, (topo.antenna_positions.row(k).transpose() - pos).norm());
      if (nearest >= kMinUserDistance) {
        topo.user_positions.row(n) = pos.transpose();
        break;
      }
    }
  }
  return topo;
}

double path_loss_db(double distance_m) {
  if (distance_m < 1.0)
    throw std::domain_error("path_loss_db: distance below 1 m");
  return 34.5 + 35.0 * std::log10(distance_m);
}

ChannelDraw draw_channel(const Topology& topology, std::uint64_t seed,
                         const ChannelModel& model) {
  const int K = static_cast<int>(topology.antenna_positions.rows());
  const int N = static_cast<int>(topology.user_positions.rows());
  ChannelDraw draw;
  draw.large_scale_db.resize(K, N);
  draw.raw_gain.resize(K, N);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> shadow(0.0, model.shadowing_std_db > 0.0
                                                   ? model.shadowing_std_db
                                                   : 1.0);
  std::exponential_distribution<double> fading(1.0);
  for (int k = 0; k < K; ++k) {
    for (int n = 0; n < N; ++n) {
      const double d = (topology.antenna_positions.row(k) - topology.user_positions.row(n)).norm();
      double loss_db = path_loss_db(d);
      if (model.shadowing_std_db > 0.0) loss_db += shadow(rng);
      const double f = model.unit_fading ? 1.0 : fading(rng);
      draw.large_scale_db(k, n) = loss_db;
      draw.raw_gain(k, n) = std::pow(10.0, -loss_db / 10.0) * f;
    }
  }
  return draw;
}

AccessMap select_serving_antennas(const ChannelDraw& draw, int per_user_count) {
  const int K = static_cast<int>(draw.large_scale_db.rows());
  const int N = static_cast<int>(draw.large_scale_db.cols());
  if (per_user_count < 1 || per_user_count > K)
    throw std::invalid_argument("select_serving_antennas: count out of range");

  std::vector<std::vector<int>> serving(N);
  std::vector<int> order(K);
  for (int n = 0; n < N; ++n) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return draw.large_scale_db(a, n) < draw.large_scale_db(b, n);
    });
    serving[n].assign(order.begin(), order.begin() + per_user_count);
  }
  return AccessMap::from_serving_sets(K, std::move(serving));
}

Schedule schedule_users(const AccessMap& access, std::uint64_t seed) {
  const int N = access.num_users();
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  auto disjoint = [&](int a, int b) {
    const auto& ra = access.serving_set(a);
    const auto& rb = access.serving_set(b);
    auto ia = ra.begin();
    auto ib = rb.begin();
    while (ia != ra.end() && ib != rb.end()) {
      if (*ia == *ib) return false;
      if (*ia < *ib) ++ia; else ++ib;
    }
    return true;
  };

  Schedule schedule;
  schedule.channel_of_user.assign(N, -1);
  schedule.interference.assign(N, {});
  int next_channel = 0;
  for (size_t i = 0; i < order.size(); ++i) {
    const int u = order[i];
    if (schedule.channel_of_user[u] >= 0) continue;
    int partner = -1;
    for (size_t j = i + 1; j < order.size(); ++j) {
      const int v = order[j];
      if (schedule.channel_of_user[v] < 0 && disjoint(u, v)) {
        partner = v;
        break;
      }
    }
    schedule.channel_of_user[u] = next_channel;
    if (partner >= 0) {
      schedule.channel_of_user[partner] = next_channel;
      for (int k : access.serving_set(partner)) schedule.interference[u].emplace_back(k, partner);
      for (int k : access.serving_set(u)) schedule.interference[partner].emplace_back(k, u);
    }
    ++next_channel;
  }
  return schedule;
}

double noise_floor_watt(double bandwidth_hz, double noise_figure_db) {
  const double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
  return dbm_to_watt(dbm);
}

BuiltScenario make_scenario(const ScenarioParams& params, std::uint64_t seed) {
  BuiltScenario built;
  const Topology topology = generate_topology(params.cells, params.spacing_m,
                                              params.users_per_cell, derive_seed(seed, 1));
  const ChannelDraw draw = draw_channel(topology, derive_seed(seed, 2), params.model);
  built.access = select_serving_antennas(draw, params.serving_count);

  ChannelScenario& scenario = built.scenario;
  scenario.topology = topology;
  scenario.large_scale_db = draw.large_scale_db;
  scenario.raw_gain = draw.raw_gain;
  scenario.noise_power = noise_floor_watt(params.bandwidth_hz, params.noise_figure_db);
  scenario.bandwidth_hz = params.bandwidth_hz;
  scenario.sigma_peak = Eigen::VectorXd::Constant(
      built.access.num_users(), scenario.noise_power * db_to_linear(params.margin_db));
  scenario.schedule = schedule_users(built.access, derive_seed(seed, 3));
  scenario.seed = seed;
  return built;
}

ProblemInstance build_problem_instance(const ChannelScenario& scenario, const AccessMap& access,
                                       const Eigen::VectorXd& weights,
                                       const Eigen::VectorXd& budgets,
                                       const Eigen::VectorXd& proximal) {
  ProblemInstance inst;
  inst.access = access;
  inst.weights = weights;
  inst.budgets = budgets;
  inst.proximal = proximal;
  inst.gains.resize(access.num_variables());
  for (int i = 0; i < access.num_variables(); ++i) {
    const int k = access.antenna_of_variable(i);
    const int n = access.user_of_variable(i);
    inst.gains[i] = scenario.raw_gain(k, n) / scenario.sigma_peak[n];
  }
  return inst;
}

}  // namespace daspa
