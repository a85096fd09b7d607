// Shared test helpers: seeded random problem generators and small
// independent optimizers used as oracles. Nothing here may call into the
// closed-form subproblem solver or the iteration engine.
#ifndef DASPA_TESTS_SUPPORT_HPP_
#define DASPA_TESTS_SUPPORT_HPP_

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "daspa/local_solver.hpp"
#include "daspa/problem.hpp"

namespace daspa::test {

inline constexpr double kInvLn2 = 1.4426950408889634;

struct RandomInstanceParams {
  int max_antennas = 8;
  int max_users = 6;
  int max_serving = 3;
  double gain_lo = 0.1;
  double gain_hi = 10.0;
  double budget_lo = 0.5;
  double budget_hi = 2.0;
  double proximal = 3.0;      // fixed value unless vary_proximal
  bool vary_proximal = false; // uniform in [1, 6]
  bool vary_weights = false;  // uniform in [0.5, 2]
};

inline ProblemInstance random_instance(std::uint64_t seed,
                                       const RandomInstanceParams& params = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> antennas_dist(1, params.max_antennas);
  const int K = antennas_dist(rng);
  std::uniform_int_distribution<int> users_dist(1, params.max_users);
  const int N = users_dist(rng);

  std::vector<std::vector<int>> serving(N);
  std::vector<int> pool(K);
  std::iota(pool.begin(), pool.end(), 0);
  for (int n = 0; n < N; ++n) {
    std::uniform_int_distribution<int> size_dist(1, std::min(params.max_serving, K));
    const int size = size_dist(rng);
    std::shuffle(pool.begin(), pool.end(), rng);
    serving[n].assign(pool.begin(), pool.begin() + size);
  }

  ProblemInstance inst;
  inst.access = AccessMap::from_serving_sets(K, std::move(serving));
  std::uniform_real_distribution<double> log_gain(std::log(params.gain_lo),
                                                  std::log(params.gain_hi));
  inst.gains.resize(inst.access.num_variables());
  for (int i = 0; i < inst.gains.size(); ++i) inst.gains[i] = std::exp(log_gain(rng));
  std::uniform_real_distribution<double> weight_dist(0.5, 2.0);
  inst.weights.resize(N);
  for (int n = 0; n < N; ++n)
    inst.weights[n] = params.vary_weights ? weight_dist(rng) : 1.0;
  std::uniform_real_distribution<double> budget_dist(params.budget_lo, params.budget_hi);
  inst.budgets.resize(K);
  for (int k = 0; k < K; ++k) inst.budgets[k] = budget_dist(rng);
  std::uniform_real_distribution<double> prox_dist(1.0, 6.0);
  inst.proximal.resize(N);
  for (int n = 0; n < N; ++n)
    inst.proximal[n] = params.vary_proximal ? prox_dist(rng) : params.proximal;
  return inst;
}

inline SubproblemInput random_subproblem(std::uint64_t seed, int max_dim = 4,
                                         double fixed_proximal = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim_dist(1, max_dim);
  const int dim = dim_dist(rng);
  std::uniform_real_distribution<double> log_gain(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> weight_dist(0.5, 2.0);
  std::uniform_real_distribution<double> prox_dist(0.5, 5.0);
  std::uniform_real_distribution<double> dual_dist(0.0, 3.0);
  std::uniform_real_distribution<double> anchor_dist(0.0, 2.0);

  SubproblemInput input;
  input.user = 0;
  input.gains.resize(dim);
  input.duals.resize(dim);
  input.anchors.resize(dim);
  for (int i = 0; i < dim; ++i) input.gains[i] = std::exp(log_gain(rng));
  input.weight = weight_dist(rng);
  input.proximal = fixed_proximal > 0.0 ? fixed_proximal : prox_dist(rng);
  for (int i = 0; i < dim; ++i) input.duals[i] = dual_dist(rng);
  for (int i = 0; i < dim; ++i) input.anchors[i] = anchor_dist(rng);
  return input;
}

/// Golden-section maximization of a unimodal function on [lo, hi].
inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         double tol = 1e-12) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

inline double subproblem_value(const SubproblemInput& in, const Eigen::VectorXd& p) {
  return in.weight * std::log1p(p.dot(in.gains)) * kInvLn2 - in.duals.dot(p) -
         0.5 * in.proximal * (p - in.anchors).squaredNorm();
}

/// Projected gradient ascent on the strictly concave subproblem objective.
inline Eigen::VectorXd subproblem_pg_solve(const SubproblemInput& in, long max_iters = 400000,
                                           double tol = 1e-14) {
  const double lipschitz = in.weight * in.gains.squaredNorm() * kInvLn2 + in.proximal;
  const double step = 1.0 / lipschitz;
  Eigen::VectorXd p = in.anchors.cwiseMax(0.0);
  for (long it = 0; it < max_iters; ++it) {
    const double signal = p.dot(in.gains);
    const Eigen::VectorXd grad = (in.weight * kInvLn2 / (1.0 + signal)) * in.gains -
                                 in.duals - in.proximal * (p - in.anchors);
    const Eigen::VectorXd next = (p + step * grad).cwiseMax(0.0);
    const double move = (next - p).lpNorm<Eigen::Infinity>();
    p = next;
    if (move <= tol) break;
  }
  return p;
}

struct SubsetOracleResult {
  Eigen::VectorXd powers;
  double value = -std::numeric_limits<double>::infinity();
  bool found = false;
};

/// Exhaustive candidate search: for every subset of coordinates, solve the
/// interior stationarity system through its own quadratic, then keep the
/// KKT-consistent candidate with the best objective.
inline SubsetOracleResult subset_enumeration_solve(const SubproblemInput& in,
                                                   double kkt_slack = 1e-9) {
  const int dim = static_cast<int>(in.gains.size());
  const double c = in.proximal;
  SubsetOracleResult best;
  for (int mask = 0; mask < (1 << dim); ++mask) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
    double signal = 0.0;
    if (mask != 0) {
      double net_price = 0.0, mass = 0.0;
      for (int i = 0; i < dim; ++i) {
        if (!(mask & (1 << i))) continue;
        net_price += in.gains[i] * (in.duals[i] - c * in.anchors[i]);
        mass += in.weight * in.gains[i] * in.gains[i] * kInvLn2;
      }
      const double disc = (c + net_price) * (c + net_price) - 4.0 * c * (net_price - mass);
      if (disc < 0.0) continue;
      signal = (-(c + net_price) + std::sqrt(disc)) / (2.0 * c);
      if (!(1.0 + signal > 0.0)) continue;
      bool positive = true;
      for (int i = 0; i < dim && positive; ++i) {
        if (!(mask & (1 << i))) continue;
        p[i] = in.anchors[i] +
               (in.weight * in.gains[i] * kInvLn2 / (1.0 + signal) - in.duals[i]) / c;
        if (!(p[i] > 0.0)) positive = false;
      }
      if (!positive) continue;
    }
    // zero coordinates must have a nonpositive gradient
    const double slope = in.weight * kInvLn2 / (1.0 + p.dot(in.gains));
    bool kkt_ok = true;
    for (int i = 0; i < dim; ++i) {
      if (mask & (1 << i)) continue;
      const double grad = slope * in.gains[i] - in.duals[i] + c * in.anchors[i];
      if (grad > kkt_slack) kkt_ok = false;
    }
    if (!kkt_ok) continue;
    const double value = subproblem_value(in, p);
    if (!best.found || value > best.value) {
      best.found = true;
      best.value = value;
      best.powers = p;
    }
  }
  return best;
}

}  // namespace daspa::test

#endif  // DASPA_TESTS_SUPPORT_HPP_
