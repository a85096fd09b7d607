#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "daspa/baselines.hpp"
#include "daspa/evaluation.hpp"
#include "support.hpp"

using daspa::AccessMap;
using daspa::ChannelScenario;
using daspa::ProblemInstance;

namespace {

ProblemInstance two_antenna_instance() {
  ProblemInstance inst;
  inst.access = AccessMap::from_serving_sets(2, {{0, 1}});
  inst.gains = (Eigen::VectorXd(2) << 1.0, 2.0).finished();
  inst.weights = Eigen::VectorXd::Ones(1);
  inst.budgets = Eigen::VectorXd::Ones(2);
  inst.proximal = Eigen::VectorXd::Constant(1, 3.0);
  return inst;
}

}  // namespace

TEST_CASE("conservative rate hits the log2 anchor points") {
  const ProblemInstance inst = two_antenna_instance();
  CHECK(conservative_rate(inst, Eigen::VectorXd::Zero(2), 0) == 0.0);
  // p = (1, 0): signal 1 -> one bit
  CHECK(conservative_rate(inst, (Eigen::VectorXd(2) << 1.0, 0.0).finished(), 0) ==
        doctest::Approx(1.0).epsilon(1e-15));
  // p = (1, 1): signal 3 -> two bits
  CHECK(conservative_rate(inst, (Eigen::VectorXd(2) << 1.0, 1.0).finished(), 0) ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("true rate with signal at the noise floor is one bit") {
  const AccessMap access = AccessMap::from_serving_sets(1, {{0}});
  ChannelScenario scenario;
  scenario.noise_power = 1e-13;
  scenario.raw_gain = Eigen::MatrixXd::Constant(1, 1, 1e-13);
  scenario.large_scale_db = Eigen::MatrixXd::Zero(1, 1);
  scenario.sigma_peak = Eigen::VectorXd::Constant(1, 1e-12);
  scenario.schedule.channel_of_user = {0};
  scenario.schedule.interference = {{}};

  CHECK(daspa::true_rate(Eigen::VectorXd::Ones(1), scenario, access, 0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(daspa::true_rate(Eigen::VectorXd::Zero(1), scenario, access, 0) == 0.0);
}

TEST_CASE("true rate dominates the conservative rate under the cap") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto built = daspa::make_scenario({.cells = 2, .users_per_cell = 3}, seed);
    const int N = built.access.num_users();
    const int K = built.access.num_antennas();
    const auto inst = build_problem_instance(built.scenario, built.access,
                                             Eigen::VectorXd::Ones(N),
                                             Eigen::VectorXd::Constant(K, 0.1),
                                             Eigen::VectorXd::Constant(N, 3.0));
    // random feasible allocation: a scaled equal split
    Eigen::VectorXd p = daspa::equal_power_allocation(inst);
    for (int i = 0; i < p.size(); ++i) p[i] *= unif(rng);

    for (int n = 0; n < N; ++n) {
      double interference = 0.0;
      for (const auto& [k, m] : built.scenario.schedule.interference[n])
        interference +=
            built.scenario.raw_gain(k, n) * p[built.access.variable_index(k, m)];
      if (built.scenario.noise_power + interference <= built.scenario.sigma_peak[n]) {
        CHECK(daspa::true_rate(p, built.scenario, built.access, n) >=
              conservative_rate(inst, p, n) - 1e-12);
        ++checked;
      }
    }
  }
  CHECK(checked > 0);  // the 5 dB margin leaves room, most users qualify
}

TEST_CASE("objective gradient agrees with central differences") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.05, 1.5);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ProblemInstance inst = daspa::test::random_instance(seed);
    Eigen::VectorXd p(inst.num_variables());
    for (int i = 0; i < p.size(); ++i) p[i] = unif(rng);
    const Eigen::VectorXd grad = objective_gradient(inst, p);
    const double h = 1e-6;
    for (int i = 0; i < p.size(); ++i) {
      Eigen::VectorXd hi = p, lo = p;
      hi[i] += h;
      lo[i] -= h;
      const double fd = (objective_value(inst, hi) - objective_value(inst, lo)) / (2.0 * h);
      CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6));
      CHECK(grad[i] > 0.0);  // conservative rate is nondecreasing in power
    }
  }
}

TEST_CASE("both rate functions are nondecreasing in every power") {
  const auto built = daspa::make_scenario({.cells = 1, .users_per_cell = 3}, 2);
  const int N = built.access.num_users();
  const auto inst = build_problem_instance(built.scenario, built.access,
                                           Eigen::VectorXd::Ones(N),
                                           Eigen::VectorXd::Constant(7, 0.1),
                                           Eigen::VectorXd::Constant(N, 3.0));
  const Eigen::VectorXd p = daspa::equal_power_allocation(inst);
  const double h = 1e-9;
  for (int n = 0; n < N; ++n) {
    for (int k : built.access.serving_set(n)) {
      Eigen::VectorXd hi = p;
      hi[built.access.variable_index(k, n)] += h;
      CHECK(conservative_rate(inst, hi, n) >= conservative_rate(inst, p, n));
      CHECK(daspa::true_rate(hi, built.scenario, built.access, n) >=
            daspa::true_rate(p, built.scenario, built.access, n));
    }
  }
}

TEST_CASE("dual gap trace vanishes on a converged run") {
  const ProblemInstance inst = daspa::test::random_instance(4);
  daspa::RunConfig config;
  config.step_sizes = compute_theorem1_step_sizes(inst);
  config.stop_tol = 1e-11;
  config.max_iterations = 60000;
  const daspa::RunResult tight = run(inst, config);
  REQUIRE(tight.converged);
  const double optimum = objective_value(inst, tight.state.anchors);

  const auto gaps = daspa::dual_gap_trace(tight.trace, optimum);
  REQUIRE_FALSE(gaps.empty());
  CHECK(std::abs(gaps.back()) <= 1e-6 * std::max(1.0, std::abs(optimum)));
  // the settling iteration is consistent with the trace
  const int when = daspa::iterations_to_gap(tight.trace, optimum, 1e-4);
  REQUIRE(when >= 0);
  for (size_t t = when; t < tight.trace.size(); ++t)
    CHECK(std::abs(tight.trace[t].lagrangian - optimum) <= 1e-4);
  if (when > 0) CHECK(std::abs(tight.trace[when - 1].lagrangian - optimum) > 1e-4);
}

TEST_CASE("throughput report carries weighted sums and both units") {
  const auto built = daspa::make_scenario({.cells = 1, .users_per_cell = 2}, 6);
  const int N = built.access.num_users();
  const auto inst = build_problem_instance(built.scenario, built.access,
                                           Eigen::VectorXd::Constant(N, 2.0),
                                           Eigen::VectorXd::Constant(7, 0.1),
                                           Eigen::VectorXd::Constant(N, 3.0));
  const Eigen::VectorXd p = daspa::equal_power_allocation(inst);
  const auto report = make_throughput_report(built.scenario, built.access, inst, p, "epa", 6);
  CHECK(report.strategy == "epa");
  CHECK(report.true_bps_hz.size() == N);
  CHECK(report.weighted_sum_conservative ==
        doctest::Approx(2.0 * report.conservative_bps_hz.sum()).epsilon(1e-12));
  CHECK(report.mean_true_bps() ==
        doctest::Approx(report.true_bps_hz.mean() * 1e6).epsilon(1e-12));
  CHECK(report.conservative_bps_hz.minCoeff() >= 0.0);
}
