#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "daspa/local_solver.hpp"
#include "support.hpp"

using daspa::SubproblemInput;
using daspa::SubproblemSolution;
using daspa::test::kInvLn2;

namespace {

// one-at-a-time elimination of the most negative coordinate, the slower
// textbook variant, used to cross-check the simultaneous rule
SubproblemSolution eliminate_one_at_a_time(const SubproblemInput& input) {
  const int dim = static_cast<int>(input.gains.size());
  const double c = input.proximal;
  std::vector<int> active(dim);
  std::iota(active.begin(), active.end(), 0);
  Eigen::VectorXd powers = Eigen::VectorXd::Zero(dim);
  while (!active.empty()) {
    double net_price = 0.0, mass = 0.0;
    for (int i : active) {
      net_price += input.gains[i] * (input.duals[i] - c * input.anchors[i]);
      mass += input.weight * input.gains[i] * input.gains[i] * kInvLn2;
    }
    const double signal = daspa::signal_quadratic_root(c, net_price, mass);
    const double slope = input.weight * kInvLn2 / (1.0 + signal);
    powers.setZero();
    int worst = -1;
    for (int i : active) {
      powers[i] = input.anchors[i] + (slope * input.gains[i] - input.duals[i]) / c;
      if (powers[i] <= daspa::kEliminationTol && (worst < 0 || powers[i] < powers[worst]))
        worst = i;
    }
    if (worst < 0) break;
    active.erase(std::find(active.begin(), active.end(), worst));
    powers.setZero();
  }
  SubproblemSolution sol;
  sol.user = input.user;
  sol.active_set = active;
  sol.powers = powers;
  sol.signal = 0.0;
  for (int i : active) sol.signal += powers[i] * input.gains[i];
  return sol;
}

}  // namespace

TEST_CASE("quadratic root: equal price and mass give zero") {
  CHECK(daspa::signal_quadratic_root(1.0, 2.0, 2.0) == 0.0);
}

TEST_CASE("quadratic root: textbook case gives one") {
  CHECK(daspa::signal_quadratic_root(1.0, 0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("quadratic root satisfies its quadratic") {
  const double c = 2.0, m = 1.0, q = 5.0;
  const double s = daspa::signal_quadratic_root(c, m, q);
  CHECK(s == doctest::Approx((-3.0 + std::sqrt(41.0)) / 4.0).epsilon(1e-14));
  CHECK(std::abs(c * s * s + (c + m) * s + (m - q)) <= 1e-12);
}

TEST_CASE("quadratic root is the larger root on random coefficients") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  std::uniform_real_distribution<double> pos(0.1, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double c = pos(rng), m = unif(rng), q = pos(rng);
    const double s = daspa::signal_quadratic_root(c, m, q);
    CHECK(std::abs(c * s * s + (c + m) * s + (m - q)) <= 1e-10);
    CHECK(s > -1.0);
  }
}

TEST_CASE("single antenna solution matches golden-section search") {
  SubproblemInput input;
  input.gains = Eigen::VectorXd::Ones(1);
  input.weight = 1.0;
  input.proximal = 1.0;
  input.duals = Eigen::VectorXd::Zero(1);
  input.anchors = Eigen::VectorXd::Zero(1);
  const SubproblemSolution sol = solve_user_subproblem(input);

  const double expected = daspa::test::golden_max(
      [&](double p) {
        return daspa::test::subproblem_value(input, Eigen::VectorXd::Constant(1, p));
      },
      0.0, 5.0);
  CHECK(sol.powers[0] == doctest::Approx(expected).epsilon(1e-8));
  CHECK(sol.powers[0] == doctest::Approx(0.801036).epsilon(1e-5));
}

TEST_CASE("single antenna: price above the origin slope forces zero") {
  SubproblemInput input;
  input.gains = Eigen::VectorXd::Ones(1);
  input.weight = 1.0;
  input.proximal = 1.0;
  input.duals = Eigen::VectorXd::Constant(1, 2.0);  // > 1/ln 2
  input.anchors = Eigen::VectorXd::Zero(1);
  const SubproblemSolution sol = solve_user_subproblem(input);
  CHECK(sol.powers[0] == 0.0);
  CHECK(sol.active_set.empty());
  CHECK(sol.signal == 0.0);
}

TEST_CASE("matches subset enumeration on random three-antenna problems") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const SubproblemInput input = daspa::test::random_subproblem(seed, 3);
    const SubproblemSolution sol = solve_user_subproblem(input);
    const auto oracle = daspa::test::subset_enumeration_solve(input);
    REQUIRE(oracle.found);
    const double value = daspa::test::subproblem_value(input, sol.powers);
    CHECK(std::abs(value - oracle.value) <= 1e-9);
  }
}

TEST_CASE("matches projected gradient on random subproblems") {
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const SubproblemInput input = daspa::test::random_subproblem(seed, 4);
    const SubproblemSolution sol = solve_user_subproblem(input);
    const Eigen::VectorXd pg = daspa::test::subproblem_pg_solve(input);
    const double ours = daspa::test::subproblem_value(input, sol.powers);
    const double ref = daspa::test::subproblem_value(input, pg);
    CHECK(ours >= ref - 1e-7 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("coordinates killed by the unconstrained maximizer stay at zero") {
  // the multi-elimination rule rests on this monotonicity
  for (std::uint64_t seed = 500; seed <= 700; ++seed) {
    const SubproblemInput input = daspa::test::random_subproblem(seed, 4);
    const int dim = static_cast<int>(input.gains.size());
    const double c = input.proximal;
    // unconstrained stationary point over the full set
    double net_price = 0.0, mass = 0.0;
    for (int i = 0; i < dim; ++i) {
      net_price += input.gains[i] * (input.duals[i] - c * input.anchors[i]);
      mass += input.weight * input.gains[i] * input.gains[i] * kInvLn2;
    }
    const double signal = daspa::signal_quadratic_root(c, net_price, mass);
    const double slope = input.weight * kInvLn2 / (1.0 + signal);
    const auto oracle = daspa::test::subset_enumeration_solve(input);
    REQUIRE(oracle.found);
    for (int i = 0; i < dim; ++i) {
      const double unconstrained =
          input.anchors[i] + (slope * input.gains[i] - input.duals[i]) / c;
      if (unconstrained <= 0.0) CHECK(oracle.powers[i] <= 1e-12);
    }
  }
}

TEST_CASE("simultaneous elimination agrees with one-at-a-time elimination") {
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const SubproblemInput input = daspa::test::random_subproblem(seed, 4);
    const SubproblemSolution fast = solve_user_subproblem(input);
    const SubproblemSolution slow = eliminate_one_at_a_time(input);
    CHECK(fast.active_set == slow.active_set);
    const double fast_value = daspa::test::subproblem_value(input, fast.powers);
    const double slow_value = daspa::test::subproblem_value(input, slow.powers);
    CHECK(std::abs(fast_value - slow_value) <= 1e-10);
  }
}

TEST_CASE("solution is invariant under antenna permutation") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const SubproblemInput input = daspa::test::random_subproblem(seed, 4);
    const int dim = static_cast<int>(input.gains.size());
    std::vector<int> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    SubproblemInput shuffled = input;
    for (int i = 0; i < dim; ++i) {
      shuffled.gains[i] = input.gains[perm[i]];
      shuffled.duals[i] = input.duals[perm[i]];
      shuffled.anchors[i] = input.anchors[perm[i]];
    }
    const SubproblemSolution base = solve_user_subproblem(input);
    const SubproblemSolution other = solve_user_subproblem(shuffled);
    for (int i = 0; i < dim; ++i)
      CHECK(std::abs(other.powers[i] - base.powers[perm[i]]) <= 1e-12);
  }
}

TEST_CASE("signal equals the gain-weighted power sum") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const SubproblemInput input = daspa::test::random_subproblem(seed, 4);
    const SubproblemSolution sol = solve_user_subproblem(input);
    const double direct = sol.powers.dot(input.gains);
    CHECK(std::abs(sol.signal - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
    for (int i = 0; i < input.gains.size(); ++i) {
      const bool in_active = std::find(sol.active_set.begin(), sol.active_set.end(), i) !=
                             sol.active_set.end();
      CHECK((sol.powers[i] > 0.0) == in_active);
    }
  }
}

TEST_CASE("kkt residual of the solver output is tiny") {
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const SubproblemInput input = daspa::test::random_subproblem(seed, 4);
    const SubproblemSolution sol = solve_user_subproblem(input);
    CHECK(daspa::kkt_residual(input, sol) <= 1e-9);
  }
}

TEST_CASE("kkt residual: all-zero solution with downhill gradients is exact") {
  SubproblemInput input;
  input.gains = Eigen::Vector2d(1.0, 0.5);
  input.weight = 1.0;
  input.proximal = 1.0;
  input.duals = Eigen::Vector2d(5.0, 5.0);
  input.anchors = Eigen::Vector2d::Zero();
  const SubproblemSolution sol = solve_user_subproblem(input);
  CHECK(sol.active_set.empty());
  CHECK(daspa::kkt_residual(input, sol) == 0.0);
}

TEST_CASE("kkt residual grows with a deliberate perturbation") {
  const SubproblemInput input = daspa::test::random_subproblem(42, 3, 2.0);
  SubproblemSolution sol = solve_user_subproblem(input);
  REQUIRE_FALSE(sol.active_set.empty());
  const int i = sol.active_set.front();
  sol.powers[i] += 0.1;
  CHECK(daspa::kkt_residual(input, sol) >= input.proximal * 0.1 - 1e-9);
}
