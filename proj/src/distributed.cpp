#include "daspa/distributed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace daspa {
namespace {

// State a base station is allowed to touch: its own antennas and hosted
// users, plus whatever arrived in the current round's inbox.
struct HostedUser {
  int user = 0;
  std::vector<int> serving;  // global antenna ids, ascending
  SubproblemInput input;     // duals field doubles as the price cache
};

struct OwnedAntenna {
  int antenna = 0;
  double price = 0.0;
  double step = 0.0;
  double budget = 0.0;
  bool active = false;                        // serves at least one user
  std::vector<int> report_to;                 // distinct host BS ids, ascending
  std::vector<std::pair<int, double>> inbox;  // (user, power) for this round
};

struct Node {
  int id = 0;
  std::vector<HostedUser> users;
  std::vector<OwnedAntenna> antennas;
};

}  // namespace

NodeTopology assign_hosts(const ProblemInstance& inst, const std::vector<int>& bs_of_antenna) {
  const AccessMap& access = inst.access;
  if (static_cast<int>(bs_of_antenna.size()) != access.num_antennas())
    throw std::invalid_argument("assign_hosts: bs_of_antenna size mismatch");

  NodeTopology nodes;
  nodes.bs_of_antenna = bs_of_antenna;
  nodes.num_bs = bs_of_antenna.empty()
                     ? 0
                     : *std::max_element(bs_of_antenna.begin(), bs_of_antenna.end()) + 1;
  nodes.host_of_user.resize(access.num_users());
  for (int n = 0; n < access.num_users(); ++n) {
    double best_gain = -1.0;
    int best_bs = -1;
    for (int k : access.serving_set(n)) {
      const double gain = inst.gains[access.variable_index(k, n)];
      const int bs = bs_of_antenna[k];
      if (gain > best_gain || (gain == best_gain && bs < best_bs)) {
        best_gain = gain;
        best_bs = bs;
      }
    }
    nodes.host_of_user[n] = best_bs;
  }
  return nodes;
}

long backhaul_bound_per_round(const ProblemInstance& inst, const NodeTopology& nodes) {
  const AccessMap& access = inst.access;
  long remote_pairs = 0;
  for (int n = 0; n < access.num_users(); ++n)
    for (int k : access.serving_set(n))
      if (nodes.bs_of_antenna[k] != nodes.host_of_user[n]) ++remote_pairs;
  return 2 * remote_pairs;
}

DistributedResult run_distributed(const ProblemInstance& inst, const NodeTopology& nodes,
                                  const RunConfig& config) {
  const AccessMap& access = inst.access;
  const int num_bs = nodes.num_bs;
  const double beta = config.step_sizes.anchor_step;

  AlgorithmState start = config.initial_state ? *config.initial_state : initial_state(inst);

  // Split prices, anchors, and channel data by ownership. The round loop
  // below only ever touches node-local state and delivered messages; the
  // global vectors are instrumentation mirrors for traces and stopping.
  std::vector<Node> bs(num_bs);
  for (int b = 0; b < num_bs; ++b) bs[b].id = b;
  for (int k = 0; k < access.num_antennas(); ++k) {
    OwnedAntenna antenna;
    antenna.antenna = k;
    antenna.price = start.duals[k];
    antenna.step = config.step_sizes.dual_steps[k];
    antenna.budget = inst.budgets[k];
    antenna.active = !access.served_set(k).empty();
    for (int n : access.served_set(k)) antenna.report_to.push_back(nodes.host_of_user[n]);
    std::sort(antenna.report_to.begin(), antenna.report_to.end());
    antenna.report_to.erase(std::unique(antenna.report_to.begin(), antenna.report_to.end()),
                            antenna.report_to.end());
    bs[nodes.bs_of_antenna[k]].antennas.push_back(antenna);
  }
  for (int n = 0; n < access.num_users(); ++n) {
    HostedUser hosted;
    hosted.user = n;
    hosted.serving = access.serving_set(n);
    hosted.input = make_subproblem_input(inst, n, start.duals, start.anchors);
    bs[nodes.host_of_user[n]].users.push_back(hosted);
  }

  DistributedResult result;
  Eigen::VectorXd powers = start.powers;
  Eigen::VectorXd duals = start.duals;
  Eigen::VectorXd anchors = start.anchors;

  bool converged = false;
  int t = 0;
  for (; t < config.max_iterations; ++t) {
    const Eigen::VectorXd round_duals = duals;
    const Eigen::VectorXd round_anchors = anchors;
    std::vector<BackhaulMessage> power_messages;
    std::vector<BackhaulMessage> price_messages;
    long backhaul = 0;

    // Hosts solve their users' subproblems against the cached prices and
    // report each power to the antenna's owner.
    for (auto& node : bs) {
      for (auto& hosted : node.users) {
        const SubproblemSolution sol = solve_user_subproblem(hosted.input);
        powers.segment(access.user_offset(hosted.user), sol.powers.size()) = sol.powers;
        for (size_t j = 0; j < hosted.serving.size(); ++j) {
          const int k = hosted.serving[j];
          power_messages.push_back({MessageKind::PowerReport, t, node.id,
                                    nodes.bs_of_antenna[k], k, hosted.user, sol.powers[j]});
        }
      }
    }
    for (const auto& msg : power_messages) {
      if (msg.from_bs != msg.to_bs) ++backhaul;
      for (auto& antenna : bs[msg.to_bs].antennas) {
        if (antenna.antenna == msg.antenna) {
          antenna.inbox.emplace_back(msg.user, msg.value);
          break;
        }
      }
    }

    // Owners take the dual step, accumulating in ascending user order so the
    // arithmetic matches the monolithic loop, then report the new price once
    // to every host that needs it.
    for (auto& node : bs) {
      for (auto& antenna : node.antennas) {
        if (antenna.active) {
          std::sort(antenna.inbox.begin(), antenna.inbox.end());
          double used = 0.0;
          for (const auto& [user, value] : antenna.inbox) used += value;
          antenna.price = std::max(0.0, antenna.price + antenna.step * (used - antenna.budget));
        }
        antenna.inbox.clear();
        duals[antenna.antenna] = antenna.price;
        for (int to : antenna.report_to)
          price_messages.push_back({MessageKind::DualReport, t, node.id, to,
                                    antenna.antenna, -1, antenna.price});
      }
    }
    for (const auto& msg : price_messages) {
      if (msg.from_bs != msg.to_bs) ++backhaul;
      for (auto& hosted : bs[msg.to_bs].users) {
        for (size_t j = 0; j < hosted.serving.size(); ++j)
          if (hosted.serving[j] == msg.antenna) hosted.input.duals[j] = msg.value;
      }
    }

    // Hosts re-solve at the fresh prices and move their anchors locally.
    for (auto& node : bs) {
      for (auto& hosted : node.users) {
        const SubproblemSolution sol = solve_user_subproblem(hosted.input);
        hosted.input.anchors += beta * (sol.powers - hosted.input.anchors);
        anchors.segment(access.user_offset(hosted.user), sol.powers.size()) =
            hosted.input.anchors;
      }
    }

    const double dual_step = (duals - round_duals).lpNorm<Eigen::Infinity>();
    const double anchor_step = (anchors - round_anchors).lpNorm<Eigen::Infinity>();

    if (config.record_iterates)
      result.run.iterates.push_back({powers, round_duals, round_anchors});
    if (config.record_trace) {
      IterationRecord rec;
      rec.iteration = t;
      rec.lagrangian = lagrangian_value(inst, powers, round_duals, round_anchors);
      if (config.reference_value) rec.dual_gap = rec.lagrangian - *config.reference_value;
      rec.dual_step_inf = dual_step;
      rec.anchor_step_inf = anchor_step;
      rec.messages_exchanged = backhaul;
      result.run.trace.push_back(rec);
    }
    result.ledger.insert(result.ledger.end(), power_messages.begin(), power_messages.end());
    result.ledger.insert(result.ledger.end(), price_messages.begin(), price_messages.end());
    result.backhaul_per_round.push_back(backhaul);

    if (std::max(dual_step, anchor_step) <= config.stop_tol) {
      ++t;
      converged = true;
      break;
    }
  }

  result.run.state.powers = anchors;
  result.run.state.duals = duals;
  result.run.state.anchors = anchors;
  result.run.state.iteration = t;
  result.run.converged = converged;
  return result;
}

}  // namespace daspa
