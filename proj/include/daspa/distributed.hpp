#ifndef DASPA_DISTRIBUTED_HPP_
#define DASPA_DISTRIBUTED_HPP_

#include <Eigen/Core>
#include <vector>

#include "daspa/engine.hpp"
#include "daspa/problem.hpp"

namespace daspa {

/// Placement of the computation: which base station owns each antenna and
/// which base station runs each user's subproblem.
struct NodeTopology {
  int num_bs = 0;
  std::vector<int> bs_of_antenna;
  std::vector<int> host_of_user;
};

/// Hosts each user at the base station owning its strongest serving antenna
/// (largest gain, ties toward the lower base-station id). The host therefore
/// always owns at least one antenna in the user's serving set.
NodeTopology assign_hosts(const ProblemInstance& inst, const std::vector<int>& bs_of_antenna);

enum class MessageKind { PowerReport, DualReport };

struct BackhaulMessage {
  MessageKind kind = MessageKind::PowerReport;
  int round = 0;
  int from_bs = 0;
  int to_bs = 0;
  int antenna = 0;
  int user = -1;       // -1 for DualReport
  double value = 0.0;  // power in Watts or price
};

struct DistributedResult {
  RunResult run;
  std::vector<BackhaulMessage> ledger;  // every message, local ones included
  std::vector<long> backhaul_per_round; // cross-BS messages only
};

/// Synchronous-round execution of the iteration across base-station nodes.
/// Per round: hosts solve their users' subproblems and report powers to
/// antenna owners; owners take the dual step and report prices back; hosts
/// re-solve and move their anchors. Nodes touch only their own state and the
/// current round's inbox, and produce iterates identical to run().
DistributedResult run_distributed(const ProblemInstance& inst, const NodeTopology& nodes,
                                  const RunConfig& config);

/// Largest possible number of backhaul messages in one round: a power report
/// and a price report for every (user, serving antenna) pair whose owner is
/// not the user's host.
long backhaul_bound_per_round(const ProblemInstance& inst, const NodeTopology& nodes);

}  // namespace daspa

#endif  // DASPA_DISTRIBUTED_HPP_
