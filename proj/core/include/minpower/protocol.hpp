#pragma once

#include "minpower/graph.hpp"
#include "minpower/region.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace minpower {

// Power escalation used by the neighbor searches: start at p0 and apply
// `rule` until the search disc covers the remaining region. `rule` must be
// strictly increasing and must reach p_max from p0 in finitely many steps;
// validate() probes exactly that and rejects schedules that cannot finish.
struct EscalationSchedule {
    double p0 = 0.0;
    std::function<double(double)> rule;

    // p0 = p_max / 2^10 with rule(p) = 2p: at most 11 escalations, enough to
    // exercise multi-iteration searches without dominating runtime.
    static EscalationSchedule doubling(const PowerModel& m);

    void validate(const PowerModel& m) const;

    // One escalation step, clamped so the final step lands exactly on p_max.
    double next(double p, double p_max) const;
};

enum class ProtocolKind { Smecn, Mecn };

// Order in which newly discovered nodes are fed to the MECN Flip cascade.
// The result genuinely depends on it (see the four-node order-dependence
// fixture in the tests), so it is an explicit parameter, not a hidden
// implementation detail. Distance ties fall back to ascending id.
enum class FlipOrder { ById, ByDistance, ByDistanceReverse };

// Snapshot of one node's search handed to an observer after each iteration
// of the escalation loop. `discovered` is A in discovery order; eta's
// obstructor set is A for SMECN and A minus non_neighbors for MECN.
struct SearchState {
    NodeRecord self;
    double p = 0.0;
    std::vector<NodeRecord> discovered;
    std::vector<NodeId> non_neighbors;  // sorted by id
    EtaRegion eta;
    std::uint32_t iteration = 0;
};

using SearchObserver = std::function<void(const SearchState&)>;

struct NodeSearchResult {
    std::vector<NodeId> neighbors;   // sorted by id
    std::vector<NodeId> discovered;  // A at termination, sorted by id
    double power = 0.0;              // min power whose disc covers the final eta
    std::uint32_t iterations = 0;    // escalation loop bodies executed
};

// Per-node searches. Discovery is an oracle over `world`: a broadcast at
// power p reaches exactly the nodes inside the disc F(u,p), with no loss.
// `u` must appear in `world` (it is skipped during discovery).
NodeSearchResult smecn_node(const PowerModel& model, const NodeRecord& u,
                            std::span<const NodeRecord> world,
                            const EscalationSchedule& schedule, const SamplingSpec& spec,
                            const SearchObserver& observer = {});

NodeSearchResult mecn_node(const PowerModel& model, const NodeRecord& u,
                           std::span<const NodeRecord> world,
                           const EscalationSchedule& schedule, const SamplingSpec& spec,
                           FlipOrder order, const SearchObserver& observer = {});

struct NodeOutcome {
    NodeId id = 0;
    std::vector<NodeId> neighbors;
    double power = 0.0;
    std::uint32_t iterations = 0;
};

struct ProtocolResult {
    std::vector<NodeOutcome> per_node;  // sorted by id
    NetworkGraph graph;                 // edge (u,v) iff v in N(u)
};

// Runs the chosen search at every node of the world and unions the results
// into a directed graph. Locations must be pairwise distinct.
ProtocolResult run_protocol(const PowerModel& model, std::span<const NodeRecord> world,
                            const EscalationSchedule& schedule, const SamplingSpec& spec,
                            ProtocolKind kind, FlipOrder order = FlipOrder::ById);

} // namespace minpower
