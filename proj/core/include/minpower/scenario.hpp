#pragma once

#include "minpower/protocol.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace minpower {

// A scenario whose reference graph cannot be made connected (explicit node
// list, or random placement after the resample budget). The CLI maps this to
// its infeasibility exit code.
struct ScenarioInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SinkRule { BoundaryMidpoint, Corner, Explicit };

struct SinkPlacement {
    SinkRule rule = SinkRule::BoundaryMidpoint;
    Location explicit_loc{};  // consulted only when rule == Explicit
};

// Serializable escalation parameters: p0 = p_max / p0_divisor and
// rule(p) = factor * p. Documents store these; the running protocol gets the
// materialized EscalationSchedule.
struct ScheduleConfig {
    double p0_divisor = 1024.0;
    double factor = 2.0;

    void validate() const;  // both must exceed 1
    EscalationSchedule make(const PowerModel& m) const;
};

// Default per-node energy budget, in power-units x seconds. Sized against
// the default scenario below so that a meaningful fraction of nodes dies
// within the simulated horizon while the network as a whole survives it
// (measured on 20 seeds: roughly 40% of sensors die in 1200 s).
inline constexpr double kDefaultInitialEnergy = 1.0e10;

// Defaults describe the 200-node reference experiment: 1500 x 1500 m field,
// 500 m range with t = 1 and n = 4 (p_max = 500^4), half a packet per second
// per node, 512-byte packets at 2 Mb/s, 1200 s horizon.
struct ScenarioConfig {
    std::uint32_t node_count = 200;
    double width = 1500.0;
    double height = 1500.0;
    std::uint64_t seed = 1;  // drives placement and event phase offsets
    PowerModel model{1.0, 4.0, 0.0, 6.25e10};
    ScheduleConfig schedule{};
    ProtocolKind protocol = ProtocolKind::Smecn;
    FlipOrder flip_order = FlipOrder::ById;
    double traffic_rate = 0.5;       // packets per second per sensor
    std::uint32_t packet_bytes = 512;
    double bandwidth_bps = 2.0e6;
    double duration = 1200.0;        // seconds; 0 means snapshot only
    double initial_energy = kDefaultInitialEnergy;
    double beacon_interval = 1.0;    // seconds
    double sample_interval = 10.0;   // metrics cadence, seconds
    SinkPlacement sink{};
    SamplingSpec sampling{};

    void validate() const;

    double packet_airtime() const { return packet_bytes * 8.0 / bandwidth_bps; }
    // A beacon is an eighth of a data packet (64 bytes at the default size).
    double beacon_airtime() const { return packet_airtime() / 8.0; }
};

Location sink_location(const ScenarioConfig& cfg);

// Sensors plus the sink. The sink is always last, energy-unconstrained in
// the simulator, with id = max sensor id + 1.
struct Placement {
    std::vector<NodeRecord> nodes;  // sorted by id, sink last
    NodeId sink_id = 0;
    std::uint32_t resamples = 0;
};

// Draws sensor locations uniformly from the scenario seed and appends the
// sink. If the reference graph over the result is disconnected the placement
// is redrawn from derived seeds, up to 64 attempts, then ScenarioInfeasible.
// An explicit node list (document override) replaces the random draw; it is
// used as-is and only checked.
Placement materialize_nodes(const ScenarioConfig& cfg,
                            const std::optional<std::vector<NodeRecord>>& explicit_nodes = {});

} // namespace minpower
