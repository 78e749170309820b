#include "minpower/scenario.hpp"

#include "minpower/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace minpower {

namespace {

constexpr std::uint32_t kMaxPlacementAttempts = 64;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

bool has_coincident_locations(const std::vector<NodeRecord>& nodes) {
    std::vector<Location> locs;
    locs.reserve(nodes.size());
    for (const NodeRecord& n : nodes) locs.push_back(n.loc);
    std::sort(locs.begin(), locs.end(), [](const Location& a, const Location& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    for (std::size_t i = 1; i < locs.size(); ++i) {
        if (locs[i] == locs[i - 1]) return true;
    }
    return false;
}

} // namespace

void ScheduleConfig::validate() const {
    require(std::isfinite(p0_divisor) && p0_divisor > 1.0, "schedule: p0_divisor must exceed 1");
    require(std::isfinite(factor) && factor > 1.0, "schedule: factor must exceed 1");
}

EscalationSchedule ScheduleConfig::make(const PowerModel& m) const {
    validate();
    m.validate();
    double f = factor;
    return EscalationSchedule{m.p_max / p0_divisor, [f](double p) { return f * p; }};
}

void ScenarioConfig::validate() const {
    require(node_count >= 1, "scenario: node_count must be positive");
    require(std::isfinite(width) && width > 0.0, "scenario: width must be positive");
    require(std::isfinite(height) && height > 0.0, "scenario: height must be positive");
    model.validate();
    schedule.validate();
    require(std::isfinite(traffic_rate) && traffic_rate > 0.0,
            "scenario: traffic_rate must be positive");
    require(packet_bytes >= 1, "scenario: packet_bytes must be positive");
    require(std::isfinite(bandwidth_bps) && bandwidth_bps > 0.0,
            "scenario: bandwidth must be positive");
    require(std::isfinite(duration) && duration >= 0.0, "scenario: duration must be non-negative");
    require(initial_energy > 0.0, "scenario: initial_energy must be positive");
    require(std::isfinite(beacon_interval) && beacon_interval > 0.0,
            "scenario: beacon_interval must be positive");
    require(std::isfinite(sample_interval) && sample_interval > 0.0,
            "scenario: sample_interval must be positive");
    if (sink.rule == SinkRule::Explicit) {
        require(std::isfinite(sink.explicit_loc.x) && std::isfinite(sink.explicit_loc.y),
                "scenario: explicit sink location must be finite");
    }
    sampling.validate();
}

Location sink_location(const ScenarioConfig& cfg) {
    switch (cfg.sink.rule) {
    case SinkRule::BoundaryMidpoint:
        return Location{cfg.width / 2.0, 0.0};  // midpoint of the bottom edge
    case SinkRule::Corner:
        return Location{0.0, 0.0};
    case SinkRule::Explicit:
        return cfg.sink.explicit_loc;
    }
    throw std::logic_error("sink_location: bad rule");
}

Placement materialize_nodes(const ScenarioConfig& cfg,
                            const std::optional<std::vector<NodeRecord>>& explicit_nodes) {
    cfg.validate();
    const Location sink_loc = sink_location(cfg);

    if (explicit_nodes) {
        require(!explicit_nodes->empty(), "scenario: explicit node list is empty");
        Placement placement;
        placement.nodes = *explicit_nodes;
        std::sort(placement.nodes.begin(), placement.nodes.end(),
                  [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
        placement.sink_id = placement.nodes.back().id + 1;
        placement.nodes.push_back(NodeRecord{placement.sink_id, sink_loc});
        require(!has_coincident_locations(placement.nodes), "scenario: coincident node locations");
        NetworkGraph ref = build_reference_graph(cfg.model, placement.nodes);
        if (!is_connected(ref))
            throw ScenarioInfeasible("explicit node list gives a disconnected reference graph");
        return placement;
    }

    for (std::uint32_t attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
        SplitMix64 rng(mix_seed(cfg.seed, attempt));
        Placement placement;
        placement.nodes.reserve(cfg.node_count + 1);
        for (std::uint32_t i = 0; i < cfg.node_count; ++i) {
            double x = rng.next_unit() * cfg.width;
            double y = rng.next_unit() * cfg.height;
            placement.nodes.push_back(NodeRecord{i, Location{x, y}});
        }
        placement.sink_id = cfg.node_count;
        placement.nodes.push_back(NodeRecord{placement.sink_id, sink_loc});
        placement.resamples = attempt;
        if (has_coincident_locations(placement.nodes)) continue;
        NetworkGraph ref = build_reference_graph(cfg.model, placement.nodes);
        if (is_connected(ref)) return placement;
    }
    throw ScenarioInfeasible("no connected placement found within the resample budget");
}

} // namespace minpower
