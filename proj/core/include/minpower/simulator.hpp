#pragma once

#include "minpower/scenario.hpp"

#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace minpower {

struct MetricsRow {
    double time = 0.0;
    std::uint32_t alive = 0;           // living sensors
    std::uint32_t sink_connected = 0;  // living sensors with a route to the sink
    double mean_degree = 0.0;          // mean out-degree over living sensors
    double mean_power = 0.0;           // mean p(u) over living sensors
    std::uint64_t packets_delivered = 0;
    double energy_consumed_mean = 0.0;  // total consumed / sensor count
    double mean_hops = 0.0;             // over delivered packets
};

struct MetricsSeries {
    std::vector<MetricsRow> rows;
    std::string to_csv() const;  // fixed header and column order, %.10g floats
};

enum class TraceKind { Death, Reconfiguration, Undeliverable, PropertyViolation };

struct TraceEvent {
    double time = 0.0;
    TraceKind kind{};
    std::vector<NodeId> nodes;
};

struct SimOptions {
    bool collect_trace = false;
    // After a death, check that the refreshed graph still preserves optimal
    // path costs over the living reference graph: every death on small
    // networks, every eighth on larger ones. Violations are counted and
    // traced, never silently ignored.
    bool verify_reconfiguration = true;
};

// Deterministic discrete-event lifetime simulation. Sensors emit periodic
// beacons (p(u) x beacon airtime) and CBR packets routed to the sink along
// minimum-cost paths in the protocol graph; transmissions debit energy,
// depleted nodes die, and deaths trigger a local protocol re-run at every
// node that had discovered the deceased. The sink collects traffic, pays
// nothing, and cannot die. A run is single-threaded and reproducible down to
// the metric bytes.
class Simulation {
public:
    explicit Simulation(const ScenarioConfig& cfg, SimOptions options = {},
                        const std::optional<std::vector<NodeRecord>>& explicit_nodes = {});

    // Processes all events up to cfg.duration. Subsequent calls return the
    // already-computed series.
    const MetricsSeries& run();

    NodeId sink_id() const { return sink_id_; }
    std::uint32_t resample_count() const { return resamples_; }
    const NetworkGraph& graph() const { return graph_; }
    const std::vector<NodeRecord>& world() const { return world_; }

    bool alive(NodeId id) const;
    std::size_t alive_sensors() const;
    double remaining_energy(NodeId id) const;
    double power_setting(NodeId id) const;

    // Current minimum-cost id path src -> sink over living nodes, nullopt if
    // unreachable. src == sink yields the single-node path.
    std::optional<std::vector<NodeId>> route_to_sink(NodeId src) const;

    double total_debited() const { return total_debited_; }
    // |sum of per-node consumption - sum of recorded debits| / max(1, debits)
    double conservation_error() const;

    const std::vector<TraceEvent>& trace() const { return trace_; }
    std::uint64_t undeliverable_packets() const { return undeliverable_; }
    std::uint64_t property_violations() const { return property_violations_; }

private:
    enum class EventKind { Sample, Beacon, Packet };

    struct Event {
        double time = 0.0;
        std::uint64_t seq = 0;
        EventKind kind{};
        std::uint32_t node = 0;  // vertex index; unused for Sample

        bool operator>(const Event& other) const {
            if (time != other.time) return time > other.time;
            return seq > other.seq;
        }
    };

    void schedule(double time, EventKind kind, std::uint32_t node);
    void record_sample(double time);
    void process_beacon(std::uint32_t idx, double time);
    void process_packet(std::uint32_t idx, double time);
    // Debits up to `amount`; returns false when funds ran out (node died).
    bool debit(std::uint32_t idx, double amount);
    void handle_death(std::uint32_t idx, double time);
    void refresh_route_cache() const;
    bool is_sink(std::uint32_t idx) const { return idx == sink_idx_; }
    std::uint32_t count_sink_connected() const;
    void add_trace(double time, TraceKind kind, std::vector<NodeId> nodes);
    void verify_after_death(double time);

    ScenarioConfig cfg_;
    SimOptions options_;
    std::vector<NodeRecord> world_;  // sorted by id, sink last
    NodeId sink_id_ = 0;
    std::uint32_t sink_idx_ = 0;
    std::uint32_t resamples_ = 0;
    EscalationSchedule schedule_fn_;

    NetworkGraph graph_;
    std::vector<double> power_;
    std::vector<std::vector<NodeId>> discovered_;
    std::vector<double> energy_;  // sensors only (index < sink_idx_)
    std::vector<char> alive_;
    std::uint64_t deaths_ = 0;

    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
    std::uint64_t next_seq_ = 0;

    // Route cache: next hop toward the sink per vertex, rebuilt lazily after
    // topology changes.
    mutable std::vector<std::uint32_t> next_hop_;
    mutable std::uint64_t route_version_ = ~0ULL;
    std::uint64_t topology_version_ = 0;

    MetricsSeries series_;
    bool ran_ = false;
    std::uint64_t packets_delivered_ = 0;
    std::uint64_t undeliverable_ = 0;
    std::uint64_t total_hops_ = 0;
    double total_debited_ = 0.0;
    std::uint64_t property_violations_ = 0;
    std::vector<TraceEvent> trace_;
};

} // namespace minpower
