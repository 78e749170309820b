#include "minpower/simulator.hpp"

#include "minpower/rng.hpp"
#include "minpower/topology.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace minpower {

namespace {

constexpr std::uint32_t kNoHop = std::numeric_limits<std::uint32_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Salts for per-node event phases; placement attempts use salts 0..63.
std::uint64_t beacon_salt(NodeId id) { return 0x10000ULL + 2ULL * id; }
std::uint64_t packet_salt(NodeId id) { return 0x10001ULL + 2ULL * id; }

void append_csv_double(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out += buf;
}

} // namespace

std::string MetricsSeries::to_csv() const {
    std::string out =
        "time,alive,sink_connected,mean_degree,mean_power,packets_delivered,"
        "energy_consumed_mean,mean_hops\n";
    for (const MetricsRow& r : rows) {
        char buf[64];
        append_csv_double(out, r.time);
        std::snprintf(buf, sizeof buf, ",%" PRIu32 ",%" PRIu32 ",", r.alive, r.sink_connected);
        out += buf;
        append_csv_double(out, r.mean_degree);
        out += ',';
        append_csv_double(out, r.mean_power);
        std::snprintf(buf, sizeof buf, ",%" PRIu64 ",", r.packets_delivered);
        out += buf;
        append_csv_double(out, r.energy_consumed_mean);
        out += ',';
        append_csv_double(out, r.mean_hops);
        out += '\n';
    }
    return out;
}

Simulation::Simulation(const ScenarioConfig& cfg, SimOptions options,
                       const std::optional<std::vector<NodeRecord>>& explicit_nodes)
    : cfg_(cfg), options_(options) {
    cfg_.validate();
    Placement placement = materialize_nodes(cfg_, explicit_nodes);
    world_ = std::move(placement.nodes);
    sink_id_ = placement.sink_id;
    resamples_ = placement.resamples;
    sink_idx_ = static_cast<std::uint32_t>(world_.size() - 1);
    schedule_fn_ = cfg_.schedule.make(cfg_.model);

    graph_ = NetworkGraph(cfg_.model, world_);
    const std::size_t n = world_.size();
    power_.assign(n, 0.0);
    discovered_.assign(n, {});
    alive_.assign(n, 1);
    energy_.assign(n, cfg_.initial_energy);
    energy_[sink_idx_] = kInf;  // the sink is a pure collector

    for (std::size_t i = 0; i < n; ++i) {
        NodeSearchResult r =
            cfg_.protocol == ProtocolKind::Smecn
                ? smecn_node(cfg_.model, world_[i], world_, schedule_fn_, cfg_.sampling)
                : mecn_node(cfg_.model, world_[i], world_, schedule_fn_, cfg_.sampling,
                            cfg_.flip_order);
        for (NodeId v : r.neighbors) graph_.add_edge(world_[i].id, v);
        power_[i] = r.power;
        discovered_[i] = std::move(r.discovered);
    }

    schedule(0.0, EventKind::Sample, 0);  // node field carries the sample index
    const double period = 1.0 / cfg_.traffic_rate;
    for (std::uint32_t i = 0; i < sink_idx_; ++i) {
        SplitMix64 bg(mix_seed(cfg_.seed, beacon_salt(world_[i].id)));
        schedule(bg.next_unit() * cfg_.beacon_interval, EventKind::Beacon, i);
        SplitMix64 pg(mix_seed(cfg_.seed, packet_salt(world_[i].id)));
        schedule(pg.next_unit() * period, EventKind::Packet, i);
    }
}

void Simulation::schedule(double time, EventKind kind, std::uint32_t node) {
    queue_.push(Event{time, next_seq_++, kind, node});
}

const MetricsSeries& Simulation::run() {
    if (ran_) return series_;
    ran_ = true;
    while (!queue_.empty()) {
        Event ev = queue_.top();
        if (ev.time > cfg_.duration) break;
        queue_.pop();
        switch (ev.kind) {
        case EventKind::Sample: record_sample(ev.time); break;
        case EventKind::Beacon: process_beacon(ev.node, ev.time); break;
        case EventKind::Packet: process_packet(ev.node, ev.time); break;
        }
    }
    return series_;
}

bool Simulation::alive(NodeId id) const { return alive_[graph_.index_of(id)] != 0; }

std::size_t Simulation::alive_sensors() const {
    std::size_t count = 0;
    for (std::uint32_t i = 0; i < sink_idx_; ++i) count += alive_[i];
    return count;
}

double Simulation::remaining_energy(NodeId id) const { return energy_[graph_.index_of(id)]; }

double Simulation::power_setting(NodeId id) const { return power_[graph_.index_of(id)]; }

std::optional<std::vector<NodeId>> Simulation::route_to_sink(NodeId src) const {
    std::uint32_t idx = static_cast<std::uint32_t>(graph_.index_of(src));
    if (!alive_[idx]) return std::nullopt;
    if (is_sink(idx)) return std::vector<NodeId>{sink_id_};
    refresh_route_cache();
    if (next_hop_[idx] == kNoHop) return std::nullopt;
    std::vector<NodeId> path{src};
    std::uint32_t cur = idx;
    while (!is_sink(cur)) {
        cur = next_hop_[cur];
        if (cur == kNoHop || path.size() > world_.size()) return std::nullopt;
        path.push_back(graph_.node(cur).id);
    }
    return path;
}

double Simulation::conservation_error() const {
    double consumed = 0.0;
    for (std::uint32_t i = 0; i < sink_idx_; ++i) consumed += cfg_.initial_energy - energy_[i];
    return std::fabs(consumed - total_debited_) / std::max(1.0, total_debited_);
}

void Simulation::record_sample(double time) {
    MetricsRow row;
    row.time = time;
    double degree_sum = 0.0;
    double power_sum = 0.0;
    double consumed = 0.0;
    for (std::uint32_t i = 0; i < sink_idx_; ++i) {
        consumed += cfg_.initial_energy - energy_[i];
        if (!alive_[i]) continue;
        ++row.alive;
        degree_sum += static_cast<double>(graph_.out(i).size());
        power_sum += power_[i];
    }
    row.sink_connected = count_sink_connected();
    row.mean_degree = row.alive ? degree_sum / row.alive : 0.0;
    row.mean_power = row.alive ? power_sum / row.alive : 0.0;
    row.packets_delivered = packets_delivered_;
    row.energy_consumed_mean = consumed / static_cast<double>(sink_idx_);
    row.mean_hops =
        packets_delivered_ ? static_cast<double>(total_hops_) / static_cast<double>(packets_delivered_)
                           : 0.0;
    series_.rows.push_back(row);

    // Sample times are computed as index * interval, not accumulated, so
    // multiples of the cadence stay exact.
    auto k = static_cast<std::uint32_t>(series_.rows.size() - 1);
    double next_time = static_cast<double>(k + 1) * cfg_.sample_interval;
    if (next_time <= cfg_.duration) schedule(next_time, EventKind::Sample, k + 1);
}

std::uint32_t Simulation::count_sink_connected() const {
    std::vector<char> seen(world_.size(), 0);
    std::vector<std::uint32_t> stack{sink_idx_};
    seen[sink_idx_] = 1;
    std::uint32_t count = 0;
    while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        for (const auto& arc : graph_.in(v)) {
            if (!seen[arc.target]) {
                seen[arc.target] = 1;
                if (!is_sink(arc.target) && alive_[arc.target]) ++count;
                stack.push_back(arc.target);
            }
        }
    }
    return count;
}

bool Simulation::debit(std::uint32_t idx, double amount) {
    double& e = energy_[idx];
    double paid = std::min(e, amount);
    e -= paid;
    total_debited_ += paid;
    return paid == amount;
}

void Simulation::process_beacon(std::uint32_t idx, double time) {
    if (!alive_[idx]) return;
    bool full = debit(idx, power_[idx] * cfg_.beacon_airtime());
    if (energy_[idx] <= 0.0) {
        handle_death(idx, time);
        return;  // the dead do not beacon
    }
    (void)full;  // a live node always paid in full
    schedule(time + cfg_.beacon_interval, EventKind::Beacon, idx);
}

void Simulation::process_packet(std::uint32_t idx, double time) {
    if (!alive_[idx]) return;
    refresh_route_cache();

    // Materialize the path up front: reconfigurations triggered by deaths
    // below must not redirect a packet already in flight.
    std::vector<std::uint32_t> path{idx};
    bool routable = true;
    for (std::uint32_t cur = idx; !is_sink(cur);) {
        cur = next_hop_[cur];
        if (cur == kNoHop || path.size() > world_.size()) {
            routable = false;
            break;
        }
        path.push_back(cur);
    }

    if (!routable) {
        ++undeliverable_;
        add_trace(time, TraceKind::Undeliverable, {world_[idx].id});
        schedule(time + 1.0 / cfg_.traffic_rate, EventKind::Packet, idx);
        return;
    }

    const double t_pkt = cfg_.packet_airtime();
    bool dropped = false;
    for (std::size_t h = 0; h + 1 < path.size() && !dropped; ++h) {
        std::uint32_t a = path[h];
        std::uint32_t b = path[h + 1];
        bool full = debit(a, transmit_power(cfg_.model, world_[a].loc, world_[b].loc) * t_pkt);
        if (energy_[a] <= 0.0) handle_death(a, time);
        if (!full) {
            dropped = true;
            break;
        }
        if (!is_sink(b) && cfg_.model.c > 0.0) {
            bool rx_full = debit(b, cfg_.model.c * t_pkt);
            if (energy_[b] <= 0.0) handle_death(b, time);
            if (!rx_full) dropped = true;
        }
    }
    if (dropped) {
        ++undeliverable_;
        add_trace(time, TraceKind::Undeliverable, {world_[idx].id});
    } else {
        ++packets_delivered_;
        total_hops_ += path.size() - 1;
    }
    if (alive_[idx]) schedule(time + 1.0 / cfg_.traffic_rate, EventKind::Packet, idx);
}

void Simulation::handle_death(std::uint32_t idx, double time) {
    alive_[idx] = 0;
    ++deaths_;
    add_trace(time, TraceKind::Death, {world_[idx].id});

    const NodeId dead_id = world_[idx].id;
    std::vector<std::uint32_t> targets;
    for (const auto& arc : graph_.out(idx)) targets.push_back(arc.target);
    for (std::uint32_t t : targets) graph_.remove_edge(dead_id, world_[t].id);
    std::vector<std::uint32_t> sources;
    for (const auto& arc : graph_.in(idx)) sources.push_back(arc.target);
    for (std::uint32_t s : sources) graph_.remove_edge(world_[s].id, dead_id);

    std::vector<NodeRecord> alive_world;
    alive_world.reserve(world_.size());
    for (std::size_t i = 0; i < world_.size(); ++i) {
        if (alive_[i]) alive_world.push_back(world_[i]);
    }

    // Re-run the search at every living node that had discovered the dead
    // one; anyone else would have produced the identical result anyway.
    std::vector<NodeId> refreshed;
    for (std::uint32_t w = 0; w < world_.size(); ++w) {
        if (!alive_[w]) continue;
        if (!std::binary_search(discovered_[w].begin(), discovered_[w].end(), dead_id)) continue;
        std::vector<std::uint32_t> old_out;
        for (const auto& arc : graph_.out(w)) old_out.push_back(arc.target);
        for (std::uint32_t t : old_out) graph_.remove_edge(world_[w].id, world_[t].id);

        NodeSearchResult r =
            cfg_.protocol == ProtocolKind::Smecn
                ? smecn_node(cfg_.model, world_[w], alive_world, schedule_fn_, cfg_.sampling)
                : mecn_node(cfg_.model, world_[w], alive_world, schedule_fn_, cfg_.sampling,
                            cfg_.flip_order);
        for (NodeId v : r.neighbors) graph_.add_edge(world_[w].id, v);
        power_[w] = r.power;
        discovered_[w] = std::move(r.discovered);
        refreshed.push_back(world_[w].id);
    }
    ++topology_version_;
    if (!refreshed.empty()) add_trace(time, TraceKind::Reconfiguration, std::move(refreshed));
    verify_after_death(time);
}

void Simulation::verify_after_death(double time) {
    if (!options_.verify_reconfiguration) return;
    const std::size_t living = alive_sensors() + 1;
    if (living > 25 && deaths_ % 8 != 0) return;

    std::vector<NodeRecord> alive_world;
    for (std::size_t i = 0; i < world_.size(); ++i) {
        if (alive_[i]) alive_world.push_back(world_[i]);
    }
    NetworkGraph reference = build_reference_graph(cfg_.model, alive_world);
    NetworkGraph sub(cfg_.model, alive_world);
    for (const GraphEdge& e : graph_.edges()) {
        if (alive_[graph_.index_of(e.from)] && alive_[graph_.index_of(e.to)])
            sub.add_edge(e.from, e.to);
    }
    if (!has_min_energy_property(reference, sub)) {
        ++property_violations_;
        add_trace(time, TraceKind::PropertyViolation, {});
    }
}

void Simulation::refresh_route_cache() const {
    if (route_version_ == topology_version_) return;
    const std::size_t n = world_.size();
    std::vector<double> dist(n, kInf);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[sink_idx_] = 0.0;
    pq.emplace(0.0, sink_idx_);
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        for (const auto& arc : graph_.in(v)) {
            double nd = d + arc.cost;
            if (nd < dist[arc.target]) {
                dist[arc.target] = nd;
                pq.emplace(nd, arc.target);
            }
        }
    }
    next_hop_.assign(n, kNoHop);
    for (std::uint32_t v = 0; v < n; ++v) {
        if (is_sink(v) || dist[v] == kInf) continue;
        std::uint32_t best = kNoHop;
        double best_value = kInf;
        for (const auto& arc : graph_.out(v)) {
            double value = arc.cost + dist[arc.target];
            if (value < best_value || (value == best_value && arc.target < best)) {
                best = arc.target;
                best_value = value;
            }
        }
        next_hop_[v] = best;
    }
    route_version_ = topology_version_;
}

void Simulation::add_trace(double time, TraceKind kind, std::vector<NodeId> nodes) {
    if (!options_.collect_trace) return;
    trace_.push_back(TraceEvent{time, kind, std::move(nodes)});
}

} // namespace minpower
