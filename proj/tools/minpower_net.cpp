// minpower-net: scenario generation, topology construction, property
// verification, lifetime simulation, and protocol comparison.
//
// Exit codes: 0 success, 1 property failure, 2 usage error, 3 infeasible
// scenario.

#include "minpower/documents.hpp"
#include "minpower/simulator.hpp"
#include "minpower/topology.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace minpower;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// MINPOWER_SAMPLING="<rays>,<radial_samples>" replaces the built-in sampling
// defaults; documents and flags still take precedence over it.
SamplingSpec sampling_defaults() {
    SamplingSpec spec;
    const char* raw = std::getenv("MINPOWER_SAMPLING");
    if (!raw || !*raw) return spec;
    unsigned rays = 0, radial = 0;
    char tail = 0;
    if (std::sscanf(raw, "%u,%u%c", &rays, &radial, &tail) != 2)
        throw std::invalid_argument(
            "MINPOWER_SAMPLING must look like \"1024,128\" (rays,radial_samples)");
    spec.rays = rays;
    spec.radial_samples = radial;
    spec.validate();
    return spec;
}

ScenarioConfig base_config() {
    ScenarioConfig cfg;
    cfg.sampling = sampling_defaults();
    return cfg;
}

void write_text(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
    ScenarioConfig cfg = base_config();
    double range = 0.0;  // 0 means "use --p-max / default"
    std::string protocol = to_string(cfg.protocol);
    std::string flip_order = to_string(cfg.flip_order);
    std::string sink_rule = to_string(cfg.sink.rule);
    bool emit_nodes = false;
    std::string out = "-";
};

void add_generate(CLI::App& app, GenerateArgs& a) {
    CLI::App* sub = app.add_subcommand("generate", "Write a scenario document");
    sub->add_option("--count", a.cfg.node_count, "sensor count")->capture_default_str();
    sub->add_option("--width", a.cfg.width, "field width, meters")->capture_default_str();
    sub->add_option("--height", a.cfg.height, "field height, meters")->capture_default_str();
    sub->add_option("--seed", a.cfg.seed, "placement / phase seed")->capture_default_str();
    sub->add_option("--t", a.cfg.model.t, "path-loss coefficient")->capture_default_str();
    sub->add_option("--n", a.cfg.model.n, "path-loss exponent")->capture_default_str();
    sub->add_option("--c", a.cfg.model.c, "receiver cost per hop")->capture_default_str();
    auto* pmax = sub->add_option("--p-max", a.cfg.model.p_max, "transmit power cap")
                     ->capture_default_str();
    sub->add_option("--range", a.range, "transmission range, meters; sets p-max = t * range^n")
        ->excludes(pmax);
    sub->add_option("--protocol", a.protocol, "smecn | mecn")->capture_default_str();
    sub->add_option("--flip-order", a.flip_order,
                    "by-id | by-distance | by-distance-reverse")
        ->capture_default_str();
    sub->add_option("--traffic-rate", a.cfg.traffic_rate, "packets per second per sensor")
        ->capture_default_str();
    sub->add_option("--packet-bytes", a.cfg.packet_bytes, "payload size")->capture_default_str();
    sub->add_option("--bandwidth", a.cfg.bandwidth_bps, "raw bandwidth, bits/s")
        ->capture_default_str();
    sub->add_option("--duration", a.cfg.duration, "simulated seconds")->capture_default_str();
    sub->add_option("--initial-energy", a.cfg.initial_energy, "per-sensor budget")
        ->capture_default_str();
    sub->add_option("--beacon-interval", a.cfg.beacon_interval, "seconds")->capture_default_str();
    sub->add_option("--sample-interval", a.cfg.sample_interval, "metrics cadence, seconds")
        ->capture_default_str();
    sub->add_option("--p0-divisor", a.cfg.schedule.p0_divisor, "p0 = p_max / divisor")
        ->capture_default_str();
    sub->add_option("--schedule-factor", a.cfg.schedule.factor, "escalation multiplier")
        ->capture_default_str();
    sub->add_option("--sink", a.sink_rule, "boundary-midpoint | corner | explicit")
        ->capture_default_str();
    sub->add_option("--sink-x", a.cfg.sink.explicit_loc.x, "explicit sink x");
    sub->add_option("--sink-y", a.cfg.sink.explicit_loc.y, "explicit sink y");
    sub->add_option("--rays", a.cfg.sampling.rays, "region sampling rays")->capture_default_str();
    sub->add_option("--radial-samples", a.cfg.sampling.radial_samples, "samples per ray")
        ->capture_default_str();
    sub->add_flag("--emit-nodes", a.emit_nodes, "embed the materialized node list");
    sub->add_option("-o,--out", a.out, "output path, - for stdout")->capture_default_str();
}

int cmd_generate(GenerateArgs& a) {
    a.cfg.protocol = parse_protocol(a.protocol);
    a.cfg.flip_order = parse_flip_order(a.flip_order);
    a.cfg.sink.rule = parse_sink_rule(a.sink_rule);
    if (a.range > 0.0)
        a.cfg.model.p_max = a.cfg.model.t * std::pow(a.range, a.cfg.model.n);
    a.cfg.validate();

    // Guarantees the document describes a connected deployment; the document
    // itself normally stays seed-only so it is small and diffable.
    Placement placement = materialize_nodes(a.cfg);

    ScenarioDocument doc;
    doc.config = a.cfg;
    if (a.emit_nodes) {
        // Persist sensors only: the sink is re-derived from the sink rule.
        placement.nodes.pop_back();
        doc.nodes = std::move(placement.nodes);
    }
    write_text(a.out, serialize_scenario(doc));
    return 0;
}

// ---------------------------------------------------------------------------
// topo

struct TopoArgs {
    std::string scenario;
    std::vector<std::string> methods{"reference", "smecn", "mecn", "e2", "emin"};
    std::string flip_order;
    std::uint32_t rays = 0;
    std::uint32_t radial = 0;
    bool no_sink = false;
    std::string out = "-";
};

void add_topo(CLI::App& app, TopoArgs& a) {
    CLI::App* sub = app.add_subcommand("topo", "Compute topologies for a scenario");
    sub->add_option("scenario", a.scenario, "scenario document path")->required();
    sub->add_option("--methods", a.methods,
                    "subset of reference,smecn,mecn,e2,emin")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--flip-order", a.flip_order, "override the document's order");
    sub->add_option("--rays", a.rays, "override sampling rays");
    sub->add_option("--radial-samples", a.radial, "override samples per ray");
    sub->add_flag("--no-sink", a.no_sink, "compute over sensors only");
    sub->add_option("-o,--out", a.out, "output path, - for stdout")->capture_default_str();
}

struct LoadedScenario {
    ScenarioConfig cfg;
    std::vector<NodeRecord> nodes;  // sink last unless dropped
};

LoadedScenario load_world(const std::string& path, std::uint32_t rays, std::uint32_t radial,
                          const std::string& flip_order, bool drop_sink = false) {
    ScenarioDocument doc = load_scenario(path, base_config());
    if (rays) doc.config.sampling.rays = rays;
    if (radial) doc.config.sampling.radial_samples = radial;
    if (!flip_order.empty()) doc.config.flip_order = parse_flip_order(flip_order);
    doc.config.validate();
    Placement placement = materialize_nodes(doc.config, doc.nodes);
    if (drop_sink) placement.nodes.pop_back();
    return {doc.config, std::move(placement.nodes)};
}

MethodTopology build_method(const std::string& method, const LoadedScenario& world,
                            const NetworkGraph& reference) {
    MethodTopology topo;
    topo.method = method;
    if (method == "reference") {
        topo.edges = reference.edges();
    } else if (method == "e2") {
        topo.edges = compute_E2(reference).edges();
    } else if (method == "emin") {
        topo.edges = compute_Emin(reference).edges();
    } else if (method == "smecn" || method == "mecn") {
        ProtocolResult run = run_protocol(
            world.cfg.model, world.nodes, world.cfg.schedule.make(world.cfg.model),
            world.cfg.sampling, method == "smecn" ? ProtocolKind::Smecn : ProtocolKind::Mecn,
            world.cfg.flip_order);
        topo.edges = run.graph.edges();
        topo.per_node = std::move(run.per_node);
    } else {
        throw std::invalid_argument("unknown method: " + method);
    }
    return topo;
}

int cmd_topo(TopoArgs& a) {
    LoadedScenario world = load_world(a.scenario, a.rays, a.radial, a.flip_order, a.no_sink);
    NetworkGraph reference = build_reference_graph(world.cfg.model, world.nodes);

    TopologyDocument doc;
    doc.model = world.cfg.model;
    doc.nodes = world.nodes;
    for (const std::string& method : a.methods)
        doc.methods.push_back(build_method(method, world, reference));
    write_text(a.out, serialize_topology(doc));

    // Human-readable echo; the document carries the same summary block.
    for (const MethodTopology& m : doc.methods) {
        double degree = world.nodes.empty()
                            ? 0.0
                            : double(m.edges.size()) / double(world.nodes.size());
        std::ostringstream line;
        line << m.method << ": edges=" << m.edges.size() << " mean_out_degree=" << fmt4(degree);
        if (!m.per_node.empty()) {
            double power = 0.0;
            for (const NodeOutcome& o : m.per_node) power += o.power;
            line << " mean_power=" << fmt4(power / double(m.per_node.size()));
        }
        std::cerr << line.str() << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
    std::string scenario;
    std::string method = "smecn";
    std::string flip_order;
    std::uint32_t rays = 0;
    std::uint32_t radial = 0;
    std::vector<std::string> drop_edges;
};

void add_verify(CLI::App& app, VerifyArgs& a) {
    CLI::App* sub = app.add_subcommand(
        "verify", "Check minimum-energy and containment properties");
    sub->add_option("scenario", a.scenario, "scenario document path")->required();
    sub->add_option("--method", a.method, "reference | smecn | mecn | e2 | emin")
        ->capture_default_str();
    sub->add_option("--flip-order", a.flip_order, "override the document's order");
    sub->add_option("--rays", a.rays, "override sampling rays");
    sub->add_option("--radial-samples", a.radial, "override samples per ray");
    sub->add_option("--drop-edge", a.drop_edges,
                    "fault injection: remove directed edge \"from,to\" before checking")
        ->delimiter(';');
}

std::pair<NodeId, NodeId> parse_edge(const std::string& text) {
    unsigned from = 0, to = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%u,%u%c", &from, &to, &tail) != 2)
        throw std::invalid_argument("--drop-edge wants \"from,to\", got: " + text);
    return {from, to};
}

bool subgraph_of(const NetworkGraph& inner, const NetworkGraph& outer) {
    for (const GraphEdge& e : inner.edges())
        if (!outer.has_edge(e.from, e.to)) return false;
    return true;
}

int cmd_verify(VerifyArgs& a) {
    LoadedScenario world = load_world(a.scenario, a.rays, a.radial, a.flip_order);
    const ScenarioConfig& cfg = world.cfg;
    NetworkGraph reference = build_reference_graph(cfg.model, world.nodes);
    EscalationSchedule schedule = cfg.schedule.make(cfg.model);

    ProtocolResult smecn = run_protocol(cfg.model, world.nodes, schedule, cfg.sampling,
                                        ProtocolKind::Smecn, cfg.flip_order);
    ProtocolResult mecn = run_protocol(cfg.model, world.nodes, schedule, cfg.sampling,
                                       ProtocolKind::Mecn, cfg.flip_order);
    NetworkGraph emin = compute_Emin(reference);

    NetworkGraph subject = [&]() -> NetworkGraph {
        if (a.method == "reference") return reference;
        if (a.method == "smecn") return smecn.graph;
        if (a.method == "mecn") return mecn.graph;
        if (a.method == "e2") return compute_E2(reference);
        if (a.method == "emin") return emin;
        throw std::invalid_argument("unknown method: " + a.method);
    }();

    for (const std::string& spec : a.drop_edges) {
        auto [from, to] = parse_edge(spec);
        if (!subject.remove_edge(from, to))
            throw std::invalid_argument("--drop-edge: no edge " + spec + " in " + a.method);
    }

    struct Check {
        std::string name;
        bool ok;
    };
    std::vector<Check> checks;
    checks.push_back({"minimum-energy property (" + a.method + " vs reference)",
                      has_min_energy_property(reference, subject)});
    checks.push_back({"emin subset of " + a.method, subgraph_of(emin, subject)});
    checks.push_back({a.method + " subset of reference", subgraph_of(subject, reference)});
    checks.push_back({"smecn subset of mecn", subgraph_of(smecn.graph, mecn.graph)});

    bool all_ok = true;
    for (const Check& c : checks) {
        std::cout << (c.ok ? "PASS" : "FAIL") << "  " << c.name << '\n';
        all_ok = all_ok && c.ok;
    }
    return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    std::string scenario;
    std::string protocol;
    std::string flip_order;
    double duration = -1.0;
    std::int64_t seed = -1;
    std::uint32_t rays = 0;
    std::uint32_t radial = 0;
    std::string out = "-";
    std::string trace;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
    CLI::App* sub = app.add_subcommand("simulate", "Run the lifetime simulation");
    sub->add_option("scenario", a.scenario, "scenario document path")->required();
    sub->add_option("--protocol", a.protocol, "override: smecn | mecn");
    sub->add_option("--flip-order", a.flip_order, "override the document's order");
    sub->add_option("--duration", a.duration, "override simulated seconds")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", a.seed, "override the scenario seed");
    sub->add_option("--rays", a.rays, "override sampling rays");
    sub->add_option("--radial-samples", a.radial, "override samples per ray");
    sub->add_option("-o,--out", a.out, "metrics CSV path, - for stdout")->capture_default_str();
    sub->add_option("--trace", a.trace, "also write an event-trace CSV here");
}

const char* trace_name(TraceKind kind) {
    switch (kind) {
        case TraceKind::Death: return "death";
        case TraceKind::Reconfiguration: return "reconfiguration";
        case TraceKind::Undeliverable: return "undeliverable";
        case TraceKind::PropertyViolation: return "property-violation";
    }
    return "?";
}

std::string trace_csv(const std::vector<TraceEvent>& events) {
    std::ostringstream out;
    out << "time,kind,nodes\n";
    for (const TraceEvent& ev : events) {
        out << fmt(ev.time) << ',' << trace_name(ev.kind) << ',';
        for (std::size_t i = 0; i < ev.nodes.size(); ++i)
            out << (i ? ";" : "") << ev.nodes[i];
        out << '\n';
    }
    return out.str();
}

int cmd_simulate(SimulateArgs& a) {
    ScenarioDocument doc = load_scenario(a.scenario, base_config());
    ScenarioConfig& cfg = doc.config;
    if (!a.protocol.empty()) cfg.protocol = parse_protocol(a.protocol);
    if (!a.flip_order.empty()) cfg.flip_order = parse_flip_order(a.flip_order);
    if (a.duration >= 0.0) cfg.duration = a.duration;
    if (a.seed >= 0) cfg.seed = std::uint64_t(a.seed);
    if (a.rays) cfg.sampling.rays = a.rays;
    if (a.radial) cfg.sampling.radial_samples = a.radial;

    SimOptions options;
    options.collect_trace = !a.trace.empty();
    Simulation sim(cfg, options, doc.nodes);
    const MetricsSeries& series = sim.run();
    write_text(a.out, series.to_csv());
    if (!a.trace.empty()) write_text(a.trace, trace_csv(sim.trace()));

    const MetricsRow& last = series.rows.back();
    std::cerr << "final: alive=" << last.alive << " sink_connected=" << last.sink_connected
              << " delivered=" << last.packets_delivered
              << " undeliverable=" << sim.undeliverable_packets()
              << " energy_mean=" << fmt4(last.energy_consumed_mean)
              << " conservation_error=" << fmt4(sim.conservation_error())
              << " property_violations=" << sim.property_violations() << '\n';
    return sim.property_violations() == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
    std::string scenario;
    std::string seeds = "";
    double duration = -1.0;
    std::uint32_t rays = 0;
    std::uint32_t radial = 0;
    std::string out;
    std::string gnuplot;
    std::string series_dir;
};

void add_compare(CLI::App& app, CompareArgs& a) {
    CLI::App* sub =
        app.add_subcommand("compare", "Run both protocols across seeds and compare");
    sub->add_option("scenario", a.scenario, "scenario document path")->required();
    sub->add_option("--seeds", a.seeds, "comma list and/or ranges, e.g. \"1,2,5..8\"");
    sub->add_option("--duration", a.duration, "override simulated seconds")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--rays", a.rays, "override sampling rays");
    sub->add_option("--radial-samples", a.radial, "override samples per ray");
    sub->add_option("-o,--out", a.out, "per-seed comparison CSV path");
    sub->add_option("--gnuplot", a.gnuplot, "write an alive-over-time gnuplot script here");
    sub->add_option("--series-dir", a.series_dir, "write each run's metrics CSV here");
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        unsigned long long lo = 0, hi = 0;
        char tail = 0;
        if (std::sscanf(item.c_str(), "%llu..%llu%c", &lo, &hi, &tail) == 2) {
            if (hi < lo) throw std::invalid_argument("--seeds: bad range " + item);
            for (unsigned long long s = lo; s <= hi; ++s) seeds.push_back(s);
        } else if (std::sscanf(item.c_str(), "%llu%c", &lo, &tail) == 1) {
            seeds.push_back(lo);
        } else {
            throw std::invalid_argument("--seeds: cannot parse " + item);
        }
    }
    if (seeds.empty()) throw std::invalid_argument("--seeds: no seeds given");
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    return seeds;
}

struct RunStats {
    std::uint64_t seed = 0;
    ProtocolKind protocol{};
    double mean_degree = 0.0;  // at t = 0
    double mean_power = 0.0;   // at t = 0
    std::uint32_t final_alive = 0;
    std::uint32_t final_connected = 0;
    std::uint64_t delivered = 0;
    double energy_mean = 0.0;
    std::uint64_t violations = 0;
    MetricsSeries series;
};

RunStats run_one(ScenarioConfig cfg, const std::optional<std::vector<NodeRecord>>& nodes,
                 std::uint64_t seed, ProtocolKind protocol, bool keep_series) {
    cfg.seed = seed;
    cfg.protocol = protocol;
    Simulation sim(cfg, {}, nodes);
    const MetricsSeries& series = sim.run();
    const MetricsRow& first = series.rows.front();
    const MetricsRow& last = series.rows.back();
    RunStats st;
    st.seed = seed;
    st.protocol = protocol;
    st.mean_degree = first.mean_degree;
    st.mean_power = first.mean_power;
    st.final_alive = last.alive;
    st.final_connected = last.sink_connected;
    st.delivered = last.packets_delivered;
    st.energy_mean = last.energy_consumed_mean;
    st.violations = sim.property_violations();
    if (keep_series) st.series = series;
    return st;
}

struct Aggregate {
    double sum = 0.0, sum_sq = 0.0;
    std::size_t n = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    double mean() const { return n ? sum / double(n) : 0.0; }
    double stddev() const {  // sample standard deviation
        if (n < 2) return 0.0;
        double m = mean();
        return std::sqrt(std::max(0.0, (sum_sq - double(n) * m * m) / double(n - 1)));
    }
};

int cmd_compare(CompareArgs& a) {
    ScenarioDocument doc = load_scenario(a.scenario, base_config());
    ScenarioConfig& cfg = doc.config;
    if (a.duration >= 0.0) cfg.duration = a.duration;
    if (a.rays) cfg.sampling.rays = a.rays;
    if (a.radial) cfg.sampling.radial_samples = a.radial;
    cfg.validate();

    std::vector<std::uint64_t> seeds =
        a.seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : parse_seeds(a.seeds);

    if (!a.series_dir.empty()) std::filesystem::create_directories(a.series_dir);
    if (!a.gnuplot.empty() && a.series_dir.empty()) {
        std::filesystem::path parent = std::filesystem::path(a.gnuplot).parent_path();
        a.series_dir = parent.empty() ? "." : parent.string();
        std::filesystem::create_directories(a.series_dir);
    }
    const bool keep_series = !a.series_dir.empty();

    // Fan out (protocol x seed); merge deterministically by (seed, protocol).
    struct Job {
        std::uint64_t seed;
        ProtocolKind protocol;
    };
    std::vector<Job> jobs;
    for (std::uint64_t seed : seeds)
        for (ProtocolKind p : {ProtocolKind::Smecn, ProtocolKind::Mecn})
            jobs.push_back({seed, p});

    const std::size_t lanes = std::max(1u, std::thread::hardware_concurrency());
    std::map<std::pair<std::uint64_t, int>, RunStats> merged;
    for (std::size_t base = 0; base < jobs.size(); base += lanes) {
        std::vector<std::future<RunStats>> batch;
        for (std::size_t i = base; i < std::min(jobs.size(), base + lanes); ++i)
            batch.push_back(std::async(std::launch::async, [&, i] {
                return run_one(cfg, doc.nodes, jobs[i].seed, jobs[i].protocol, keep_series);
            }));
        for (auto& fut : batch) {
            RunStats st = fut.get();
            merged[{st.seed, int(st.protocol)}] = std::move(st);
        }
    }

    std::ostringstream csv;
    csv << "seed,degree_smecn,degree_mecn,degree_ratio,power_smecn,power_mecn,power_ratio,"
           "energy_smecn,energy_mecn,energy_ratio,alive_smecn,alive_mecn,"
           "connected_smecn,connected_mecn,delivered_smecn,delivered_mecn\n";

    Aggregate degree_ratio, power_ratio, energy_ratio, alive_s, alive_m;
    std::uint64_t violations = 0;
    std::printf("%6s %9s %9s %7s %7s %7s %8s %8s %9s %9s\n", "seed", "deg_s", "deg_m", "deg_r",
                "pow_r", "enrg_r", "alive_s", "alive_m", "deliv_s", "deliv_m");
    for (std::uint64_t seed : seeds) {
        const RunStats& s = merged.at({seed, int(ProtocolKind::Smecn)});
        const RunStats& m = merged.at({seed, int(ProtocolKind::Mecn)});
        double deg_r = m.mean_degree / s.mean_degree;
        double pow_r = m.mean_power / s.mean_power;
        double enrg_r = m.energy_mean / s.energy_mean;
        degree_ratio.add(deg_r);
        power_ratio.add(pow_r);
        energy_ratio.add(enrg_r);
        alive_s.add(double(s.final_alive) / double(cfg.node_count));
        alive_m.add(double(m.final_alive) / double(cfg.node_count));
        violations += s.violations + m.violations;

        std::printf("%6llu %9.4g %9.4g %7.4g %7.4g %7.4g %8u %8u %9llu %9llu\n",
                    (unsigned long long)seed, s.mean_degree, m.mean_degree, deg_r, pow_r,
                    enrg_r, s.final_alive, m.final_alive, (unsigned long long)s.delivered,
                    (unsigned long long)m.delivered);

        csv << seed << ',' << fmt(s.mean_degree) << ',' << fmt(m.mean_degree) << ','
            << fmt(deg_r) << ',' << fmt(s.mean_power) << ',' << fmt(m.mean_power) << ','
            << fmt(pow_r) << ',' << fmt(s.energy_mean) << ',' << fmt(m.energy_mean) << ','
            << fmt(enrg_r) << ',' << s.final_alive << ',' << m.final_alive << ','
            << s.final_connected << ',' << m.final_connected << ',' << s.delivered << ','
            << m.delivered << '\n';
    }

    std::printf("\naggregate over %zu seed(s):\n", seeds.size());
    std::printf("  degree ratio mecn/smecn: mean %.4g  stddev %.4g\n", degree_ratio.mean(),
                degree_ratio.stddev());
    std::printf("  power  ratio mecn/smecn: mean %.4g  stddev %.4g\n", power_ratio.mean(),
                power_ratio.stddev());
    std::printf("  energy ratio mecn/smecn: mean %.4g  stddev %.4g\n", energy_ratio.mean(),
                energy_ratio.stddev());
    std::printf("  final alive fraction: smecn %.4g  mecn %.4g\n", alive_s.mean(),
                alive_m.mean());
    if (violations)
        std::printf("  WARNING: %llu post-reconfiguration property violations\n",
                    (unsigned long long)violations);

    if (!a.out.empty()) write_text(a.out, csv.str());

    if (keep_series) {
        for (const auto& [key, st] : merged) {
            std::ostringstream name;
            name << "sim_seed" << key.first << '_'
                 << to_string(ProtocolKind(key.second)) << ".csv";
            write_text((std::filesystem::path(a.series_dir) / name.str()).string(),
                       st.series.to_csv());
        }
    }
    if (!a.gnuplot.empty()) {
        std::ostringstream gp;
        gp << "set datafile separator ','\n"
           << "set xlabel 'time (s)'\n"
           << "set ylabel 'alive sensors'\n"
           << "set key outside\n"
           << "plot \\\n";
        bool first = true;
        for (const auto& [key, st] : merged) {
            (void)st;
            std::ostringstream name;
            name << "sim_seed" << key.first << '_'
                 << to_string(ProtocolKind(key.second)) << ".csv";
            if (!first) gp << ", \\\n";
            first = false;
            gp << "  '" << name.str() << "' using 1:2 with lines title 'seed " << key.first
               << ' ' << to_string(ProtocolKind(key.second)) << '\'';
        }
        gp << '\n';
        write_text(a.gnuplot, gp.str());
    }
    return violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    // the args structs below bake the env-supplied sampling defaults into
    // their initializers, so vet the variable before constructing them
    try {
        (void)sampling_defaults();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    CLI::App app{"minimum-energy wireless topology toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen_args;
    TopoArgs topo_args;
    VerifyArgs verify_args;
    SimulateArgs sim_args;
    CompareArgs cmp_args;
    add_generate(app, gen_args);
    add_topo(app, topo_args);
    add_verify(app, verify_args);
    add_simulate(app, sim_args);
    add_compare(app, cmp_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("generate")) return cmd_generate(gen_args);
        if (app.got_subcommand("topo")) return cmd_topo(topo_args);
        if (app.got_subcommand("verify")) return cmd_verify(verify_args);
        if (app.got_subcommand("simulate")) return cmd_simulate(sim_args);
        if (app.got_subcommand("compare")) return cmd_compare(cmp_args);
    } catch (const minpower::ScenarioInfeasible& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
