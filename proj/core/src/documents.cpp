#include "minpower/documents.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace minpower {

namespace {

using ordered_json = nlohmann::ordered_json;

template <typename T>
void read_if_present(const ordered_json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

ordered_json model_to_json(const PowerModel& m) {
    return ordered_json{{"t", m.t}, {"n", m.n}, {"c", m.c}, {"p_max", m.p_max}};
}

PowerModel model_from_json(const ordered_json& j) {
    PowerModel m;
    read_if_present(j, "t", m.t);
    read_if_present(j, "n", m.n);
    read_if_present(j, "c", m.c);
    read_if_present(j, "p_max", m.p_max);
    return m;
}

ordered_json nodes_to_json(const std::vector<NodeRecord>& nodes) {
    ordered_json arr = ordered_json::array();
    for (const NodeRecord& n : nodes) {
        arr.push_back(ordered_json{{"id", n.id}, {"x", n.loc.x}, {"y", n.loc.y}});
    }
    return arr;
}

std::vector<NodeRecord> nodes_from_json(const ordered_json& arr) {
    std::vector<NodeRecord> nodes;
    for (const auto& j : arr) {
        NodeRecord n;
        n.id = j.at("id").get<NodeId>();
        n.loc.x = j.at("x").get<double>();
        n.loc.y = j.at("y").get<double>();
        nodes.push_back(n);
    }
    return nodes;
}

} // namespace

std::string to_string(ProtocolKind kind) {
    return kind == ProtocolKind::Smecn ? "smecn" : "mecn";
}

std::string to_string(FlipOrder order) {
    switch (order) {
    case FlipOrder::ById: return "by-id";
    case FlipOrder::ByDistance: return "by-distance";
    case FlipOrder::ByDistanceReverse: return "by-distance-reverse";
    }
    throw std::logic_error("to_string: bad flip order");
}

std::string to_string(SinkRule rule) {
    switch (rule) {
    case SinkRule::BoundaryMidpoint: return "boundary-midpoint";
    case SinkRule::Corner: return "corner";
    case SinkRule::Explicit: return "explicit";
    }
    throw std::logic_error("to_string: bad sink rule");
}

ProtocolKind parse_protocol(const std::string& name) {
    if (name == "smecn") return ProtocolKind::Smecn;
    if (name == "mecn") return ProtocolKind::Mecn;
    throw std::invalid_argument("unknown protocol: " + name);
}

FlipOrder parse_flip_order(const std::string& name) {
    if (name == "by-id") return FlipOrder::ById;
    if (name == "by-distance") return FlipOrder::ByDistance;
    if (name == "by-distance-reverse") return FlipOrder::ByDistanceReverse;
    throw std::invalid_argument("unknown flip order: " + name);
}

SinkRule parse_sink_rule(const std::string& name) {
    if (name == "boundary-midpoint") return SinkRule::BoundaryMidpoint;
    if (name == "corner") return SinkRule::Corner;
    if (name == "explicit") return SinkRule::Explicit;
    throw std::invalid_argument("unknown sink rule: " + name);
}

std::string serialize_scenario(const ScenarioDocument& doc) {
    const ScenarioConfig& c = doc.config;
    ordered_json j;
    j["version"] = kDocumentVersion;
    ordered_json s;
    s["count"] = c.node_count;
    s["width"] = c.width;
    s["height"] = c.height;
    s["seed"] = c.seed;
    s["model"] = model_to_json(c.model);
    s["schedule"] = ordered_json{{"p0_divisor", c.schedule.p0_divisor}, {"factor", c.schedule.factor}};
    s["protocol"] = to_string(c.protocol);
    s["flip_order"] = to_string(c.flip_order);
    s["traffic_rate"] = c.traffic_rate;
    s["packet_bytes"] = c.packet_bytes;
    s["bandwidth_bps"] = c.bandwidth_bps;
    s["duration"] = c.duration;
    s["initial_energy"] = c.initial_energy;
    s["beacon_interval"] = c.beacon_interval;
    s["sample_interval"] = c.sample_interval;
    ordered_json sink{{"rule", to_string(c.sink.rule)}};
    if (c.sink.rule == SinkRule::Explicit) {
        sink["x"] = c.sink.explicit_loc.x;
        sink["y"] = c.sink.explicit_loc.y;
    }
    s["sink"] = sink;
    s["sampling"] = ordered_json{{"rays", c.sampling.rays}, {"radial_samples", c.sampling.radial_samples}};
    j["scenario"] = s;
    if (doc.nodes) j["nodes"] = nodes_to_json(*doc.nodes);
    return j.dump(2) + "\n";
}

ScenarioDocument parse_scenario(const std::string& text) {
    return parse_scenario(text, ScenarioConfig{});
}

ScenarioDocument parse_scenario(const std::string& text, const ScenarioConfig& base) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("scenario document: ") + e.what());
    }
    try {
        if (j.at("version").get<int>() != kDocumentVersion)
            throw std::invalid_argument("scenario document: unsupported version");
        ScenarioDocument doc;
        doc.config = base;
        ScenarioConfig& c = doc.config;
        const ordered_json& s = j.at("scenario");
        read_if_present(s, "count", c.node_count);
        read_if_present(s, "width", c.width);
        read_if_present(s, "height", c.height);
        read_if_present(s, "seed", c.seed);
        if (s.contains("model")) c.model = model_from_json(s.at("model"));
        if (s.contains("schedule")) {
            read_if_present(s.at("schedule"), "p0_divisor", c.schedule.p0_divisor);
            read_if_present(s.at("schedule"), "factor", c.schedule.factor);
        }
        if (s.contains("protocol")) c.protocol = parse_protocol(s.at("protocol").get<std::string>());
        if (s.contains("flip_order"))
            c.flip_order = parse_flip_order(s.at("flip_order").get<std::string>());
        read_if_present(s, "traffic_rate", c.traffic_rate);
        read_if_present(s, "packet_bytes", c.packet_bytes);
        read_if_present(s, "bandwidth_bps", c.bandwidth_bps);
        read_if_present(s, "duration", c.duration);
        read_if_present(s, "initial_energy", c.initial_energy);
        read_if_present(s, "beacon_interval", c.beacon_interval);
        read_if_present(s, "sample_interval", c.sample_interval);
        if (s.contains("sink")) {
            const ordered_json& k = s.at("sink");
            c.sink.rule = parse_sink_rule(k.at("rule").get<std::string>());
            if (c.sink.rule == SinkRule::Explicit) {
                c.sink.explicit_loc.x = k.at("x").get<double>();
                c.sink.explicit_loc.y = k.at("y").get<double>();
            }
        }
        if (s.contains("sampling")) {
            read_if_present(s.at("sampling"), "rays", c.sampling.rays);
            read_if_present(s.at("sampling"), "radial_samples", c.sampling.radial_samples);
        }
        if (j.contains("nodes")) doc.nodes = nodes_from_json(j.at("nodes"));
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("scenario document: ") + e.what());
    }
}

ScenarioDocument load_scenario(const std::string& path) {
    return load_scenario(path, ScenarioConfig{});
}

ScenarioDocument load_scenario(const std::string& path, const ScenarioConfig& base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), base);
}

void save_scenario(const std::string& path, const ScenarioDocument& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << serialize_scenario(doc);
    if (!out) throw std::runtime_error("failed writing scenario file: " + path);
}

std::string serialize_topology(const TopologyDocument& doc) {
    ordered_json j;
    j["version"] = kDocumentVersion;
    j["model"] = model_to_json(doc.model);
    j["nodes"] = nodes_to_json(doc.nodes);
    ordered_json methods;
    ordered_json summary;
    const double n = doc.nodes.empty() ? 1.0 : static_cast<double>(doc.nodes.size());
    for (const MethodTopology& m : doc.methods) {
        ordered_json entry;
        ordered_json edges = ordered_json::array();
        for (const GraphEdge& e : m.edges) edges.push_back(ordered_json::array({e.from, e.to}));
        entry["edges"] = edges;
        ordered_json stats;
        stats["edge_count"] = m.edges.size();
        stats["mean_out_degree"] = static_cast<double>(m.edges.size()) / n;
        if (!m.per_node.empty()) {
            ordered_json per_node = ordered_json::array();
            double power_sum = 0.0;
            for (const NodeOutcome& o : m.per_node) {
                per_node.push_back(ordered_json{{"id", o.id},
                                                {"neighbors", o.neighbors},
                                                {"power", o.power},
                                                {"iterations", o.iterations}});
                power_sum += o.power;
            }
            entry["per_node"] = per_node;
            stats["mean_power"] = power_sum / static_cast<double>(m.per_node.size());
        }
        methods[m.method] = entry;
        summary[m.method] = stats;
    }
    j["methods"] = methods;
    j["summary"] = summary;
    return j.dump(2) + "\n";
}

} // namespace minpower
