#pragma once

#include "minpower/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace minpower {

// Scenario files: versioned JSON. A document normally carries only the
// generative parameters (placement is rematerialized from the seed); an
// explicit `nodes` list, when present, replaces random placement entirely.
struct ScenarioDocument {
    ScenarioConfig config;
    std::optional<std::vector<NodeRecord>> nodes;
};

inline constexpr int kDocumentVersion = 1;

std::string serialize_scenario(const ScenarioDocument& doc);
ScenarioDocument parse_scenario(const std::string& text);  // invalid_argument on bad input
// Fields absent from the document keep their values from `base` instead of
// the built-in defaults (used for environment-supplied sampling defaults).
ScenarioDocument parse_scenario(const std::string& text, const ScenarioConfig& base);
ScenarioDocument load_scenario(const std::string& path);   // runtime_error on IO failure
ScenarioDocument load_scenario(const std::string& path, const ScenarioConfig& base);
void save_scenario(const std::string& path, const ScenarioDocument& doc);

// Topology export: edge sets by construction method over one node set, plus
// per-node search outcomes for the protocol-built methods.
struct MethodTopology {
    std::string method;  // reference | smecn | mecn | e2 | emin
    std::vector<GraphEdge> edges;
    std::vector<NodeOutcome> per_node;  // empty for non-protocol methods
};

struct TopologyDocument {
    PowerModel model;
    std::vector<NodeRecord> nodes;
    std::vector<MethodTopology> methods;
};

// Includes a derived summary block (edge count, mean out-degree, and mean
// power where per-node outcomes exist) for each method.
std::string serialize_topology(const TopologyDocument& doc);

// Enum codecs shared by documents and CLI flags. Parsers throw
// std::invalid_argument on unknown names.
std::string to_string(ProtocolKind kind);
std::string to_string(FlipOrder order);
std::string to_string(SinkRule rule);
ProtocolKind parse_protocol(const std::string& name);
FlipOrder parse_flip_order(const std::string& name);
SinkRule parse_sink_rule(const std::string& name);

} // namespace minpower
