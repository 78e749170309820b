#pragma once

#include "minpower/graph.hpp"

#include <optional>
#include <vector>

namespace minpower {

struct PathResult {
    std::vector<NodeId> path;  // src first, dst last
    double cost = 0.0;
};

// Minimum-cost directed path. Among equal-cost minima the lexicographically
// smallest node-id sequence is returned, so goldens are reproducible.
// src == dst yields the single-node path with cost 0.
std::optional<PathResult> min_energy_path(const NetworkGraph& g, NodeId src, NodeId dst);

// Subgraph of the reference graph that drops every 2-redundant edge: (u,v)
// survives iff no single relay w gives link(u,w) + link(w,v) <= link(u,v)
// with both hops present in the reference graph.
NetworkGraph compute_E2(const NetworkGraph& reference);

// Smallest subgraph with the minimum-energy property: (u,v) survives iff no
// multi-hop path ties or beats the direct edge. Paths revisiting v cannot
// win (every extra hop costs strictly more than zero), so the check reduces
// to first-hop decomposition: min over w != v of link(u,w) + dist(w,v).
NetworkGraph compute_Emin(const NetworkGraph& reference);

// True iff sub preserves the reference-optimal path cost for every ordered
// pair that is connected in reference. Costs are compared with the library
// comparison slack. Both graphs must share the same node set.
bool has_min_energy_property(const NetworkGraph& reference, const NetworkGraph& sub);

// True iff some walk of exactly k hops from `from` to `to` ties or beats the
// direct edge cost. Dynamic programming over hop counts; walks may revisit
// nodes, which never helps but matches the liberal path definition.
bool is_k_redundant(const NetworkGraph& g, NodeId from, NodeId to, std::uint32_t k);

} // namespace minpower
