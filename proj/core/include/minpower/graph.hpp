#pragma once

#include "minpower/power_model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace minpower {

using NodeId = std::uint32_t;

struct NodeRecord {
    NodeId id = 0;
    Location loc;

    friend bool operator==(const NodeRecord& a, const NodeRecord& b) {
        return a.id == b.id && a.loc == b.loc;
    }
};

struct GraphEdge {
    NodeId from = 0;
    NodeId to = 0;
    double cost = 0.0;  // link_cost(from, to)
};

// Directed graph over a fixed node set with link costs cached on the edges.
// Nodes are stored sorted by id, so vertex-index order equals id order and
// deterministic iteration by index doubles as iteration by id. Duplicate ids
// are rejected at construction.
class NetworkGraph {
public:
    struct Arc {
        std::uint32_t target = 0;  // vertex index
        double cost = 0.0;
    };

    NetworkGraph() = default;
    NetworkGraph(const PowerModel& m, std::span<const NodeRecord> nodes);

    std::size_t size() const { return nodes_.size(); }
    std::span<const NodeRecord> nodes() const { return nodes_; }
    const NodeRecord& node(std::size_t idx) const { return nodes_[idx]; }
    const PowerModel& model() const { return model_; }

    bool has_node(NodeId id) const;
    std::size_t index_of(NodeId id) const;  // throws on unknown id

    void add_edge(NodeId from, NodeId to);     // cost derived from the model
    bool remove_edge(NodeId from, NodeId to);  // false if absent
    bool has_edge(NodeId from, NodeId to) const;

    std::span<const Arc> out(std::size_t idx) const { return out_[idx]; }
    std::span<const Arc> in(std::size_t idx) const { return in_[idx]; }

    // Cost of the arc between two vertex indices, infinity if absent.
    double arc_cost(std::size_t from_idx, std::size_t to_idx) const;

    std::size_t edge_count() const { return edge_count_; }
    std::vector<GraphEdge> edges() const;  // sorted by (from, to)

private:
    PowerModel model_{};
    std::vector<NodeRecord> nodes_;
    std::vector<std::vector<Arc>> out_;
    std::vector<std::vector<Arc>> in_;
    std::size_t edge_count_ = 0;
};

// G': every directed edge (u,v), u != v, with transmit_power(u,v) <= p_max.
// This is the obstacle-free circular-region reference everything else is
// judged against.
NetworkGraph build_reference_graph(const PowerModel& m, std::span<const NodeRecord> nodes);

// True iff every node can reach every other in g (edges taken as given).
bool is_connected(const NetworkGraph& g);

} // namespace minpower
