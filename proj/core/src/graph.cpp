#include "minpower/graph.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace minpower {

NetworkGraph::NetworkGraph(const PowerModel& m, std::span<const NodeRecord> nodes)
    : model_(m), nodes_(nodes.begin(), nodes.end()) {
    m.validate();
    std::sort(nodes_.begin(), nodes_.end(),
              [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (nodes_[i].id == nodes_[i - 1].id) {
            throw std::invalid_argument("graph: duplicate node id");
        }
    }
    out_.resize(nodes_.size());
    in_.resize(nodes_.size());
}

bool NetworkGraph::has_node(NodeId id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const NodeRecord& n, NodeId v) { return n.id < v; });
    return it != nodes_.end() && it->id == id;
}

std::size_t NetworkGraph::index_of(NodeId id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const NodeRecord& n, NodeId v) { return n.id < v; });
    if (it == nodes_.end() || it->id != id) {
        throw std::invalid_argument("graph: unknown node id");
    }
    return static_cast<std::size_t>(it - nodes_.begin());
}

namespace {

bool arc_less(const NetworkGraph::Arc& a, std::uint32_t target) { return a.target < target; }

} // namespace

void NetworkGraph::add_edge(NodeId from, NodeId to) {
    if (from == to) throw std::invalid_argument("graph: self edge");
    const auto fi = static_cast<std::uint32_t>(index_of(from));
    const auto ti = static_cast<std::uint32_t>(index_of(to));
    const double cost = link_cost(model_, nodes_[fi].loc, nodes_[ti].loc);

    auto& fwd = out_[fi];
    auto it = std::lower_bound(fwd.begin(), fwd.end(), ti, arc_less);
    if (it != fwd.end() && it->target == ti) return;  // already present
    fwd.insert(it, Arc{ti, cost});

    auto& rev = in_[ti];
    auto rit = std::lower_bound(rev.begin(), rev.end(), fi, arc_less);
    rev.insert(rit, Arc{fi, cost});
    ++edge_count_;
}

bool NetworkGraph::remove_edge(NodeId from, NodeId to) {
    if (!has_node(from) || !has_node(to)) return false;
    const auto fi = static_cast<std::uint32_t>(index_of(from));
    const auto ti = static_cast<std::uint32_t>(index_of(to));
    auto& fwd = out_[fi];
    auto it = std::lower_bound(fwd.begin(), fwd.end(), ti, arc_less);
    if (it == fwd.end() || it->target != ti) return false;
    fwd.erase(it);
    auto& rev = in_[ti];
    auto rit = std::lower_bound(rev.begin(), rev.end(), fi, arc_less);
    rev.erase(rit);
    --edge_count_;
    return true;
}

bool NetworkGraph::has_edge(NodeId from, NodeId to) const {
    if (!has_node(from) || !has_node(to)) return false;
    const auto fi = index_of(from);
    const auto ti = static_cast<std::uint32_t>(index_of(to));
    const auto& fwd = out_[fi];
    auto it = std::lower_bound(fwd.begin(), fwd.end(), ti, arc_less);
    return it != fwd.end() && it->target == ti;
}

double NetworkGraph::arc_cost(std::size_t from_idx, std::size_t to_idx) const {
    const auto& fwd = out_[from_idx];
    auto it = std::lower_bound(fwd.begin(), fwd.end(), static_cast<std::uint32_t>(to_idx), arc_less);
    if (it == fwd.end() || it->target != to_idx) return std::numeric_limits<double>::infinity();
    return it->cost;
}

std::vector<GraphEdge> NetworkGraph::edges() const {
    std::vector<GraphEdge> result;
    result.reserve(edge_count_);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        for (const Arc& a : out_[i]) {
            result.push_back(GraphEdge{nodes_[i].id, nodes_[a.target].id, a.cost});
        }
    }
    return result;
}

NetworkGraph build_reference_graph(const PowerModel& m, std::span<const NodeRecord> nodes) {
    NetworkGraph g(m, nodes);
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (transmit_power(m, g.node(i).loc, g.node(j).loc) <= m.p_max) {
                g.add_edge(g.node(i).id, g.node(j).id);
                g.add_edge(g.node(j).id, g.node(i).id);
            }
        }
    }
    return g;
}

bool is_connected(const NetworkGraph& g) {
    const std::size_t n = g.size();
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const std::uint32_t u = stack.back();
        stack.pop_back();
        for (const auto& a : g.out(u)) {
            if (!seen[a.target]) {
                seen[a.target] = 1;
                ++visited;
                stack.push_back(a.target);
            }
        }
    }
    return visited == n;
}

} // namespace minpower
