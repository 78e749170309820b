#include "minpower/topology.hpp"

#include "minpower/numeric.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace minpower {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dijkstra over the chosen adjacency. With reverse = true the in-arcs are
// followed, so dist[i] is the cost of the best path from node i *to* start.
std::vector<double> dijkstra(const NetworkGraph& g, std::size_t start, bool reverse) {
    std::vector<double> dist(g.size(), kInf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[start] = 0.0;
    pq.emplace(0.0, start);
    while (!pq.empty()) {
        auto [d, idx] = pq.top();
        pq.pop();
        if (d > dist[idx]) continue;  // stale entry
        const auto arcs = reverse ? g.in(idx) : g.out(idx);
        for (const auto& arc : arcs) {
            double nd = d + arc.cost;
            if (nd < dist[arc.target]) {
                dist[arc.target] = nd;
                pq.emplace(nd, arc.target);
            }
        }
    }
    return dist;
}

} // namespace

std::optional<PathResult> min_energy_path(const NetworkGraph& g, NodeId src, NodeId dst) {
    std::size_t s = g.index_of(src);
    std::size_t t = g.index_of(dst);
    if (s == t) return PathResult{{src}, 0.0};

    // dist_to[i]: best cost from i to dst.
    std::vector<double> dist_to = dijkstra(g, t, /*reverse=*/true);
    if (dist_to[s] == kInf) return std::nullopt;

    // Greedy descent: at each node take the out-arc minimising
    // (arc cost + dist_to[target], target index). Every candidate value was
    // produced by the identical float expression during relaxation, so the
    // minimum matches dist_to exactly and the chosen path is optimal with
    // the lexicographically smallest id sequence among optima.
    PathResult result;
    result.path.push_back(src);
    std::size_t cur = s;
    double total = 0.0;
    std::size_t guard = g.size() + 1;
    while (cur != t) {
        if (result.path.size() > guard)
            throw std::logic_error("min_energy_path: walk failed to terminate");
        std::size_t best = g.size();
        double best_value = kInf;
        double best_arc_cost = 0.0;
        for (const auto& arc : g.out(cur)) {
            double value = arc.cost + dist_to[arc.target];
            if (value < best_value || (value == best_value && arc.target < best)) {
                best = arc.target;
                best_value = value;
                best_arc_cost = arc.cost;
            }
        }
        if (best == g.size())
            throw std::logic_error("min_energy_path: dead end on a reachable walk");
        total += best_arc_cost;
        cur = best;
        result.path.push_back(g.node(cur).id);
    }
    result.cost = total;
    return result;
}

NetworkGraph compute_E2(const NetworkGraph& reference) {
    NetworkGraph out(reference.model(), reference.nodes());
    for (std::size_t u = 0; u < reference.size(); ++u) {
        for (const auto& direct : reference.out(u)) {
            bool redundant = false;
            for (const auto& hop1 : reference.out(u)) {
                if (hop1.target == direct.target) continue;
                double relayed = reference.arc_cost(hop1.target, direct.target);
                if (relayed == kInf) continue;
                if (hop1.cost + relayed <= direct.cost) {  // tie counts as redundant
                    redundant = true;
                    break;
                }
            }
            if (!redundant) out.add_edge(reference.node(u).id, reference.node(direct.target).id);
        }
    }
    return out;
}

NetworkGraph compute_Emin(const NetworkGraph& reference) {
    // dist[w] holds single-source distances from w; computed lazily since a
    // node only matters once it appears as the first hop of some detour.
    std::vector<std::vector<double>> dist(reference.size());
    auto dist_from = [&](std::size_t w) -> const std::vector<double>& {
        if (dist[w].empty()) dist[w] = dijkstra(reference, w, /*reverse=*/false);
        return dist[w];
    };

    NetworkGraph out(reference.model(), reference.nodes());
    for (std::size_t u = 0; u < reference.size(); ++u) {
        for (const auto& direct : reference.out(u)) {
            // Any detour decomposes as first hop (u,w) plus a best path w->v,
            // and revisiting v never helps because each hop costs > 0.
            bool redundant = false;
            for (const auto& hop1 : reference.out(u)) {
                if (hop1.target == direct.target) continue;
                double rest = dist_from(hop1.target)[direct.target];
                if (rest == kInf) continue;
                if (hop1.cost + rest <= direct.cost) {
                    redundant = true;
                    break;
                }
            }
            if (!redundant) out.add_edge(reference.node(u).id, reference.node(direct.target).id);
        }
    }
    return out;
}

bool has_min_energy_property(const NetworkGraph& reference, const NetworkGraph& sub) {
    if (!std::ranges::equal(reference.nodes(), sub.nodes()))
        throw std::invalid_argument("has_min_energy_property: node sets differ");
    for (std::size_t s = 0; s < reference.size(); ++s) {
        std::vector<double> ref_dist = dijkstra(reference, s, /*reverse=*/false);
        std::vector<double> sub_dist = dijkstra(sub, s, /*reverse=*/false);
        for (std::size_t t = 0; t < reference.size(); ++t) {
            if (ref_dist[t] == kInf) continue;
            if (sub_dist[t] == kInf) return false;
            // A subgraph can only be costlier, so one-sided slack suffices.
            if (!leq_with_slack(sub_dist[t], ref_dist[t])) return false;
        }
    }
    return true;
}

bool is_k_redundant(const NetworkGraph& g, NodeId from, NodeId to, std::uint32_t k) {
    std::size_t s = g.index_of(from);
    std::size_t t = g.index_of(to);
    double direct = g.arc_cost(s, t);
    if (direct == kInf) throw std::invalid_argument("is_k_redundant: edge not in graph");
    if (k == 0) return false;

    // best[x] = cheapest walk from `from` to x using exactly h hops.
    std::vector<double> best(g.size(), kInf);
    best[s] = 0.0;
    for (std::uint32_t h = 0; h < k; ++h) {
        std::vector<double> next(g.size(), kInf);
        for (std::size_t x = 0; x < g.size(); ++x) {
            if (best[x] == kInf) continue;
            for (const auto& arc : g.out(x)) {
                double cand = best[x] + arc.cost;
                if (cand < next[arc.target]) next[arc.target] = cand;
            }
        }
        best.swap(next);
    }
    if (best[t] == kInf) return false;
    return best[t] <= direct;
}

} // namespace minpower
