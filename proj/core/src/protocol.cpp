#include "minpower/protocol.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace minpower {

namespace {

constexpr int kMaxScheduleSteps = 4096;

// Shared scaffolding for both searches: the world minus u, discovery
// bookkeeping, and state snapshots for observers.
struct SearchContext {
    const PowerModel& model;
    NodeRecord self;
    std::vector<NodeRecord> others;  // world minus u, sorted by id
    std::vector<char> in_A;
    std::vector<char> non_nbr;
    std::vector<std::size_t> a_order;  // discovery order, indices into others

    SearchContext(const PowerModel& m, const NodeRecord& u, std::span<const NodeRecord> world)
        : model(m), self(u) {
        bool found = false;
        for (const NodeRecord& w : world) {
            if (w.id == u.id) {
                if (!(w == u)) throw std::invalid_argument("search: node record disagrees with world");
                found = true;
                continue;
            }
            others.push_back(w);
        }
        if (!found) throw std::invalid_argument("search: node not in world");
        std::sort(others.begin(), others.end(),
                  [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
        in_A.assign(others.size(), 0);
        non_nbr.assign(others.size(), 0);
    }

    // Nodes newly inside F(u,p), in id order. Membership is the exact
    // comparison used for the reference graph, so at p = p_max the
    // discovered set equals the reference out-neighborhood.
    std::vector<std::size_t> discover(double p) {
        std::vector<std::size_t> M;
        for (std::size_t i = 0; i < others.size(); ++i) {
            if (!in_A[i] && transmit_power(model, self.loc, others[i].loc) <= p) M.push_back(i);
        }
        for (std::size_t i : M) {
            in_A[i] = 1;
            a_order.push_back(i);
        }
        return M;
    }

    // Loc(target) in R_{u -> relay}?
    bool in_relay_region(std::size_t relay, std::size_t target) const {
        return relay_beats_direct(model, self.loc, others[relay].loc, others[target].loc);
    }

    std::vector<NodeId> neighbor_ids() const {
        std::vector<NodeId> out;
        for (std::size_t i = 0; i < others.size(); ++i) {
            if (in_A[i] && !non_nbr[i]) out.push_back(others[i].id);
        }
        return out;  // others is id-sorted, so this is too
    }

    std::vector<NodeId> discovered_ids() const {
        std::vector<NodeId> out;
        for (std::size_t i = 0; i < others.size(); ++i) {
            if (in_A[i]) out.push_back(others[i].id);
        }
        return out;
    }

    SearchState snapshot(double p, std::uint32_t iteration, bool eta_over_all_of_A) const {
        SearchState st;
        st.self = self;
        st.p = p;
        st.iteration = iteration;
        st.eta.center = self.loc;
        for (std::size_t i : a_order) {
            st.discovered.push_back(others[i]);
            if (non_nbr[i]) st.non_neighbors.push_back(others[i].id);
            if (eta_over_all_of_A || !non_nbr[i]) st.eta.obstructors.push_back(others[i].loc);
        }
        std::sort(st.non_neighbors.begin(), st.non_neighbors.end());
        return st;
    }
};

std::vector<std::size_t> policy_sorted(const SearchContext& ctx, std::vector<std::size_t> idxs,
                                       FlipOrder order) {
    auto key = [&](std::size_t i) { return distance_squared(ctx.self.loc, ctx.others[i].loc); };
    switch (order) {
    case FlipOrder::ById:
        std::sort(idxs.begin(), idxs.end());  // others is id-sorted
        break;
    case FlipOrder::ByDistance:
        std::sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
            double ka = key(a), kb = key(b);
            return ka < kb || (ka == kb && a < b);
        });
        break;
    case FlipOrder::ByDistanceReverse:
        std::sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
            double ka = key(a), kb = key(b);
            return ka > kb || (ka == kb && a < b);
        });
        break;
    }
    return idxs;
}

} // namespace

EscalationSchedule EscalationSchedule::doubling(const PowerModel& m) {
    m.validate();
    return EscalationSchedule{m.p_max / 1024.0, [](double p) { return 2.0 * p; }};
}

void EscalationSchedule::validate(const PowerModel& m) const {
    m.validate();
    if (!rule) throw std::invalid_argument("schedule: missing increase rule");
    if (!(p0 > 0.0) || !(p0 < m.p_max))
        throw std::invalid_argument("schedule: p0 must lie in (0, p_max)");
    double p = p0;
    for (int i = 0; i < kMaxScheduleSteps; ++i) {
        double bumped = rule(p);
        if (!(bumped > p)) throw std::invalid_argument("schedule: rule must be strictly increasing");
        p = bumped;
        if (p >= m.p_max) return;
    }
    throw std::invalid_argument("schedule: rule does not reach p_max");
}

double EscalationSchedule::next(double p, double p_max) const {
    double bumped = rule(p);
    return bumped < p_max ? bumped : p_max;
}

NodeSearchResult smecn_node(const PowerModel& model, const NodeRecord& u,
                            std::span<const NodeRecord> world,
                            const EscalationSchedule& schedule, const SamplingSpec& spec,
                            const SearchObserver& observer) {
    model.validate();
    spec.validate();
    schedule.validate(model);
    SearchContext ctx(model, u, world);

    EtaSampler eta(model, u.loc, spec);
    double p = schedule.p0;
    std::uint32_t iterations = 0;
    while (!eta.covered_by(p)) {
        if (++iterations > static_cast<std::uint32_t>(kMaxScheduleSteps))
            throw std::logic_error("smecn_node: escalation failed to converge");
        p = schedule.next(p, model.p_max);

        std::vector<std::size_t> M = ctx.discover(p);
        for (std::size_t v : M) {
            for (std::size_t w : ctx.a_order) {
                // v == w would compare a node against its own location: a
                // cost tie when c == 0 and never a real two-hop path.
                if (w == v) continue;
                if (ctx.in_relay_region(w, v)) {
                    ctx.non_nbr[v] = 1;
                } else if (ctx.in_relay_region(v, w)) {
                    ctx.non_nbr[w] = 1;
                }
            }
        }
        for (std::size_t v : M) eta.add_obstructor(ctx.others[v].loc);
        if (observer) observer(ctx.snapshot(p, iterations, /*eta_over_all_of_A=*/true));
    }

    return NodeSearchResult{ctx.neighbor_ids(), ctx.discovered_ids(), eta.covering_power(), iterations};
}

NodeSearchResult mecn_node(const PowerModel& model, const NodeRecord& u,
                           std::span<const NodeRecord> world,
                           const EscalationSchedule& schedule, const SamplingSpec& spec,
                           FlipOrder order, const SearchObserver& observer) {
    model.validate();
    spec.validate();
    schedule.validate(model);
    SearchContext ctx(model, u, world);

    // Unlike the accumulating SMECN region, this eta is rebuilt from the
    // current neighbor candidates at the end of every iteration, so removed
    // obstructions genuinely reopen the region.
    std::optional<EtaSampler> eta;
    eta.emplace(model, u.loc, spec);
    double p = schedule.p0;
    std::uint32_t iterations = 0;
    while (!eta->covered_by(p)) {
        if (++iterations > static_cast<std::uint32_t>(kMaxScheduleSteps))
            throw std::logic_error("mecn_node: escalation failed to converge");
        p = schedule.next(p, model.p_max);

        std::vector<std::size_t> M = ctx.discover(p);
        for (std::size_t v : M) ctx.non_nbr[v] = 1;

        std::vector<std::size_t> a_sorted = policy_sorted(ctx, ctx.a_order, order);
        std::size_t toggles = 0;
        const std::size_t budget = 2 * ctx.a_order.size() * ctx.a_order.size();
        auto bump_toggles = [&] {
            if (++toggles > budget) throw std::logic_error("mecn_node: flip cascade exceeded toggle budget");
        };
        auto covered_by_neighbor = [&](std::size_t x) {
            for (std::size_t w : a_sorted) {
                if (!ctx.non_nbr[w] && ctx.in_relay_region(w, x)) return true;
            }
            return false;
        };

        // Flip, iteratively. The stack realizes the printed preorder: a
        // removal re-examines every node the new neighbor relays, before the
        // cascade continues with anything queued earlier. Making a node a
        // non-neighbor does not cascade; propagating there as well would
        // erase the order dependence this algorithm is known for (the
        // four-node fixture pins that behavior down).
        std::vector<std::size_t> stack;
        auto flip = [&](std::size_t v0) {
            stack.push_back(v0);
            while (!stack.empty()) {
                std::size_t x = stack.back();
                stack.pop_back();
                if (!ctx.non_nbr[x]) {
                    ctx.non_nbr[x] = 1;
                    bump_toggles();
                } else if (!covered_by_neighbor(x)) {
                    ctx.non_nbr[x] = 0;
                    bump_toggles();
                    // x just became a neighbor: everything it relays must be
                    // re-flipped, in policy order (reverse-pushed for LIFO).
                    std::vector<std::size_t> kids;
                    for (std::size_t w : a_sorted) {
                        if (w != x && ctx.in_relay_region(x, w)) kids.push_back(w);
                    }
                    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
                }
            }
        };
        for (std::size_t v : policy_sorted(ctx, M, order)) flip(v);

        eta.emplace(model, u.loc, spec);
        for (std::size_t i : ctx.a_order) {
            if (!ctx.non_nbr[i]) eta->add_obstructor(ctx.others[i].loc);
        }
        if (observer) observer(ctx.snapshot(p, iterations, /*eta_over_all_of_A=*/false));
    }

    return NodeSearchResult{ctx.neighbor_ids(), ctx.discovered_ids(), eta->covering_power(), iterations};
}

ProtocolResult run_protocol(const PowerModel& model, std::span<const NodeRecord> world,
                            const EscalationSchedule& schedule, const SamplingSpec& spec,
                            ProtocolKind kind, FlipOrder order) {
    model.validate();
    spec.validate();
    schedule.validate(model);

    NetworkGraph graph(model, world);  // also rejects duplicate ids
    for (std::size_t i = 1; i < graph.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (graph.node(i).loc == graph.node(j).loc)
                throw std::invalid_argument("run_protocol: coincident node locations");
        }
    }

    ProtocolResult result{{}, std::move(graph)};
    result.per_node.reserve(result.graph.size());
    for (std::size_t i = 0; i < result.graph.size(); ++i) {
        const NodeRecord& u = result.graph.node(i);
        NodeSearchResult r = (kind == ProtocolKind::Smecn)
                                 ? smecn_node(model, u, world, schedule, spec)
                                 : mecn_node(model, u, world, schedule, spec, order);
        for (NodeId v : r.neighbors) result.graph.add_edge(u.id, v);
        result.per_node.push_back(NodeOutcome{u.id, std::move(r.neighbors), r.power, r.iterations});
    }
    return result;
}

} // namespace minpower
