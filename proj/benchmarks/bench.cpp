#include "minpower/protocol.hpp"
#include "minpower/region.hpp"
#include "minpower/scenario.hpp"
#include "minpower/topology.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

using namespace minpower;

namespace {

// Deterministic connected placement on a 1000 x 1000 field, range 400.
struct World {
    PowerModel model;
    std::vector<NodeRecord> nodes;
};

World make_world(std::uint32_t count, std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.node_count = count;
    cfg.width = 1000;
    cfg.height = 1000;
    cfg.seed = seed;
    cfg.model = PowerModel{1, 2, 0, 160000};  // 400 m range
    Placement placed = materialize_nodes(cfg);
    return {cfg.model, std::move(placed.nodes)};
}

} // namespace

static void BM_reference_graph(benchmark::State& state) {
    World w = make_world(static_cast<std::uint32_t>(state.range(0)), 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_reference_graph(w.model, w.nodes));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_reference_graph)->Arg(50)->Arg(100)->Arg(200)->Complexity();

static void BM_compute_e2(benchmark::State& state) {
    World w = make_world(static_cast<std::uint32_t>(state.range(0)), 7);
    NetworkGraph ref = build_reference_graph(w.model, w.nodes);
    for (auto _ : state)
        benchmark::DoNotOptimize(compute_E2(ref));
}
BENCHMARK(BM_compute_e2)->Arg(50)->Arg(100)->Arg(200);

static void BM_compute_emin(benchmark::State& state) {
    World w = make_world(static_cast<std::uint32_t>(state.range(0)), 7);
    NetworkGraph ref = build_reference_graph(w.model, w.nodes);
    for (auto _ : state)
        benchmark::DoNotOptimize(compute_Emin(ref));
}
BENCHMARK(BM_compute_emin)->Arg(50)->Arg(100)->Arg(200);

static void BM_min_energy_path(benchmark::State& state) {
    World w = make_world(200, 7);
    NetworkGraph ref = build_reference_graph(w.model, w.nodes);
    NodeId src = w.nodes.front().id;
    NodeId dst = w.nodes.back().id;
    for (auto _ : state)
        benchmark::DoNotOptimize(min_energy_path(ref, src, dst));
}
BENCHMARK(BM_min_energy_path);

static void BM_covering_power(benchmark::State& state) {
    World w = make_world(static_cast<std::uint32_t>(state.range(0)) + 1, 11);
    const NodeRecord& center = w.nodes.front();
    for (auto _ : state) {
        EtaSampler sampler(w.model, center.loc, SamplingSpec{});
        for (std::size_t i = 1; i < w.nodes.size(); ++i)
            sampler.add_obstructor(w.nodes[i].loc);
        benchmark::DoNotOptimize(sampler.covering_power());
    }
}
BENCHMARK(BM_covering_power)->Arg(4)->Arg(16)->Arg(64);

static void BM_search_conservative(benchmark::State& state) {
    World w = make_world(static_cast<std::uint32_t>(state.range(0)), 3);
    auto sched = EscalationSchedule::doubling(w.model);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            run_protocol(w.model, w.nodes, sched, SamplingSpec{}, ProtocolKind::Smecn));
}
BENCHMARK(BM_search_conservative)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_search_eager(benchmark::State& state) {
    World w = make_world(static_cast<std::uint32_t>(state.range(0)), 3);
    auto sched = EscalationSchedule::doubling(w.model);
    for (auto _ : state)
        benchmark::DoNotOptimize(run_protocol(w.model, w.nodes, sched, SamplingSpec{},
                                              ProtocolKind::Mecn, FlipOrder::ById));
}
BENCHMARK(BM_search_eager)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
