// Microbenchmarks for the hot paths: weight construction, the correlation
// kernel, null replicas and layer overlap. Not part of the ctest suite.

#include <benchmark/benchmark.h>

#include <vector>

#include "mlsim/attributes.hpp"
#include "mlsim/icc.hpp"
#include "mlsim/network.hpp"
#include "mlsim/overlap.hpp"
#include "mlsim/resampling.hpp"
#include "mlsim/rng.hpp"
#include "mlsim/synth.hpp"

using namespace mlsim;

namespace {

SynthData make_data(std::size_t n, double rate, std::uint64_t seed, std::size_t n_layers = 1) {
    SynthConfig cfg;
    cfg.n_nodes = n;
    for (std::size_t l = 0; l < n_layers; ++l)
        cfg.layers.push_back({"layer" + std::to_string(l), rate, 1.0});
    cfg.attributes = {{"gender", AttrKind::categorical}};
    cfg.seed = seed;
    return generate(cfg);
}

} // namespace

static void BM_BuildLayer(benchmark::State& state) {
    auto data = make_data(std::size_t(state.range(0)), 1.0, 7);
    for (auto _ : state) {
        auto layer = build_layer(data.layers[0], 1.3);
        benchmark::DoNotOptimize(layer.edges.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(data.layers[0].edge_count()));
}
BENCHMARK(BM_BuildLayer)->Arg(100)->Arg(300);

static void BM_WeightedIcc(benchmark::State& state) {
    auto data = make_data(std::size_t(state.range(0)), 1.0, 7);
    auto layer = build_layer(data.layers[0], 1.0);
    for (auto _ : state) {
        auto res = weighted_icc(layer, data.attrs, "gender");
        benchmark::DoNotOptimize(res.r);
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(layer.edges.size()));
}
BENCHMARK(BM_WeightedIcc)->Arg(100)->Arg(300);

static void BM_IccKernel(benchmark::State& state) {
    rng::Engine g = rng::make_engine(3, "bench-kernel");
    std::vector<EdgeSample> samples;
    for (int i = 0; i < state.range(0); ++i)
        samples.push_back({rng::normal(g), rng::normal(g), rng::uniform01(g) + 0.01});
    for (auto _ : state) {
        auto res = weighted_icc_samples(samples, IccConvention::canonical);
        benchmark::DoNotOptimize(res.r);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IccKernel)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_ReshuffleLayer(benchmark::State& state) {
    auto data = make_data(std::size_t(state.range(0)), 1.0, 7);
    auto layer = build_layer(data.layers[0], 1.0);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto null = reshuffle_layer(layer, ++seed);
        benchmark::DoNotOptimize(null.edges.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(layer.edges.size()));
}
BENCHMARK(BM_ReshuffleLayer)->Arg(100)->Arg(300);

static void BM_IccPValue(benchmark::State& state) {
    auto data = make_data(100, 1.0, 7);
    auto layer = build_layer(data.layers[0], 1.0);
    for (auto _ : state) {
        auto sig = icc_p_value(layer, data.attrs, "gender", std::size_t(state.range(0)), 11);
        benchmark::DoNotOptimize(sig.p_value);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IccPValue)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_LayerOverlap(benchmark::State& state) {
    auto data = make_data(std::size_t(state.range(0)), 1.0, 7, 2);
    auto a = build_layer(data.layers[0], 1.0);
    auto b = build_layer(data.layers[1], 1.0);
    for (auto _ : state) {
        const double r = layer_overlap(a, b, PairDomain::union_of_links);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(a.edges.size() + b.edges.size()));
}
BENCHMARK(BM_LayerOverlap)->Arg(100)->Arg(300);

static void BM_SynthGenerate(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state) {
        SynthConfig cfg;
        cfg.n_nodes = std::size_t(state.range(0));
        cfg.layers = {{"call", 0.5, 1.0}};
        cfg.attributes = {{"gender", AttrKind::categorical}};
        cfg.seed = ++seed;
        auto data = generate(cfg);
        benchmark::DoNotOptimize(data.layers[0].entries.size());
    }
}
BENCHMARK(BM_SynthGenerate)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
