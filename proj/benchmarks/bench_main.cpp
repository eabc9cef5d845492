#include <benchmark/benchmark.h>

#include <vector>

#include "clusterlens/dendrogram.hpp"
#include "clusterlens/embedding.hpp"
#include "clusterlens/kmeans.hpp"
#include "clusterlens/metrics.hpp"
#include "clusterlens/rng.hpp"

namespace {

using namespace clusterlens;

EmbeddingMatrix random_unit_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
    EmbeddingMatrix m;
    m.n = n;
    m.d = d;
    m.data.resize(n * d);
    Rng rng(seed);
    for (double& v : m.data) v = rng.next_gaussian();
    return l2_normalize(m).matrix;
}

void BM_PairwiseDistances(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto d = static_cast<std::size_t>(state.range(1));
    const EmbeddingMatrix X = random_unit_matrix(n, d, 7);
    for (auto _ : state) {
        auto dist = pairwise_distances(X, true);
        benchmark::DoNotOptimize(dist.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n - 1) / 2));
}
BENCHMARK(BM_PairwiseDistances)->Args({512, 64})->Args({2048, 128})->Args({4096, 512})
    ->Unit(benchmark::kMillisecond);

void BM_WardDendrogram(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto d = static_cast<std::size_t>(state.range(1));
    const EmbeddingMatrix X = random_unit_matrix(n, d, 11);
    for (auto _ : state) {
        MergeTree tree = build_dendrogram(X, LinkageKind::ward);
        benchmark::DoNotOptimize(tree.merges.data());
    }
}
BENCHMARK(BM_WardDendrogram)->Args({512, 64})->Args({1024, 64})->Args({2048, 128})
    ->Unit(benchmark::kMillisecond);

void BM_SingleDendrogram(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const EmbeddingMatrix X = random_unit_matrix(n, 64, 13);
    for (auto _ : state) {
        MergeTree tree = build_dendrogram(X, LinkageKind::single);
        benchmark::DoNotOptimize(tree.merges.data());
    }
}
BENCHMARK(BM_SingleDendrogram)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_Cut(benchmark::State& state) {
    const EmbeddingMatrix X = random_unit_matrix(2048, 32, 17);
    const MergeTree tree = build_dendrogram(X, LinkageKind::ward);
    for (auto _ : state) {
        ClusterAssignment a = cut(tree, 40);
        benchmark::DoNotOptimize(a.labels.data());
    }
}
BENCHMARK(BM_Cut);

void BM_KMeans(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const EmbeddingMatrix X = random_unit_matrix(n, 64, 19);
    for (auto _ : state) {
        KMeansResult result = kmeans(X, 16, 3);
        benchmark::DoNotOptimize(result.assignment.labels.data());
    }
    state.SetLabel("k=16");
}
BENCHMARK(BM_KMeans)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_AmiLargeTable(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(23);
    std::vector<ClassId> pred(n), truth(n);
    for (auto& v : pred) v = static_cast<ClassId>(rng.next_below(52));
    for (auto& v : truth) v = static_cast<ClassId>(rng.next_below(52));
    for (auto _ : state) {
        const double value = ami(contingency(pred, truth));
        benchmark::DoNotOptimize(value);
    }
}
BENCHMARK(BM_AmiLargeTable)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_Ari(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(29);
    std::vector<ClassId> a(n), b(n);
    for (auto& v : a) v = static_cast<ClassId>(rng.next_below(40));
    for (auto& v : b) v = static_cast<ClassId>(rng.next_below(40));
    for (auto _ : state) {
        const double value = ari(std::span<const ClassId>(a), std::span<const ClassId>(b));
        benchmark::DoNotOptimize(value);
    }
}
BENCHMARK(BM_Ari)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
