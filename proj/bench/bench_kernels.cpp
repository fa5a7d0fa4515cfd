#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "trajens/dataset.hpp"
#include "trajens/learner.hpp"
#include "trajens/metrics.hpp"
#include "trajens/reference.hpp"
#include "trajens/reweight.hpp"

using namespace trajens;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Matrix m(rows, cols);
    // coarse lattice on half the entries so tie handling is exercised
    for (auto& v : m.data) v = (rng() % 2) ? uni(rng) : static_cast<double>(rng() % 7) / 4.0;
    return m;
}

std::pair<std::vector<double>, std::vector<double>> random_scores(std::size_t n,
                                                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> scores(n), labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = (rng() % 10 < 7) ? static_cast<double>(rng() % 5) / 2.0 : uni(rng);
        labels[i] = static_cast<double>(rng() % 2);
    }
    labels[0] = 0.0;
    labels[1] = 1.0;
    return {std::move(scores), std::move(labels)};
}

void bm_rank_normalize(benchmark::State& state) {
    auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 8, 11);
    for (auto _ : state) benchmark::DoNotOptimize(rank_normalize(m));
}

void bm_rank_normalize_reference(benchmark::State& state) {
    auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 8, 11);
    for (auto _ : state) benchmark::DoNotOptimize(reference::rank_normalize(m));
}

void bm_roc_auc(benchmark::State& state) {
    auto [scores, labels] = random_scores(static_cast<std::size_t>(state.range(0)), 12);
    for (auto _ : state) benchmark::DoNotOptimize(roc_auc(scores, labels));
}

void bm_roc_auc_reference(benchmark::State& state) {
    auto [scores, labels] = random_scores(static_cast<std::size_t>(state.range(0)), 12);
    for (auto _ : state) benchmark::DoNotOptimize(reference::roc_auc(scores, labels));
}

void bm_gbdt_train(benchmark::State& state) {
    auto sr = make_synthetic_regression(static_cast<std::size_t>(state.range(0)), 8, 0.2, 13);
    std::vector<double> w(sr.dataset.n(), 1.0);
    std::vector<std::size_t> all(sr.dataset.f());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    LearnerConfig lc;
    lc.iterations = 20;
    lc.gbdt.max_leaves = 16;
    for (auto _ : state) benchmark::DoNotOptimize(train_gbdt(sr.dataset, w, all, lc, 1));
}

}  // namespace

BENCHMARK(bm_rank_normalize)->Arg(1000)->Arg(5000)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_rank_normalize_reference)->Arg(1000)->Arg(5000)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_roc_auc)->Arg(1000)->Arg(5000)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_roc_auc_reference)->Arg(1000)->Arg(5000)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_gbdt_train)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
