#include "dps/bdd.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace dps::bdd;

namespace {

// n-queens style pairwise exclusion over a row of n variables.
void BM_PairwiseExclusion(benchmark::State& state)
{
    const auto n = static_cast<Var>(state.range(0));
    for (auto _ : state) {
        Manager mgr(n);
        Bdd f = mgr.mk_true();
        for (Var i = 0; i < n; ++i)
            for (Var j = i + 1; j < n; ++j)
                f = f & !(mgr.mk_var(i) & mgr.mk_var(j));
        benchmark::DoNotOptimize(mgr.dag_size(f));
    }
}
BENCHMARK(BM_PairwiseExclusion)->Arg(16)->Arg(32)->Arg(64);

// Interleaved equality x_i = y_i, then existential projection of every y.
void BM_EqualityAndProjection(benchmark::State& state)
{
    const auto n = static_cast<Var>(state.range(0));
    for (auto _ : state) {
        Manager mgr(2 * n);
        Bdd f = mgr.mk_true();
        std::vector<Var> ys;
        for (Var i = 0; i < n; ++i) {
            f = f & mgr.apply_iff(mgr.mk_var(2 * i), mgr.mk_var(2 * i + 1));
            ys.push_back(2 * i + 1);
        }
        benchmark::DoNotOptimize(mgr.exists(f, ys));
    }
}
BENCHMARK(BM_EqualityAndProjection)->Arg(32)->Arg(128)->Arg(512);

} // namespace
