#include <benchmark/benchmark.h>

#include "vbg/classify.hpp"
#include "vbg/duality.hpp"
#include "vbg/generate.hpp"

using namespace vbg;

namespace {

FiniteGroupoid groupoid_for(int which) {
    switch (which) {
        case 0: return pair_groupoid(3);
        case 1: return cyclic_group(4);
        default: return action_groupoid(cyclic_group(2), 2, {{0, 1}, {1, 0}});
    }
}

void BM_RankQ(benchmark::State& state) {
    Rng rng(1);
    auto n = static_cast<std::size_t>(state.range(0));
    Matrix a = random_matrix(rng, n, n, Field::rationals());
    for (auto _ : state) benchmark::DoNotOptimize(rank(a));
}
BENCHMARK(BM_RankQ)->Arg(8)->Arg(32)->Arg(64);

void BM_RankF3(benchmark::State& state) {
    Rng rng(2);
    auto n = static_cast<std::size_t>(state.range(0));
    Matrix a = random_matrix(rng, n, n, Field::prime(3));
    for (auto _ : state) benchmark::DoNotOptimize(rank(a));
}
BENCHMARK(BM_RankF3)->Arg(8)->Arg(32)->Arg(64);

void BM_CheckRuth2(benchmark::State& state) {
    Rng rng(3);
    Ruth2 r = random_ruth2(rng, groupoid_for(static_cast<int>(state.range(0))), Field::prime(3));
    for (auto _ : state) benchmark::DoNotOptimize(check_ruth2(r));
}
BENCHMARK(BM_CheckRuth2)->DenseRange(0, 2);

void BM_BuildExtract(benchmark::State& state) {
    Rng rng(4);
    Ruth2 r = random_ruth2(rng, groupoid_for(static_cast<int>(state.range(0))), Field::rationals());
    for (auto _ : state) {
        VBGroupoid v = build_from_ruth(r);
        benchmark::DoNotOptimize(extract_components(v, choose_lift(v)));
    }
}
BENCHMARK(BM_BuildExtract)->DenseRange(0, 2);

void BM_TotalCohomology(benchmark::State& state) {
    Rng rng(5);
    Ruth2 r = random_ruth2(rng, cyclic_group(4), Field::prime(2));
    int top = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(cohomology_dims(total_complex(r, top)));
}
BENCHMARK(BM_TotalCohomology)->DenseRange(1, 3);

void BM_VBCohomology(benchmark::State& state) {
    FiniteGroupoid G = cyclic_group(2);
    VBGroupoid v = semidirect_vbg(QuasiAction::identity(G, VectorBundle::constant(G, 1, Field::prime(2))));
    int top = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(vb_cohomology(v, top));
}
BENCHMARK(BM_VBCohomology)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_NormalForm(benchmark::State& state) {
    Rng rng(6);
    FiniteGroupoid G = groupoid_for(static_cast<int>(state.range(0)));
    std::vector<std::size_t> ones(G.num_objects(), 1), twos(G.num_objects(), 2);
    Ruth2 r = random_ruth2(rng, G, Field::prime(3), {ones, twos, ones});
    for (auto _ : state) benchmark::DoNotOptimize(normal_form(r));
}
BENCHMARK(BM_NormalForm)->DenseRange(0, 2);

void BM_Dualize(benchmark::State& state) {
    Rng rng(7);
    VBGroupoid v = build_from_ruth(random_ruth2(rng, groupoid_for(static_cast<int>(state.range(0))), Field::rationals()));
    for (auto _ : state) benchmark::DoNotOptimize(dualize(v));
}
BENCHMARK(BM_Dualize)->DenseRange(0, 2);

}  // namespace

BENCHMARK_MAIN();
