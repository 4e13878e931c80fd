#include "bubbly/defect.hpp"
#include "bubbly/spectral.hpp"

#include <benchmark/benchmark.h>

using namespace bubbly;

namespace {

const Medium kMed{};
constexpr double kOmegaStar = 0.2591406425;

Geometry dilute(double eps = 0.0) {
    Geometry g;
    g.R = 0.05;
    g.eps = eps;
    return g;
}

void BM_Hankel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(hankel1_orders(15, cplx(0.2591 * 0.05)));
}
BENCHMARK(BM_Hankel);

void BM_LatticeSums(benchmark::State& state) {
    const int nmax = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lattice_sums(kOmegaStar, {2.1, 2.9}, nmax));
}
BENCHMARK(BM_LatticeSums)->Arg(4)->Arg(14)->Arg(18);

// Warm cache: the lattice sums are computed once, so this times the matrix fill alone.
void BM_AssembleAlpha(benchmark::State& state) {
    LatticeSumCache cache;
    for (auto _ : state) benchmark::DoNotOptimize(assemble_A_alpha(kOmegaStar, {2.1, 2.9}, kMed, dilute(), cache));
}
BENCHMARK(BM_AssembleAlpha);

void BM_DetA(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(det_A(kOmegaStar, {2.1, 2.9}, kMed, dilute()));
}
BENCHMARK(BM_DetA);

void BM_BandEdge(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(first_band_frequency(kAlphaStar, kMed, dilute()));
}
BENCHMARK(BM_BandEdge)->Unit(benchmark::kMillisecond);

void BM_BZAverage(benchmark::State& state) {
    BZQuadratureOptions opt;
    opt.order = static_cast<int>(state.range(0));
    const BZQuadrature rule = make_bz_quadrature(refinement_levels(kOmegaStar * 1.001, kOmegaStar, opt), opt);
    for (auto _ : state) {
        LatticeSumCache cache;  // cold cache: every node pays for its lattice sums
        benchmark::DoNotOptimize(bz_average_inverse(kOmegaStar * 1.001, kMed, dilute(), rule, 0, cache));
    }
    state.counters["nodes"] = static_cast<double>(rule.nodes.size());
}
BENCHMARK(BM_BZAverage)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_FactorS(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(factor_S(dilute()));
}
BENCHMARK(BM_FactorS)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
