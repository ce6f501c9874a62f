#include <random>

#include <benchmark/benchmark.h>

#include <besovlab/approx.hpp>
#include <besovlab/generators.hpp>
#include <besovlab/norms.hpp>
#include <besovlab/parabolic.hpp>
#include <besovlab/wavelet.hpp>

using namespace besovlab;

static SampledField noise(int level) {
    SampledField f(2, level, {});
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double& v : f.values()) v = n(rng);
    return f;
}

static void BM_DwtForward(benchmark::State& state) {
    const SampledField f = noise(static_cast<int>(state.range(0)));
    const WaveletSystem sys(4);
    for (auto _ : state) benchmark::DoNotOptimize(dwt_forward(f, sys));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.size()));
}
BENCHMARK(BM_DwtForward)->DenseRange(7, 10)->Unit(benchmark::kMillisecond);

static void BM_DwtRoundTrip(benchmark::State& state) {
    const SampledField f = noise(static_cast<int>(state.range(0)));
    const WaveletSystem sys(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(dwt_inverse(dwt_forward(f, sys), sys));
}
BENCHMARK(BM_DwtRoundTrip)->ArgsProduct({{8, 9}, {2, 4, 8}})->Unit(benchmark::kMillisecond);

static void BM_SigmaNCurve(benchmark::State& state) {
    const CoeffTree t = dwt_forward(singular_field(DomainGeometry::l_shape(), static_cast<int>(state.range(0))),
                                    WaveletSystem(4));
    std::vector<std::size_t> Ns;
    for (std::size_t N = 1; N <= t.slot_count(); N *= 2) Ns.push_back(N);
    for (auto _ : state) benchmark::DoNotOptimize(sigma_n_curve(t, Ns));
}
BENCHMARK(BM_SigmaNCurve)->DenseRange(8, 10)->Unit(benchmark::kMillisecond);

static void BM_CrankNicolson(benchmark::State& state) {
    SolverConfig cfg;
    cfg.level = static_cast<int>(state.range(0));
    cfg.dt = 1.0 / 256.0;
    cfg.T = 8.0 / 256.0;
    cfg.store_stride = 1000;
    cfg.forcing = [](double, double, double t) { return t; };
    for (auto _ : state) benchmark::DoNotOptimize(linear_solve(cfg));
    state.counters["steps"] = 8;
}
BENCHMARK(BM_CrankNicolson)->DenseRange(6, 8)->Unit(benchmark::kMillisecond);

static void BM_KondratievNorm(benchmark::State& state) {
    const auto w = DomainGeometry::wedge(1.5 * 3.14159265358979323846);
    const SampledField f = singular_field(w, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kondratiev_norm(f, w, {2, 2.0, 1.3}));
}
BENCHMARK(BM_KondratievNorm)->DenseRange(7, 9)->Unit(benchmark::kMillisecond);

static void BM_BesovNormWavelet(benchmark::State& state) {
    const CoeffTree t = dwt_forward(noise(9), WaveletSystem(4));
    for (auto _ : state) benchmark::DoNotOptimize(besov_norm_wavelet(t, {1.5, 2.0, 2.0, 2}));
}
BENCHMARK(BM_BesovNormWavelet)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
