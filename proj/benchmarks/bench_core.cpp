#include <triq/triq.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace triq;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c <= r; ++c) {
            const cplx v(g(rng), r == c ? 0.0 : g(rng));
            m(r, c) = v;
            m(c, r) = std::conj(v);
        }
    return m;
}

SpinSystem relaxation_only() {
    SpinSystem s = SpinSystem::default_system();
    s.offsets_hz = {0, 0, 0};
    s.j_hz = {0, 0, 0};
    return s;
}

}  // namespace

static void BM_HermitianEigen(benchmark::State& state) {
    const ComplexMatrix m = random_hermitian(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigs(m));
}
BENCHMARK(BM_HermitianEigen)->Arg(8)->Arg(64);

static void BM_DenseLindbladRhs(benchmark::State& state) {
    const SpinSystem s = SpinSystem::default_system();
    const NoiseModel n = NoiseModel::from_spins(s);
    const DensityMatrix rho = prepare_w();
    for (auto _ : state) benchmark::DoNotOptimize(lindblad_rhs(rho, s, n));
}
BENCHMARK(BM_DenseLindbladRhs);

static void BM_GeneratorApply(benchmark::State& state) {
    const SpinSystem s = SpinSystem::default_system();
    const Generator g = Generator::from(s, NoiseModel::from_spins(s));
    const DensityMatrix rho = prepare_w();
    std::vector<cplx> out(kDim * kDim);
    for (auto _ : state) {
        g.apply(rho.matrix().data(), out.data());
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_GeneratorApply);

static void BM_EvolveMarkovianOneSecond(benchmark::State& state) {
    const SpinSystem s = relaxation_only();
    const NoiseModel n = NoiseModel::from_spins(s);
    const DensityMatrix rho = prepare_ghz();
    for (auto _ : state) benchmark::DoNotOptimize(evolve_markovian(rho, s, n, 1.0, default_dt(s), 0.01));
}
BENCHMARK(BM_EvolveMarkovianOneSecond)->Unit(benchmark::kMillisecond);

static void BM_MleGhz(benchmark::State& state) {
    const auto records = simulate_all_settings(prepare_ghz(), 0.0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(mle_fit(records));
}
BENCHMARK(BM_MleGhz)->Unit(benchmark::kMillisecond);

static void BM_CorrelatedTrajectories(benchmark::State& state) {
    const SpinSystem s = relaxation_only();
    NoiseModel n = NoiseModel::from_spins(s);
    n.bath_mode = BathMode::correlated;
    n.ou_sigma = 14.0;
    n.ou_tau_c = 0.01;
    n.trajectories = static_cast<int>(state.range(0));
    n.seed = 1;
    const DDSchedule xy = build_xy16s(0.25e-3);
    const auto pulses = expand(xy, 5);
    const double dt = default_dt(s, min_delay(xy));
    for (auto _ : state)
        benchmark::DoNotOptimize(evolve_correlated(prepare_ghz(), s, n, pulses, 5 * cycle_duration(xy), dt));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CorrelatedTrajectories)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
