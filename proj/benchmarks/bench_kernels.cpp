#include <benchmark/benchmark.h>

#include "quasiboot/analysis.hpp"
#include "quasiboot/bootstrap.hpp"
#include "quasiboot/distributions.hpp"
#include "quasiboot/rng.hpp"
#include "quasiboot/weights.hpp"

namespace {

using namespace quasiboot;

void BM_ReplicateNorms(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int p = static_cast<int>(state.range(1));
    RngStream rng = RngStream::derive(42, 0, 0);
    const Sample s = Sample::draw(DistributionSpec::chisq1c(), n, p, rng);
    const WeightScheme scheme = WeightScheme::bernoulli_mix(0.276);
    ReplicateScratch scratch;
    for (auto _ : state) {
        replicate_norms(s, scheme, 100, rng, scratch);
        benchmark::DoNotOptimize(scratch.norms.data());
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_ReplicateNorms)->Args({50, 5})->Args({400, 40});

void BM_DrawWeights(benchmark::State& state, const char* scheme_text) {
    const WeightScheme scheme = WeightScheme::parse(scheme_text);
    RngStream rng = RngStream::derive(42, 1, 0);
    std::vector<double> eps(1000);
    for (auto _ : state) {
        draw_weights(scheme, eps, rng);
        benchmark::DoNotOptimize(eps.data());
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK_CAPTURE(BM_DrawWeights, expmix, "expmix");
BENCHMARK_CAPTURE(BM_DrawWeights, chisqmix, "chisqmix");
BENCHMARK_CAPTURE(BM_DrawWeights, bernmix, "bernmix(b=0.276)");
BENCHMARK_CAPTURE(BM_DrawWeights, gauss, "gauss");

void BM_SampleLognormal(benchmark::State& state) {
    const DistributionSpec spec = DistributionSpec::lognormal(1.0);
    RngStream rng = RngStream::derive(42, 2, 0);
    std::vector<double> buf(1000);
    for (auto _ : state) {
        sample_vector(spec, buf, rng);
        benchmark::DoNotOptimize(buf.data());
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SampleLognormal);

void BM_UpperQuantile(benchmark::State& state) {
    RngStream rng = RngStream::derive(42, 3, 0);
    std::vector<double> values(1000);
    for (double& v : values) v = rng.next_normal();
    for (auto _ : state) {
        const QuantileEstimate q = empirical_upper_quantile(values, 0.05);
        benchmark::DoNotOptimize(q.value);
    }
}
BENCHMARK(BM_UpperQuantile);

void BM_ChiSquaredCdf(benchmark::State& state) {
    double x = 0.0;
    for (auto _ : state) {
        x += 0.01;
        if (x > 20.0) x = 0.01;
        benchmark::DoNotOptimize(chi_squared_cdf(7, x));
    }
}
BENCHMARK(BM_ChiSquaredCdf);

}  // namespace

BENCHMARK_MAIN();
