#include <benchmark/benchmark.h>

#include "ijse/dgp.hpp"
#include "ijse/estimators.hpp"
#include "ijse/functionals.hpp"
#include "ijse/gibbs_multilevel.hpp"
#include "ijse/gibbs_regression.hpp"

namespace {

using namespace ijse;

struct MediationFixture {
  MediationData data;
  MediationDraws draws;
  FunctionalDraws g1;

  explicit MediationFixture(std::size_t n) {
    RandomStream stream(11, n, StreamPurpose::data);
    data = gen_mediation(stream, n, DgpSpec::misspecified,
                         MediationParams::misspecified_defaults());
    draws = fit_mediation_models(data, NIGPrior{}, kDefaultChain, RandomStream(11, n));
    g1 = g1_indirect(draws.mediator.beta.column(1), draws.outcome.beta.column(2));
  }
};

const MediationFixture& fixture(std::size_t n) {
  static MediationFixture f200(200), f500(500), f1000(1000);
  return n == 200 ? f200 : n == 500 ? f500 : f1000;
}

void BM_MediationFit(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto draws = fit_mediation_models(f.data, NIGPrior{}, kDefaultChain, RandomStream(3, 1));
    benchmark::DoNotOptimize(draws.outcome.sigma2.data());
  }
}
BENCHMARK(BM_MediationFit)->Arg(200)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MediationLoglik(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto L = mediation_loglik(f.data, f.draws);
    benchmark::DoNotOptimize(L.values().values().data());
  }
}
BENCHMARK(BM_MediationLoglik)->Arg(200)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_IjseFromRun(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  const LogLikMatrix L = mediation_loglik(f.data, f.draws);
  for (auto _ : state) benchmark::DoNotOptimize(ijse_from_run(L, f.g1).value);
}
BENCHMARK(BM_IjseFromRun)->Arg(200)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

// One bootstrap replicate at N = 500: resample plus two short chains.
void BM_BootstrapRefit(benchmark::State& state) {
  const auto& f = fixture(500);
  std::uint64_t attempt = 0;
  for (auto _ : state) {
    RandomStream s(5, attempt++);
    auto idx = draw_resample_indices(f.data.size(), s);
    MediationData boot;
    for (auto i : idx) {
      boot.x.push_back(f.data.x[i]);
      boot.m.push_back(f.data.m[i]);
      boot.y.push_back(f.data.y[i]);
    }
    auto draws = fit_mediation_models(boot, NIGPrior{}, kDefaultBootstrapChain, s);
    benchmark::DoNotOptimize(draws.outcome.sigma2.data());
  }
}
BENCHMARK(BM_BootstrapRefit)->Unit(benchmark::kMillisecond);

void BM_RandomInterceptFit(benchmark::State& state) {
  RandomStream data_stream(13, 1, StreamPurpose::data);
  const ClusteredData data =
      gen_multilevel(data_stream, static_cast<std::size_t>(state.range(0)), MultilevelParams{});
  for (auto _ : state) {
    RandomStream s(13, 2);
    auto draws = gibbs_random_intercept(data, MLPrior{}, kDefaultChain, s);
    benchmark::DoNotOptimize(draws.mu.data());
  }
}
BENCHMARK(BM_RandomInterceptFit)->Arg(40)->Arg(80)->Arg(120)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
