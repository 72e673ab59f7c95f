// Microbenchmarks for the hot paths: population generation, model-suite
// fitting, influence (psi) assembly, a full Monte Carlo replicate, and the
// pseudo-population bootstrap.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "mrsurvey/bootstrap.hpp"
#include "mrsurvey/cond_bias.hpp"
#include "mrsurvey/estimator.hpp"
#include "mrsurvey/harness.hpp"
#include "mrsurvey/models.hpp"
#include "mrsurvey/mr_impute.hpp"
#include "mrsurvey/rng.hpp"
#include "mrsurvey/simgen.hpp"

namespace {

using namespace mrsurvey;

const std::map<std::string, int>& columns() {
  static const std::map<std::string, int> c{{"v1", 0}, {"v2", 1}};
  return c;
}

SuiteSpec doubly_robust_suite() {
  SuiteSpec s;
  s.imputation.push_back(parse_terms({"1", "v1", "v1^2"}, columns()));
  s.nonresponse.push_back(parse_terms({"1", "v1", "v1^2"}, columns()));
  return s;
}

PopulationSpec gamma_population(int N) {
  PopulationSpec ps;
  ps.N = N;
  ps.family = Family::Gamma;
  ps.beta0 = 1.0;
  ps.beta1 = 0.2;
  ps.beta2 = 0.2;
  ps.seed = 7;
  return ps;
}

SampleData fixed_sample(int n) {
  const FinitePopulation pop = gen_population(gamma_population(5000));
  std::mt19937_64 gs = substream(7, {1u});
  const Sample sample = draw_srswor(pop, n, gs);
  std::vector<double> v1(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    v1[static_cast<std::size_t>(i)] =
        pop.units[static_cast<std::size_t>(sample.members[static_cast<std::size_t>(i)])].v[0];
  std::mt19937_64 gr = substream(7, {2u});
  const std::vector<std::uint8_t> r = gen_response(v1, ResponseMechanism{}, gr);
  return make_sample_data(pop, sample, r);
}

void BM_GenPopulation(benchmark::State& state) {
  const PopulationSpec ps = gamma_population(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gen_population(ps));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenPopulation)->Arg(5000)->Arg(50000);

void BM_FitSuite(benchmark::State& state) {
  const SampleData data = fixed_sample(static_cast<int>(state.range(0)));
  const SuiteSpec spec = doubly_robust_suite();
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_model_suite(data.v, data.y, data.r, data.w, spec));
}
BENCHMARK(BM_FitSuite)->Arg(50)->Arg(100)->Arg(500);

void BM_LinearizedPsi(benchmark::State& state) {
  const SampleData data = fixed_sample(static_cast<int>(state.range(0)));
  const SuiteSpec spec = doubly_robust_suite();
  const FittedModelSuite suite = fit_model_suite(data.v, data.y, data.r, data.w, spec);
  const ImputationResult imp = mr_estimate(suite, data.y, data.r, data.w);
  for (auto _ : state)
    benchmark::DoNotOptimize(linearized_psi(data.y, data.r, data.w, suite, imp));
}
BENCHMARK(BM_LinearizedPsi)->Arg(50)->Arg(100)->Arg(500);

void BM_CondBiasRange(benchmark::State& state) {
  const SampleData data = fixed_sample(static_cast<int>(state.range(0)));
  const SuiteSpec spec = doubly_robust_suite();
  const FittedModelSuite suite = fit_model_suite(data.v, data.y, data.r, data.w, spec);
  const ImputationResult imp = mr_estimate(suite, data.y, data.r, data.w);
  const LinearizedPsi lp = linearized_psi(data.y, data.r, data.w, suite, imp);
  for (auto _ : state)
    benchmark::DoNotOptimize(est_cond_bias_mr(data.sample, lp.psi));
}
BENCHMARK(BM_CondBiasRange)->Arg(50)->Arg(100)->Arg(500);

// One full scenario replicate: generate population, draw sample, draw
// response, fit, impute, linearize, adjust.
void BM_Replicate(benchmark::State& state) {
  ScenarioConfig c;
  c.population = gamma_population(5000);
  c.n = static_cast<int>(state.range(0));
  c.replicates = 1;
  c.seed = 7;
  c.suite = doubly_robust_suite();
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(c));
}
BENCHMARK(BM_Replicate)->Arg(50)->Arg(100);

void BM_BootstrapBias(benchmark::State& state) {
  const SampleData data = fixed_sample(50);
  const SuiteSpec spec = doubly_robust_suite();
  BootstrapConfig bc;
  bc.replicates = static_cast<int>(state.range(0));
  bc.seed = 7;
  for (auto _ : state)
    benchmark::DoNotOptimize(bootstrap_cond_bias(data, spec, bc));
}
BENCHMARK(BM_BootstrapBias)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
