// Microbenchmarks for the numerical hot paths: special functions, density
// and sampling kernels, information matrices, quadrature, fitting and the
// kernel density estimate behind the violin reports.

#include <benchmark/benchmark.h>

#include <vector>

#include "evtortho/distributions.hpp"
#include "evtortho/fisher.hpp"
#include "evtortho/mle.hpp"
#include "evtortho/oracle.hpp"
#include "evtortho/report.hpp"
#include "evtortho/reparam.hpp"
#include "evtortho/rng.hpp"
#include "evtortho/specfun.hpp"

namespace {

void BM_gamma(benchmark::State& state) {
  double z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::gamma_fn(z));
    z = z < 40.0 ? z + 0.37 : 0.1;
  }
}
BENCHMARK(BM_gamma);

void BM_digamma(benchmark::State& state) {
  double z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::digamma(z));
    z = z < 40.0 ? z + 0.37 : 0.1;
  }
}
BENCHMARK(BM_digamma);

void BM_trigamma(benchmark::State& state) {
  double z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::trigamma(z));
    z = z < 40.0 ? z + 0.37 : 0.1;
  }
}
BENCHMARK(BM_trigamma);

void BM_log_density_gev3(benchmark::State& state) {
  const auto p = evt::ClassicalParams::gev3(0.0, 1.0, 0.2);
  double x = -4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::log_density(p, x));
    x = x < 20.0 ? x + 0.11 : -4.0;
  }
}
BENCHMARK(BM_log_density_gev3);

void BM_sample_gev2(benchmark::State& state) {
  const auto p = evt::ClassicalParams::gev2(1.0, 0.2);
  evt::Rng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::sample(p, 1000, rng));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_sample_gev2);

void BM_fisher_gev3(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::fisher_gev3(0.0, 1.0, 0.2));
  }
}
BENCHMARK(BM_fisher_gev3);

void BM_ortho_fisher_gev2_scale(benchmark::State& state) {
  const auto op =
      evt::from_classical(evt::Chart::gev2_scale,
                          evt::ClassicalParams::gev2(1.0, 0.2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::ortho_fisher(op));
  }
}
BENCHMARK(BM_ortho_fisher_gev2_scale);

void BM_score_fd_gev3(benchmark::State& state) {
  const auto p = evt::ClassicalParams::gev3(0.0, 1.0, 0.2);
  double x = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::score(p, x));
    x = x < 10.0 ? x + 0.07 : -2.0;
  }
}
BENCHMARK(BM_score_fd_gev3);

void BM_fisher_quad_gev2(benchmark::State& state) {
  const auto p = evt::ClassicalParams::gev2(1.0, 0.2);
  evt::OracleConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::fisher_quad(p, cfg));
  }
}
BENCHMARK(BM_fisher_quad_gev2);

void BM_fit_classical_gev2(benchmark::State& state) {
  const auto truth = evt::ClassicalParams::gev2(1.0, 0.2);
  evt::Rng rng(99);
  const auto data = evt::sample(truth, 100, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::fit_classical(evt::Family::gev2, data));
  }
}
BENCHMARK(BM_fit_classical_gev2);

void BM_kde(benchmark::State& state) {
  evt::Rng rng(5);
  std::vector<double> values;
  for (int i = 0; i < 1000; ++i) values.push_back(rng.uniform01() - 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::kde(values));
  }
}
BENCHMARK(BM_kde);

}  // namespace

BENCHMARK_MAIN();
