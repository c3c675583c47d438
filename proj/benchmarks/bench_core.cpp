#include <benchmark/benchmark.h>

#include "sqg/besov.hpp"
#include "sqg/ensemble.hpp"
#include "sqg/inequalities.hpp"
#include "sqg/solver.hpp"

namespace {

sqg::GridSpec grid(benchmark::State& state) { return {static_cast<int>(state.range(0)), 6.283185307179586}; }

sqg::RealField field(const sqg::GridSpec& g) {
  sqg::EnsembleSpec spec;
  spec.j_lo = 0;
  spec.j_hi = 3;
  spec.shape = sqg::SpectrumShape::Decaying;
  return sqg::ensemble_member(spec, g, 0);
}

void BM_ForwardInverse(benchmark::State& state) {
  const auto g = grid(state);
  const sqg::RealField f = field(g);
  for (auto _ : state) benchmark::DoNotOptimize(sqg::inverse_transform(sqg::forward_transform(f)));
}
BENCHMARK(BM_ForwardInverse)->Arg(64)->Arg(128)->Arg(256);

void BM_Decompose(benchmark::State& state) {
  const auto g = grid(state);
  const sqg::DyadicFamily fam(g);
  const sqg::SpectralField f = sqg::forward_transform(field(g));
  for (auto _ : state) benchmark::DoNotOptimize(sqg::decompose(f, fam));
}
BENCHMARK(BM_Decompose)->Arg(64)->Arg(128)->Arg(256);

void BM_BesovNorm(benchmark::State& state) {
  const auto g = grid(state);
  const sqg::DyadicFamily fam(g);
  const sqg::SpectralField f = sqg::forward_transform(field(g));
  for (auto _ : state) benchmark::DoNotOptimize(sqg::besov_norm(f, {1.0, 3.0, 2.0, true}, fam));
}
BENCHMARK(BM_BesovNorm)->Arg(128)->Arg(256);

void BM_BernsteinProbe(benchmark::State& state) {
  const auto g = grid(state);
  const sqg::DyadicFamily fam(g);
  const sqg::RealField f = field(g);
  for (auto _ : state) {
    sqg::BernsteinProbe probe(f, 2, fam);
    for (double a : {0.1, 0.5, 1.0}) benchmark::DoNotOptimize(probe.bernstein(4.0, a));
  }
}
BENCHMARK(BM_BernsteinProbe)->Arg(128)->Arg(256);

void BM_NonlinearTerm(benchmark::State& state) {
  sqg::SolverConfig cfg;
  cfg.grid = grid(state);
  const sqg::QgSolver solver(cfg);
  const sqg::SpectralField theta = sqg::forward_transform(field(cfg.grid));
  for (auto _ : state) benchmark::DoNotOptimize(solver.nonlinear_term(theta));
}
BENCHMARK(BM_NonlinearTerm)->Arg(64)->Arg(128)->Arg(256);

void BM_Ifrk4Step(benchmark::State& state) {
  sqg::SolverConfig cfg;
  cfg.grid = grid(state);
  const sqg::QgSolver solver(cfg);
  const sqg::State s{sqg::truncate(sqg::forward_transform(field(cfg.grid)), cfg.dealias), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(solver.step(s));
}
BENCHMARK(BM_Ifrk4Step)->Arg(64)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
