// Serial vs OpenMP timings for the parallel kernels. Each benchmark takes the
// execution mode as its first argument: 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <cmath>

#include "convexlab/convexity.hpp"
#include "convexlab/galerkin.hpp"
#include "convexlab/solvers.hpp"

using namespace convexlab;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "parallel" : "serial"); }

void BM_ball_convexity_probe(benchmark::State& state) {
  const NormSpec spec = NormSpec::sum({NormSpec::lp(1.0), NormSpec::lp(2.0)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(ball_convexity_probe(spec, 4, static_cast<std::uint64_t>(state.range(1)), 0, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(BM_ball_convexity_probe)->ArgsProduct({{0, 1}, {10000, 100000}})->Unit(benchmark::kMillisecond);

void BM_midpoint_sup(benchmark::State& state) {
  const NormSpec spec = NormSpec::lp(3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(midpoint_sup(spec, 3, 1.0, static_cast<std::uint64_t>(state.range(1)), 0, mode(state)));
  }
  label(state);
}
BENCHMARK(BM_midpoint_sup)->ArgsProduct({{0, 1}, {4000, 20000}})->Unit(benchmark::kMillisecond);

void BM_strict_convexity_probe(benchmark::State& state) {
  const NormSpec spec = NormSpec::lp(2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(strict_convexity_probe(spec, 3, static_cast<std::uint64_t>(state.range(1)), 0, mode(state)));
  }
  label(state);
}
BENCHMARK(BM_strict_convexity_probe)->ArgsProduct({{0, 1}, {10000, 100000}})->Unit(benchmark::kMillisecond);

void BM_galerkin_assemble(benchmark::State& state) {
  const double pi = std::acos(-1.0);
  const galerkin::Problem p{galerkin::Mesh(static_cast<std::size_t>(state.range(1))),
                            [pi](double x) { return (1.0 + pi * pi) * std::sin(pi * x); }, 5};
  for (auto _ : state) benchmark::DoNotOptimize(galerkin::assemble(p, mode(state)));
  label(state);
}
BENCHMARK(BM_galerkin_assemble)->ArgsProduct({{0, 1}, {1 << 12, 1 << 16}})->Unit(benchmark::kMicrosecond);

void BM_explore_optimal_face(benchmark::State& state) {
  const NormSpec spec = NormSpec::lp(kInf);
  const auto n = static_cast<Eigen::Index>(state.range(1));
  NormProblem prob;
  prob.spec = &spec;
  prob.map = Matrix::Identity(n, n);
  prob.shift = Vector::Zero(n);
  prob.eq_matrix = Matrix::Zero(1, n);
  prob.eq_matrix(0, 0) = 1.0;
  prob.eq_rhs = make_vector({1.0});
  const auto base = minimize_norm(prob, 1e-10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        explore_optimal_face(prob, base, 2 * static_cast<std::size_t>(n), 1e-8, 0, mode(state), FaceMode::push));
  }
  label(state);
}
BENCHMARK(BM_explore_optimal_face)->ArgsProduct({{0, 1}, {4, 8}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
