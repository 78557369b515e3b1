// Serial reference paths against the OpenMP kernels. Arg(0) is serial, Arg(1) parallel.

#include "srd/examples.hpp"
#include "srd/flow.hpp"
#include "srd/hamiltonian.hpp"
#include "srd/kernel.hpp"
#include "srd/moser.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

using namespace srd;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

LandmarkState cloud(int n, int d) {
  DeterministicRng rng(17);
  LandmarkState s;
  s.q = random_landmarks(rng, n, d, -1.0, 1.0, 0.01);
  for (int i = 0; i < n; ++i) s.p.push_back(rng.uniform_point(d, -1.0, 1.0));
  return s;
}

void BM_Gram(benchmark::State& st) {
  const auto s = cloud(400, 3);
  const auto spec = KernelSpec::constrained(0.3, "heisenberg");
  for (auto _ : st) benchmark::DoNotOptimize(gram_matrix(spec, s.q, exec_of(st)));
}

void BM_PhaseField(benchmark::State& st) {
  const int n = 400, d = 2;
  const auto s = cloud(n, d);
  const auto spec = KernelSpec::full(0.3);
  const Eigen::VectorXd z = s.flatten();
  Eigen::VectorXd out(z.size());
  for (auto _ : st) {
    phase_field(spec, n, d, z.data(), out.data(), exec_of(st));
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_Advect(benchmark::State& st) {
  const auto s = cloud(20, 2);
  const auto spec = KernelSpec::full(0.3);
  DeterministicRng rng(18);
  Points seeds;
  for (int k = 0; k < 400; ++k) seeds.push_back(rng.uniform_point(2, -1.0, 1.0));
  AdvectOptions opts;
  opts.exec = exec_of(st);
  opts.record_stride = 100;
  for (auto _ : st) benchmark::DoNotOptimize(advect(spec, s, seeds, 0.1, 100, opts));
}

void BM_SubLaplacian(benchmark::State& st) {
  const auto f = make_frame("torus_sine");
  const GridField dens = GridField::scalar(256, 2, [](const Point& x) { return 1.0 + 0.2 * std::cos(2 * std::numbers::pi * x[1]); });
  const GridField F = GridField::scalar(256, 2, [](const Point& x) { return std::sin(2 * std::numbers::pi * x[0]) * x[1]; });
  for (auto _ : st) benchmark::DoNotOptimize(sub_laplacian_apply(f, dens, F, exec_of(st)));
}

}  // namespace

BENCHMARK(BM_Gram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhaseField)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Advect)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SubLaplacian)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
