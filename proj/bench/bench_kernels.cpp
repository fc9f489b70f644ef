// Serial reference path against the OpenMP path for each parallel kernel.
#include <benchmark/benchmark.h>

#include <cmath>

#include "blowup/glue/kfield.hpp"
#include "blowup/ode/profile.hpp"
#include "blowup/verify/lipschitz.hpp"
#include "blowup/verify/residual.hpp"

using namespace blowup;

namespace {

par::Exec exec_of(const benchmark::State& s) { return s.range(0) == 0 ? par::Exec::serial : par::Exec::parallel; }

const glue::ModifiedProfile& modified() {
  static const auto m = glue::splice(ode::solve_by_period(Dimension(3), 25.0, 1e-13), 3.0, 2);
  return m;
}

const verify::RadialKField& field() {
  static const auto k = verify::two_cycle_field(Dimension(5), 3.0, 41.0);
  return k;
}

void BM_argmax(benchmark::State& s) {
  const std::size_t n = 1 << 20;
  for (auto _ : s) {
    auto r = par::argmax(n, [](std::size_t i) { return std::sin(1e-3 * static_cast<double>(i)); }, exec_of(s));
    benchmark::DoNotOptimize(r);
  }
}

void BM_fit(benchmark::State& s) {
  const std::vector<double> Ts{15, 20, 25, 30, 35};
  for (auto _ : s) {
    auto f = ode::fit_neck_period_law(Dimension(3), Ts, {1e-10, 10.0, exec_of(s)});
    benchmark::DoNotOptimize(f.slope);
  }
}

void BM_compute_K(benchmark::State& s) {
  glue::KSamplingOptions o;
  o.exec = exec_of(s);
  for (auto _ : s) {
    auto k = glue::compute_K(modified(), o);
    benchmark::DoNotOptimize(k.sup_deviation());
  }
}

void BM_residual(benchmark::State& s) {
  glue::KSamplingOptions o;
  const auto k = glue::compute_K(modified(), o);
  const std::vector<double> hs{4e-3, 2e-3, 1e-3};
  for (auto _ : s) {
    auto r = verify::cylindrical_residual(modified(), k, hs, 2000, exec_of(s));
    benchmark::DoNotOptimize(r.richardson);
  }
}

void BM_pairs(benchmark::State& s) {
  verify::PairSamplingOptions o;
  o.pairs = 20000;
  o.exec = exec_of(s);
  for (auto _ : s) {
    auto r = verify::lipschitz_extension_check(field(), o);
    benchmark::DoNotOptimize(r.max_ratio);
  }
}

}  // namespace

// Argument 0 is the serial reference, 1 the OpenMP path.
BENCHMARK(BM_argmax)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_compute_K)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_residual)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pairs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
