#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>

#include "qlg/catmap.hpp"
#include "qlg/diagnostics.hpp"
#include "qlg/evolution.hpp"
#include "qlg/initcond.hpp"
#include "qlg/spectral.hpp"

using namespace qlg;

namespace {

SpinorField random_state(const GridSpec& g, std::uint64_t seed) {
  SpinorField f = SpinorField::zeros(g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : f.data) v = cplx(u(rng), u(rng));
  return f;
}

SimParams bench_params() {
  SimParams p;
  p.g = 1.0;
  p.a = 0.04;
  p.phase_scale = 0.1;
  return p;
}

void bm_evolve_step(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const GridSpec g{n, n, n};
  SpinorField f = random_state(g, 21);
  const SimParams p = bench_params();
  for (auto _ : state) {
    evolve_step(f, p);
    benchmark::DoNotOptimize(f.data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.sites()));
}

void bm_energies(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const GridSpec g{n, n, n};
  const SpinorField f =
      compose(g, layout_preset("twelve", g, 1, 0.04), bench_params());
  const SimParams p = bench_params();
  for (auto _ : state) {
    const EnergyBudget e = energies(f, p);
    benchmark::DoNotOptimize(e.e_tot);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.sites()));
}

void bm_helmholtz_split(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const GridSpec g{n, n, n};
  Vec3Field w = Vec3Field::zeros(g);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int c = 0; c < 3; ++c)
    for (auto& v : w.comp[c]) v = u(rng);
  for (auto _ : state) {
    auto [wi, wc] = helmholtz_split(w);
    benchmark::DoNotOptimize(wi.comp[0].data());
    benchmark::DoNotOptimize(wc.comp[0].data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.sites()));
}

void bm_shell_spectrum(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const GridSpec g{n, n, n};
  Vec3Field w = Vec3Field::zeros(g);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int c = 0; c < 3; ++c)
    for (auto& v : w.comp[c]) v = u(rng);
  const KVec3Field wk = forward_transform(w);
  for (auto _ : state) {
    const Spectrum s = shell_spectrum(wk, SpectrumKind::total_KE);
    benchmark::DoNotOptimize(s.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.sites()));
}

void bm_compose_twelve(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const GridSpec g{n, n, n};
  const SimParams p = bench_params();
  const InitLayout lay = layout_preset("twelve", g, 1, 0.04);
  for (auto _ : state) {
    const SpinorField f = compose(g, lay, p);
    benchmark::DoNotOptimize(f.data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.sites()));
}

void bm_cat_step(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  PixelImage img = test_pattern(n);
  for (auto _ : state) {
    img = cat_step(img);
    benchmark::DoNotOptimize(img.pix.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

} // namespace

BENCHMARK(bm_evolve_step)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_energies)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_helmholtz_split)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_shell_spectrum)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_compose_twelve)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_cat_step)->Arg(313)->Arg(1024)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
