#include <map>

#include <benchmark/benchmark.h>

#include "ldacert/coulomb.hpp"
#include "ldacert/field.hpp"
#include "ldacert/tiling.hpp"

namespace {

using namespace ldacert;

const ScalarField& gaussian_grid(int n) {
  static std::map<int, ScalarField> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, sample(Density{Gaussian{1.0, 1.0}}, centered_grid(8.0, n))).first;
  return it->second;
}

void BM_GridFunctionals(benchmark::State& st) {
  const auto& f = gaussian_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(grid_functionals(f, 0.5, 4.0));
}

void BM_GridFunctionalsSerial(benchmark::State& st) {
  const auto& f = gaussian_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(serial::grid_functionals(f, 0.5, 4.0));
}

void BM_Hartree(benchmark::State& st) {
  const SpectralField s = spectral(gaussian_grid(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(hartree(s));
}

void BM_HartreeSerial(benchmark::State& st) {
  const SpectralField s = spectral(gaussian_grid(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(serial::hartree(s));
}

void BM_ShiftedCoulomb(benchmark::State& st) {
  const SpectralField s = spectral(gaussian_grid(32));
  for (auto _ : st) benchmark::DoNotOptimize(shifted_coulomb_integral(s, Vec3(1.5, 0.0, 0.0)));
}

void BM_ShiftedCoulombSerial(benchmark::State& st) {
  const SpectralField s = spectral(gaussian_grid(32));
  for (auto _ : st) benchmark::DoNotOptimize(serial::shifted_coulomb_integral(s, Vec3(1.5, 0.0, 0.0)));
}

void chi_mass(const Vec3&, const SmearSample& s, double* o) { o[0] = s.value; }

void BM_SmearedCubature(benchmark::State& st) {
  const TilingConfig cfg{2.0, 0.5};
  for (auto _ : st)
    benchmark::DoNotOptimize(smeared_cubature(chi_tile(0, cfg), cfg.smear_radius(), 1, chi_mass));
}

void BM_SmearedCubatureSerial(benchmark::State& st) {
  const TilingConfig cfg{2.0, 0.5};
  for (auto _ : st)
    benchmark::DoNotOptimize(serial::smeared_cubature(chi_tile(0, cfg), cfg.smear_radius(), 1, chi_mass));
}

}  // namespace

BENCHMARK(BM_GridFunctionals)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridFunctionalsSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hartree)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HartreeSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShiftedCoulomb)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShiftedCoulombSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SmearedCubature)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SmearedCubatureSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
