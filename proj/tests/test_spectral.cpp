#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "qlg/errors.hpp"
#include "qlg/spectral.hpp"
#include "support/oracle.hpp"
#include "support/random_fields.hpp"

using namespace qlg;
using testing_support::random_scalar;
using testing_support::random_vec3;

namespace {
constexpr double kTau = 6.28318530717958647692;

double vec_norm2(const Vec3Field& v) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    for (double x : v.comp[c]) s += x * x;
  return s;
}
} // namespace

TEST_SUITE("spectral") {

TEST_CASE("mode frequencies follow the signed convention") {
  CHECK(KGrid::freq(0, 8) == 0);
  CHECK(KGrid::freq(3, 8) == 3);
  CHECK(KGrid::freq(4, 8) == -4);
  CHECK(KGrid::freq(7, 8) == -1);
  CHECK(KGrid::freq(3, 7) == 3);
  CHECK(KGrid::freq(4, 7) == -3);
}

TEST_CASE("shell index is the rounded mode magnitude") {
  KGrid kg{{8, 8, 8}};
  CHECK(kg.shell(0, 0, 0) == 0);
  CHECK(kg.shell(1, 0, 0) == 1);
  CHECK(kg.shell(1, 1, 0) == 1);  // |k| = 1.414 rounds to 1
  CHECK(kg.shell(1, 1, 1) == 2);  // |k| = 1.732 rounds to 2
  CHECK(kg.shell(4, 4, 4) == 7);  // |-4,-4,-4| = 6.93
  CHECK(kg.max_shell() == 7);
}

TEST_CASE("forward transform matches a naive DFT") {
  for (const GridSpec g : {GridSpec{8, 8, 8}, GridSpec{5, 6, 7}}) {
    ScalarField s = random_scalar(g, 41);
    const KField fast = forward_transform(s);
    const KField slow = oracle::slow_dft(s);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < fast.data.size(); ++i) {
      err = std::max(err, std::abs(fast.data[i] - slow.data[i]));
      scale = std::max(scale, std::abs(slow.data[i]));
    }
    CHECK(err < 1e-12 * scale);
  }
}

TEST_CASE("transform round trip is the identity") {
  GridSpec g{6, 8, 10};
  ScalarField s = random_scalar(g, 42);
  const ScalarField back = inverse_transform(forward_transform(s));
  double err = 0.0;
  for (std::size_t i = 0; i < s.data.size(); ++i)
    err = std::max(err, std::abs(back.data[i] - s.data[i]));
  CHECK(err < 1e-13);
}

TEST_CASE("a single plane wave lands in one shell with the norm-preserving weight") {
  GridSpec g{8, 8, 8};
  RealField f = RealField::zeros(g);
  const double amp = 0.75;
  for (std::size_t x = 0; x < g.nx; ++x)
    for (std::size_t y = 0; y < g.ny; ++y)
      for (std::size_t z = 0; z < g.nz; ++z)
        f.data[g.idx(x, y, z)] = amp * std::cos(kTau * 2.0 * double(x) / double(g.nx));
  const Spectrum s = shell_spectrum(forward_transform(f), SpectrumKind::total_KE);
  // cos splits into modes +-2, both in shell 2; total energy = V amp^2 / 2
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    if (k == 2)
      CHECK(s.values[k] == doctest::Approx(double(g.sites()) * amp * amp / 2.0).epsilon(1e-12));
    else
      CHECK(s.values[k] < 1e-9);
  }
}

TEST_CASE("shell sums reproduce the field norm") {
  GridSpec g{8, 8, 8};
  Vec3Field w = random_vec3(g, 43);
  const Spectrum s = shell_spectrum(forward_transform(w), SpectrumKind::total_KE);
  double total = 0.0;
  for (double v : s.values) total += v;
  CHECK(total == doctest::Approx(vec_norm2(w)).epsilon(1e-12));
}

TEST_CASE("projection parts are complementary, orthogonal, and idempotent") {
  // 9^3 has no half-sampling plane, 8^3 exercises the unpaired-mode rule
  for (const GridSpec g : {GridSpec{8, 8, 8}, GridSpec{9, 9, 9}}) {
    Vec3Field w = random_vec3(g, 44);
    auto [wi, wc] = helmholtz_split(w);
    double sum_err = 0.0;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < w.comp[c].size(); ++i)
        sum_err = std::max(sum_err,
                           std::abs(wi.comp[c][i] + wc.comp[c][i] - w.comp[c][i]));
    CHECK(sum_err < 1e-12);

    const double nw = vec_norm2(w), ni = vec_norm2(wi), nc = vec_norm2(wc);
    CHECK(std::abs(nw - ni - nc) / nw < 1e-13);
    CHECK(ni > 0.0);
    CHECK(nc > 0.0);

    auto [wi2, wc2] = helmholtz_split(wi);
    double idem = 0.0;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < wi.comp[c].size(); ++i)
        idem = std::max(idem, std::abs(wi2.comp[c][i] - wi.comp[c][i]));
    CHECK(idem < 1e-12);
    CHECK(std::sqrt(vec_norm2(wc2) / ni) < 1e-13);
  }
}

TEST_CASE("paired modes of the solenoidal part are divergence free") {
  GridSpec g{8, 8, 8};
  Vec3Field w = random_vec3(g, 45);
  auto [wi, wc] = helmholtz_split(w);
  const KVec3Field ki = forward_transform(wi);
  const KGrid kg{g};
  double max_div = 0.0, scale = 0.0;
  for (std::size_t x = 0; x < g.nx; ++x)
    for (std::size_t y = 0; y < g.ny; ++y)
      for (std::size_t z = 0; z < g.nz; ++z) {
        if (x == 4 || y == 4 || z == 4) continue; // unpaired planes stay whole
        const std::size_t i = g.idx(x, y, z);
        const cplx d = double(kg.kx(x)) * ki.comp[0][i] + double(kg.ky(y)) * ki.comp[1][i] +
                       double(kg.kz(z)) * ki.comp[2][i];
        max_div = std::max(max_div, std::abs(d));
        scale = std::max(scale, std::abs(ki.comp[0][i]));
      }
  CHECK(max_div < 1e-9 * std::max(scale, 1.0));
}

TEST_CASE("a gradient field is classified as fully compressible") {
  GridSpec g{8, 8, 8};
  // w = grad sin(k . x) with k = (1, 2, 0): longitudinal by construction
  Vec3Field w = Vec3Field::zeros(g);
  const double k1 = kTau / 8.0, k2 = 2.0 * kTau / 8.0;
  for (std::size_t x = 0; x < g.nx; ++x)
    for (std::size_t y = 0; y < g.ny; ++y)
      for (std::size_t z = 0; z < g.nz; ++z) {
        const double c = std::cos(k1 * double(x) + k2 * double(y));
        w.comp[0][g.idx(x, y, z)] = 1.0 * c;
        w.comp[1][g.idx(x, y, z)] = 2.0 * c;
      }
  auto [wi, wc] = helmholtz_split(w);
  CHECK(vec_norm2(wi) < 1e-18 * vec_norm2(w));
  CHECK(vec_norm2(wc) == doctest::Approx(vec_norm2(w)).epsilon(1e-12));
}

TEST_CASE("a transverse wave is classified as fully incompressible") {
  GridSpec g{8, 8, 8};
  // w points along z but varies along x: perpendicular to its wavevector
  Vec3Field w = Vec3Field::zeros(g);
  for (std::size_t x = 0; x < g.nx; ++x)
    for (std::size_t y = 0; y < g.ny; ++y)
      for (std::size_t z = 0; z < g.nz; ++z)
        w.comp[2][g.idx(x, y, z)] = std::sin(kTau * double(x) / 8.0);
  auto [wi, wc] = helmholtz_split(w);
  CHECK(vec_norm2(wc) < 1e-18 * vec_norm2(w));
  CHECK(vec_norm2(wi) == doctest::Approx(vec_norm2(w)).epsilon(1e-12));
}

TEST_CASE("shell spectra of the parts add up to the whole") {
  GridSpec g{8, 8, 8};
  Vec3Field w = random_vec3(g, 46);
  auto [wi, wc] = helmholtz_split(w);
  const Spectrum sw = shell_spectrum(forward_transform(w), SpectrumKind::total_KE);
  const Spectrum si = shell_spectrum(forward_transform(wi), SpectrumKind::incompressible_KE);
  const Spectrum sc = shell_spectrum(forward_transform(wc), SpectrumKind::compressible_KE);
  for (std::size_t k = 0; k < sw.values.size(); ++k)
    CHECK(std::abs(sw.values[k] - si.values[k] - sc.values[k]) <=
          1e-9 * std::max(sw.values[k], 1e-300));
}

TEST_CASE("exponent fit recovers an exact power law") {
  Spectrum s;
  s.values.assign(33, 0.0);
  for (std::size_t k = 1; k < s.values.size(); ++k)
    s.values[k] = 7.3 * std::pow(double(k), -2.5);
  const SpectralFit fit = fit_exponent(s, 4, 16);
  CHECK(fit.alpha == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.std_error < 1e-12);
  CHECK(fit.n_points == 13);
  CHECK(fit.k_lo == 4);
  CHECK(fit.k_hi == 16);
}

TEST_CASE("exponent is invariant under uniform scaling of the spectrum") {
  Spectrum s;
  s.values.assign(25, 0.0);
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (std::size_t k = 1; k < s.values.size(); ++k)
    s.values[k] = u(rng) * std::pow(double(k), -3.0);
  const SpectralFit base = fit_exponent(s, 2, 20);
  for (double& v : s.values) v *= 1234.5;
  const SpectralFit scaled = fit_exponent(s, 2, 20);
  CHECK(scaled.alpha == doctest::Approx(base.alpha).epsilon(1e-12));
}

TEST_CASE("fit rejects malformed windows and empty data") {
  Spectrum s;
  s.values.assign(10, 1.0);
  CHECK_THROWS_AS(fit_exponent(s, 0, 5), ConfigError);
  CHECK_THROWS_AS(fit_exponent(s, 5, 5), ConfigError);
  CHECK_THROWS_AS(fit_exponent(s, 6, 4), ConfigError);
  Spectrum empty;
  empty.values.assign(10, 0.0);
  empty.values[2] = 1.0;
  empty.values[3] = 1.0;
  CHECK_THROWS_AS(fit_exponent(empty, 2, 8), NumericError); // only 2 usable shells
}

TEST_CASE("time averaging combines per-snapshot exponents") {
  auto make = [](double alpha) {
    Spectrum s;
    s.kind = SpectrumKind::incompressible_KE;
    s.values.assign(24, 0.0);
    for (std::size_t k = 1; k < s.values.size(); ++k)
      s.values[k] = std::pow(double(k), -alpha);
    return s;
  };
  const std::vector<std::vector<Spectrum>> snaps{{make(2.0)}, {make(4.0)}};
  const std::vector<FitRow> rows = time_averaged_exponents(snaps, {{4, 16}});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].kind == SpectrumKind::incompressible_KE);
  CHECK(rows[0].alpha_mean == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(rows[0].alpha_std == doctest::Approx(1.0).epsilon(1e-12)); // population std
  CHECK(rows[0].n_snapshots == 2);
}

TEST_CASE("identical snapshots have zero exponent spread") {
  Spectrum s;
  s.kind = SpectrumKind::quantum;
  s.values.assign(24, 0.0);
  for (std::size_t k = 1; k < s.values.size(); ++k)
    s.values[k] = 2.0 * std::pow(double(k), -3.1);
  const std::vector<std::vector<Spectrum>> snaps(5, std::vector<Spectrum>{s});
  const std::vector<FitRow> rows = time_averaged_exponents(snaps, {{3, 15}});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].alpha_std < 1e-13);
  CHECK(rows[0].n_snapshots == 5);
}

TEST_CASE("a window that fails everywhere yields an empty row, not an abort") {
  Spectrum s;
  s.kind = SpectrumKind::total_KE;
  s.values.assign(6, 0.0);
  s.values[1] = 1.0; // everything beyond shell 1 empty
  const std::vector<std::vector<Spectrum>> snaps{{s}, {s}};
  const std::vector<FitRow> rows = time_averaged_exponents(snaps, {{2, 5}});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n_snapshots == 0);
  CHECK(std::isnan(rows[0].alpha_mean));
}

TEST_CASE("windows are reported per kind in a stable order") {
  auto make = [](SpectrumKind kind) {
    Spectrum s;
    s.kind = kind;
    s.values.assign(24, 0.0);
    for (std::size_t k = 1; k < s.values.size(); ++k)
      s.values[k] = std::pow(double(k), -2.0);
    return s;
  };
  const std::vector<std::vector<Spectrum>> snaps{
      {make(SpectrumKind::incompressible_KE), make(SpectrumKind::compressible_KE)},
      {make(SpectrumKind::incompressible_KE), make(SpectrumKind::compressible_KE)}};
  const std::vector<FitRow> rows = time_averaged_exponents(snaps, {{2, 10}, {11, 20}});
  REQUIRE(rows.size() == 4);
  // window-major: both kinds for the first window, then both for the second
  CHECK(rows[0].k_lo == 2);
  CHECK(rows[0].kind == SpectrumKind::incompressible_KE);
  CHECK(rows[1].k_lo == 2);
  CHECK(rows[1].kind == SpectrumKind::compressible_KE);
  CHECK(rows[2].k_lo == 11);
  CHECK(rows[3].k_lo == 11);
  CHECK_THROWS_AS(time_averaged_exponents({snaps[0]}, {{2, 10}}), ConfigError);
}

} // TEST_SUITE
