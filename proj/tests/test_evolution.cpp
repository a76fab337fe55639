#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "qlg/evolution.hpp"
#include "qlg/field.hpp"
#include "support/oracle.hpp"
#include "support/random_fields.hpp"

using namespace qlg;
using testing_support::random_spinor;

namespace {
double max_dev(const SpinorField& a, const SpinorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}
} // namespace

TEST_SUITE("evolution") {

TEST_CASE("collision squared swaps the components") {
  GridSpec g{4, 4, 4};
  SpinorField f = random_spinor(g, 101);
  const SpinorField f0 = f;
  collide(f);
  collide(f);
  double err = 0.0;
  for (std::size_t s = 0; s < g.sites(); ++s) {
    err = std::max(err, std::abs(f.up(s) - f0.dn(s)));
    err = std::max(err, std::abs(f.dn(s) - f0.up(s)));
  }
  CHECK(err < 1e-15);
}

TEST_CASE("collision to the fourth power is the identity") {
  GridSpec g{4, 4, 4};
  SpinorField f = random_spinor(g, 102);
  const SpinorField f0 = f;
  for (int i = 0; i < 4; ++i) collide(f);
  CHECK(max_dev(f, f0) < 1e-15);
}

TEST_CASE("collision preserves the norm exactly enough") {
  GridSpec g{4, 4, 4};
  SpinorField f = random_spinor(g, 103);
  const double n0 = norm2(f);
  collide(f);
  CHECK(norm2(f) == doctest::Approx(n0).epsilon(1e-14));
}

TEST_CASE("stream moves one component by one site with periodic wrap") {
  GridSpec g{4, 5, 6};
  for (int axis = 0; axis < 3; ++axis)
    for (int comp = 0; comp < 2; ++comp) {
      SpinorField f = SpinorField::zeros(g);
      const std::size_t marker = g.idx(1, 2, 3);
      f.data[2 * marker + comp] = cplx{1.0, -2.0};
      f.data[2 * marker + (1 - comp)] = cplx{5.0, 0.0};
      stream(f, axis, +1, comp);
      std::size_t c[3] = {1, 2, 3};
      c[axis] = (c[axis] + 1) % g.extent(axis);
      const std::size_t moved = g.idx(c[0], c[1], c[2]);
      CHECK(f.data[2 * moved + comp] == cplx{1.0, -2.0});
      CHECK(f.data[2 * marker + comp] == cplx{0.0, 0.0});
      // the other component never moves
      CHECK(f.data[2 * marker + (1 - comp)] == cplx{5.0, 0.0});
      stream(f, axis, -1, comp);
      CHECK(f.data[2 * marker + comp] == cplx{1.0, -2.0});
    }
}

TEST_CASE("stream wraps around the boundary") {
  GridSpec g{4, 4, 4};
  SpinorField f = SpinorField::zeros(g);
  f.up(g.idx(3, 0, 0)) = 1.0;
  stream(f, 0, +1, 0);
  CHECK(f.up(g.idx(0, 0, 0)) == cplx{1.0, 0.0});
}

TEST_CASE("stream round trip is exact") {
  GridSpec g{4, 5, 6};
  SpinorField f = random_spinor(g, 104);
  const SpinorField f0 = f;
  for (int axis = 0; axis < 3; ++axis)
    for (int comp = 0; comp < 2; ++comp) {
      stream(f, axis, +1, comp);
      stream(f, axis, -1, comp);
    }
  CHECK(max_dev(f, f0) == 0.0);
}

TEST_CASE("interleaved sweep equals its dense matrix form") {
  GridSpec g{4, 4, 4};
  for (int axis = 0; axis < 3; ++axis)
    for (int comp = 0; comp < 2; ++comp) {
      SpinorField f = random_spinor(g, 200 + 10 * axis + comp);
      const std::vector<cplx> ref =
          oracle::matvec(oracle::sweep_matrix(g, axis, comp), f.data);
      Evolver ev(g);
      ev.sweep(f, axis, comp);
      double err = 0.0;
      for (std::size_t i = 0; i < ref.size(); ++i)
        err = std::max(err, std::abs(f.data[i] - ref[i]));
      CHECK(err < 1e-14);
    }
}

TEST_CASE("full step equals the dense operator product") {
  GridSpec g{4, 4, 4};
  SpinorField f = random_spinor(g, 300, 0.6);
  SimParams p;
  p.g = 0.8;
  p.phase_scale = 0.25;
  std::vector<cplx> psi = f.data;
  evolve_step(f, p);
  psi = oracle::step_reference(psi, g, p);
  double err = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    err = std::max(err, std::abs(f.data[i] - psi[i]));
  CHECK(err < 1e-12);
}

TEST_CASE("norm is conserved to rounding over many steps") {
  GridSpec g{6, 6, 6};
  SpinorField f = random_spinor(g, 105, 0.5);
  SimParams p;
  const double n0 = norm2(f);
  Evolver ev(g);
  for (int t = 0; t < 100; ++t) ev.step(f, p);
  CHECK(std::abs(norm2(f) - n0) / n0 < 1e-12);
}

TEST_CASE("nonlinear phase has the closed form on a uniform state") {
  GridSpec g{4, 4, 4};
  SpinorField f = SpinorField::zeros(g);
  const cplx u{0.3, -0.1};
  for (std::size_t s = 0; s < g.sites(); ++s) {
    f.up(s) = u;
    f.dn(s) = u;
  }
  SimParams p;
  p.g = 2.0;
  p.phase_scale = 0.4;
  const double rho = std::norm(2.0 * u);
  const double w = p.phase_scale * 0.5 * (p.g * rho - 1.0);
  const cplx expect = u * cplx{std::cos(w), -std::sin(w)};
  nonlinear_phase(f, p, 0.5);
  CHECK(std::abs(f.up(g.idx(1, 2, 3)) - expect) < 1e-15);
  CHECK(std::abs(f.dn(g.idx(0, 0, 0)) - expect) < 1e-15);
}

TEST_CASE("nonlinear phase at g=0 is a state-independent global factor") {
  GridSpec g{4, 4, 4};
  SpinorField f = random_spinor(g, 106);
  const SpinorField f0 = f;
  SimParams p;
  p.g = 0.0;
  p.phase_scale = 0.7;
  nonlinear_phase(f, p, 1.0);
  const cplx factor{std::cos(0.7), std::sin(0.7)}; // exp(-i*s*(0 - 1)) = exp(+i*s)
  CHECK(max_dev(f, [&] {
          SpinorField e = f0;
          for (auto& c : e.data) c *= factor;
          return e;
        }()) < 1e-15);
}

TEST_CASE("run invokes the hook at every timestep from t0") {
  GridSpec g{4, 4, 4};
  SpinorField f = random_spinor(g, 107, 0.4);
  const SpinorField f0 = f;
  SimParams p;
  std::vector<std::uint64_t> seen;
  run(f, p, 5, 10, [&](std::uint64_t t, const SpinorField& state) {
    if (t == 10) CHECK(max_dev(state, f0) == 0.0);
    seen.push_back(t);
  });
  REQUIRE(seen.size() == 6);
  for (std::uint64_t i = 0; i < 6; ++i) CHECK(seen[i] == 10 + i);
}

TEST_CASE("run with zero steps only reports the initial state") {
  GridSpec g{4, 4, 4};
  SpinorField f = random_spinor(g, 108, 0.4);
  SimParams p;
  int calls = 0;
  run(f, p, 0, 3, [&](std::uint64_t t, const SpinorField&) {
    CHECK(t == 3);
    ++calls;
  });
  CHECK(calls == 1);
}

TEST_CASE("lowest mode advances with the diffusive dispersion") {
  const std::size_t L = 32;
  GridSpec g{L, L, L};
  SimParams p;
  p.g = 0.0;
  p.phase_scale = 0.1;
  const double k = 2.0 * 3.14159265358979323846 / double(L);
  SpinorField f = SpinorField::zeros(g);
  for (std::size_t x = 0; x < L; ++x) {
    const cplx half = 0.5 * cplx{std::cos(k * double(x)), std::sin(k * double(x))};
    for (std::size_t y = 0; y < L; ++y)
      for (std::size_t z = 0; z < L; ++z) {
        f.up(g.idx(x, y, z)) = half;
        f.dn(g.idx(x, y, z)) = half;
      }
  }
  const std::uint64_t n = 100;
  Evolver ev(g);
  for (std::uint64_t t = 0; t < n; ++t) ev.step(f, p);
  cplx mode = 0.0;
  for (std::size_t x = 0; x < L; ++x) {
    const cplx e{std::cos(k * double(x)), -std::sin(k * double(x))};
    for (std::size_t y = 0; y < L; ++y)
      for (std::size_t z = 0; z < L; ++z) mode += (f.up(g.idx(x, y, z)) + f.dn(g.idx(x, y, z))) * e;
  }
  const double predicted = double(n) * (p.phase_scale - k * k);
  const double err = std::abs(std::remainder(std::arg(mode) - predicted, 2.0 * 3.14159265358979323846));
  CHECK(err < 0.15); // leading truncation ~ n k^4 / 2 ~ 0.07 here
}

} // TEST_SUITE
