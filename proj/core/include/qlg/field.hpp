#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "qlg/grid.hpp"

namespace qlg {

using cplx = std::complex<double>;

// Two complex amplitudes per site, interleaved: data[2*i] is the up component
// (alpha), data[2*i+1] the down component (beta), i = grid.idx(x,y,z).
struct SpinorField {
  GridSpec grid;
  std::vector<cplx> data;

  static SpinorField zeros(const GridSpec& g);

  cplx& up(std::size_t site) { return data[2 * site]; }
  cplx& dn(std::size_t site) { return data[2 * site + 1]; }
  const cplx& up(std::size_t site) const { return data[2 * site]; }
  const cplx& dn(std::size_t site) const { return data[2 * site + 1]; }
};

// One complex value per site.
struct ScalarField {
  GridSpec grid;
  std::vector<cplx> data;

  static ScalarField zeros(const GridSpec& g);
};

// One real value per site.
struct RealField {
  GridSpec grid;
  std::vector<double> data;

  static RealField zeros(const GridSpec& g);
};

// Three real values per site, stored as separate planes.
struct Vec3Field {
  GridSpec grid;
  std::array<std::vector<double>, 3> comp;

  static Vec3Field zeros(const GridSpec& g);
};

// Deterministic chunked sum of term(i) for i in [0, n). Partial sums are taken
// over fixed-size index chunks (parallel) and combined serially in chunk
// order, so the floating-point result never depends on the thread count.
template <class F>
double chunked_sum(std::size_t n, F&& term) {
  constexpr std::size_t kChunk = 4096;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (std::size_t c = 0; c < nchunks; ++c) total += partial[c];
  return total;
}

// Order component sum: alpha + beta per site.
ScalarField order_parameter(const SpinorField& f);

// Sum over sites of |alpha|^2 + |beta|^2 (resp. |phi|^2).
double norm2(const SpinorField& f);
double norm2(const ScalarField& f);

} // namespace qlg
