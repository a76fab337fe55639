#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qlg/field.hpp"

namespace qlg {

// Integer wavevectors of the discrete transform: component j of mode index i
// lies in [-n_j/2, n_j/2). Shell index is round(|k|).
struct KGrid {
  GridSpec grid;

  static int freq(std::size_t i, std::size_t n) {
    return static_cast<int>(i) < static_cast<int>((n + 1) / 2)
               ? static_cast<int>(i)
               : static_cast<int>(i) - static_cast<int>(n);
  }
  int kx(std::size_t x) const { return freq(x, grid.nx); }
  int ky(std::size_t y) const { return freq(y, grid.ny); }
  int kz(std::size_t z) const { return freq(z, grid.nz); }
  // Largest shell index any mode attains; spectra carry max_shell()+1 bins.
  std::size_t max_shell() const;
  std::size_t shell(std::size_t x, std::size_t y, std::size_t z) const;
};

// Complex field in k space, same flat layout as real space.
struct KField {
  GridSpec grid;
  std::vector<cplx> data;
};
struct KVec3Field {
  GridSpec grid;
  std::array<std::vector<cplx>, 3> comp;
};

// Unnormalized forward DFT; inverse applies 1/V so the round trip is the
// identity. Plans are cached per call site via an internal FFTW wrapper.
KField forward_transform(const ScalarField& f);
KField forward_transform(const RealField& f);
ScalarField inverse_transform(const KField& f);
KVec3Field forward_transform(const Vec3Field& f);
Vec3Field inverse_transform_real(const KVec3Field& f);

// Projection of a real vector field into divergence-free and curl-free parts:
// in k space w_comp = khat (khat . w), w_incomp the remainder. The k=0 mode
// and modes on the unpaired half-sampling planes (any component at -n/2 on an
// even axis) stay in the incompressible part; those directions have no
// negation partner, so the longitudinal projector is undefined there.
// Returns real-space fields (incomp, comp).
std::pair<Vec3Field, Vec3Field> helmholtz_split(const Vec3Field& w);

enum class SpectrumKind { incompressible_KE, compressible_KE, quantum, total_KE };
const char* to_string(SpectrumKind k);

// Shell-binned energy: values[s] = sum over modes with round(|k|)=s of
// |f(k)|^2 / V, so the shell sum equals the real-space quadratic integral.
struct Spectrum {
  SpectrumKind kind = SpectrumKind::total_KE;
  std::uint64_t timestep = 0;
  std::vector<double> values;
};
Spectrum shell_spectrum(const KVec3Field& f, SpectrumKind kind, std::uint64_t timestep = 0);
Spectrum shell_spectrum(const KField& f, SpectrumKind kind, std::uint64_t timestep = 0);

// Least-squares power law over an inclusive shell window: fit of log10 E vs
// log10 k using only shells with nonzero energy; alpha = -slope, std_error
// from the regression residuals. Throws ConfigError if k_lo >= k_hi or
// k_lo < 1, NumericError if fewer than 3 usable shells fall in the window.
struct SpectralFit {
  int k_lo = 0;
  int k_hi = 0;
  double alpha = 0.0;
  double std_error = 0.0;
  int n_points = 0;
};
SpectralFit fit_exponent(const Spectrum& s, int k_lo, int k_hi);

// Per-window, per-kind mean and standard deviation of the fitted exponent
// across snapshots. A window that fails on some snapshot is skipped for that
// snapshot; n_snapshots counts the fits that succeeded (0 with NaN means the
// window failed everywhere). Never throws for window problems.
struct FitWindow {
  int k_lo = 0;
  int k_hi = 0;
};
struct FitRow {
  SpectrumKind kind = SpectrumKind::total_KE;
  int k_lo = 0;
  int k_hi = 0;
  double alpha_mean = 0.0;
  double alpha_std = 0.0;
  int n_snapshots = 0;
};
std::vector<FitRow> time_averaged_exponents(const std::vector<std::vector<Spectrum>>& snapshots,
                                            const std::vector<FitWindow>& windows);

} // namespace qlg
