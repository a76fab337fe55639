#include "qlg/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "qlg/errors.hpp"

namespace qlg {

namespace {
// Cached single-threaded FFTW plans per grid. FFTW_UNALIGNED lets one plan
// execute on any buffer; FFTW_ESTIMATE keeps planning deterministic.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

PlanPair& plans_for(const GridSpec& g) {
  static std::map<std::array<std::size_t, 3>, PlanPair> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  const std::array<std::size_t, 3> key{g.nx, g.ny, g.nz};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> a(g.sites()), b(g.sites());
  PlanPair p;
  p.fwd = fftw_plan_dft_3d(static_cast<int>(g.nx), static_cast<int>(g.ny), static_cast<int>(g.nz),
                           reinterpret_cast<fftw_complex*>(a.data()),
                           reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_3d(static_cast<int>(g.nx), static_cast<int>(g.ny), static_cast<int>(g.nz),
                           reinterpret_cast<fftw_complex*>(a.data()),
                           reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.fwd || !p.bwd) throw NumericError("FFTW plan creation failed");
  return cache.emplace(key, p).first->second;
}

void execute(fftw_plan plan, const std::vector<cplx>& in, std::vector<cplx>& out) {
  // FFTW does not modify the input for out-of-place c2c transforms.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}
} // namespace

std::size_t KGrid::max_shell() const {
  // the corner mode (-nx/2, -ny/2, -nz/2) has the largest magnitude, so its
  // shell is the last one any mode can land in
  const double hx = static_cast<double>(grid.nx / 2);
  const double hy = static_cast<double>(grid.ny / 2);
  const double hz = static_cast<double>(grid.nz / 2);
  return static_cast<std::size_t>(std::llround(std::sqrt(hx * hx + hy * hy + hz * hz)));
}

std::size_t KGrid::shell(std::size_t x, std::size_t y, std::size_t z) const {
  const double k2 = static_cast<double>(kx(x)) * kx(x) + static_cast<double>(ky(y)) * ky(y) +
                    static_cast<double>(kz(z)) * kz(z);
  return static_cast<std::size_t>(std::llround(std::sqrt(k2)));
}

KField forward_transform(const ScalarField& f) {
  KField out;
  out.grid = f.grid;
  out.data.resize(f.grid.sites());
  execute(plans_for(f.grid).fwd, f.data, out.data);
  return out;
}

KField forward_transform(const RealField& f) {
  ScalarField c;
  c.grid = f.grid;
  c.data.resize(f.grid.sites());
  for (std::size_t i = 0; i < f.data.size(); ++i) c.data[i] = cplx(f.data[i], 0.0);
  return forward_transform(c);
}

ScalarField inverse_transform(const KField& f) {
  ScalarField out;
  out.grid = f.grid;
  out.data.resize(f.grid.sites());
  execute(plans_for(f.grid).bwd, f.data, out.data);
  const double inv = 1.0 / static_cast<double>(f.grid.sites());
  for (auto& v : out.data) v *= inv;
  return out;
}

KVec3Field forward_transform(const Vec3Field& f) {
  KVec3Field out;
  out.grid = f.grid;
  for (int c = 0; c < 3; ++c) {
    RealField r;
    r.grid = f.grid;
    r.data = f.comp[c];
    out.comp[c] = forward_transform(r).data;
  }
  return out;
}

Vec3Field inverse_transform_real(const KVec3Field& f) {
  Vec3Field out = Vec3Field::zeros(f.grid);
  for (int c = 0; c < 3; ++c) {
    KField k;
    k.grid = f.grid;
    k.data = f.comp[c];
    const ScalarField s = inverse_transform(k);
    for (std::size_t i = 0; i < s.data.size(); ++i) out.comp[c][i] = s.data[i].real();
  }
  return out;
}

std::pair<Vec3Field, Vec3Field> helmholtz_split(const Vec3Field& w) {
  const GridSpec g = w.grid;
  const KGrid kg{g};
  KVec3Field what = forward_transform(w);
  KVec3Field comp_k;
  comp_k.grid = g;
  for (auto& c : comp_k.comp) c.assign(g.sites(), cplx(0.0, 0.0));

  const auto nyquist = [](std::size_t i, std::size_t n) { return n % 2 == 0 && i == n / 2; };
  for (std::size_t x = 0; x < g.nx; ++x)
    for (std::size_t y = 0; y < g.ny; ++y)
      for (std::size_t z = 0; z < g.nz; ++z) {
        const double m[3] = {static_cast<double>(kg.kx(x)), static_cast<double>(kg.ky(y)),
                             static_cast<double>(kg.kz(z))};
        const double m2 = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
        const std::size_t i = g.idx(x, y, z);
        // k=0 and the unpaired half-sampling planes stay incompressible: a
        // mode with any component at -n/2 has no negation partner, so the
        // longitudinal direction is undefined there and projecting it would
        // break the conjugate symmetry that keeps the parts real.
        if (m2 == 0.0) continue;
        if (nyquist(x, g.nx) || nyquist(y, g.ny) || nyquist(z, g.nz)) continue;
        const cplx dot = (m[0] * what.comp[0][i] + m[1] * what.comp[1][i] + m[2] * what.comp[2][i]) / m2;
        for (int c = 0; c < 3; ++c) {
          const cplx wc = m[c] * dot;
          comp_k.comp[c][i] = wc;
          what.comp[c][i] -= wc; // leaves the incompressible part in what
        }
      }
  return {inverse_transform_real(what), inverse_transform_real(comp_k)};
}

const char* to_string(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::incompressible_KE: return "incompressible_KE";
    case SpectrumKind::compressible_KE: return "compressible_KE";
    case SpectrumKind::quantum: return "quantum";
    case SpectrumKind::total_KE: return "total_KE";
  }
  return "?";
}

namespace {
Spectrum shell_accumulate(const GridSpec& g, SpectrumKind kind, std::uint64_t timestep,
                          const std::vector<const std::vector<cplx>*>& comps) {
  const KGrid kg{g};
  Spectrum s;
  s.kind = kind;
  s.timestep = timestep;
  s.values.assign(kg.max_shell() + 1, 0.0);
  const double inv_v = 1.0 / static_cast<double>(g.sites());
  for (std::size_t x = 0; x < g.nx; ++x)
    for (std::size_t y = 0; y < g.ny; ++y)
      for (std::size_t z = 0; z < g.nz; ++z) {
        const std::size_t i = g.idx(x, y, z);
        double e = 0.0;
        for (const auto* c : comps) e += std::norm((*c)[i]);
        s.values[kg.shell(x, y, z)] += e * inv_v;
      }
  return s;
}
} // namespace

Spectrum shell_spectrum(const KVec3Field& f, SpectrumKind kind, std::uint64_t timestep) {
  return shell_accumulate(f.grid, kind, timestep, {&f.comp[0], &f.comp[1], &f.comp[2]});
}

Spectrum shell_spectrum(const KField& f, SpectrumKind kind, std::uint64_t timestep) {
  return shell_accumulate(f.grid, kind, timestep, {&f.data});
}

SpectralFit fit_exponent(const Spectrum& s, int k_lo, int k_hi) {
  if (k_lo < 1) throw ConfigError("fit window must start at shell 1 or higher");
  if (k_lo >= k_hi) throw ConfigError("fit window must satisfy k_lo < k_hi");
  std::vector<double> xs, ys;
  for (int k = k_lo; k <= k_hi && k < static_cast<int>(s.values.size()); ++k) {
    if (s.values[k] > 0.0) {
      xs.push_back(std::log10(static_cast<double>(k)));
      ys.push_back(std::log10(s.values[k]));
    }
  }
  const std::size_t n = xs.size();
  if (n < 3)
    throw NumericError("fit window [" + std::to_string(k_lo) + "," + std::to_string(k_hi) +
                       "] has fewer than 3 nonempty shells");
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - xm) * (xs[i] - xm);
    sxy += (xs[i] - xm) * (ys[i] - ym);
  }
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (ym + slope * (xs[i] - xm));
    ss_res += r * r;
  }
  SpectralFit fit;
  fit.k_lo = k_lo;
  fit.k_hi = k_hi;
  fit.alpha = -slope;
  fit.n_points = static_cast<int>(n);
  fit.std_error = n > 2 ? std::sqrt(ss_res / (static_cast<double>(n - 2) * sxx)) : 0.0;
  return fit;
}

std::vector<FitRow> time_averaged_exponents(const std::vector<std::vector<Spectrum>>& snapshots,
                                            const std::vector<FitWindow>& windows) {
  if (snapshots.size() < 2) throw ConfigError("time averaging needs at least 2 snapshots");
  constexpr SpectrumKind kinds[] = {SpectrumKind::incompressible_KE, SpectrumKind::compressible_KE,
                                    SpectrumKind::quantum, SpectrumKind::total_KE};
  std::vector<FitRow> rows;
  for (const auto& w : windows) {
    for (const auto kind : kinds) {
      std::vector<double> alphas;
      bool kind_present = false;
      for (const auto& snap : snapshots) {
        for (const auto& sp : snap) {
          if (sp.kind != kind) continue;
          kind_present = true;
          try {
            alphas.push_back(fit_exponent(sp, w.k_lo, w.k_hi).alpha);
          } catch (const NumericError&) {
            // window unusable on this snapshot; skip it, keep the table going
          }
          break;
        }
      }
      if (!kind_present) continue;
      FitRow row;
      row.kind = kind;
      row.k_lo = w.k_lo;
      row.k_hi = w.k_hi;
      row.n_snapshots = static_cast<int>(alphas.size());
      if (alphas.empty()) {
        row.alpha_mean = std::numeric_limits<double>::quiet_NaN();
        row.alpha_std = std::numeric_limits<double>::quiet_NaN();
      } else {
        double m = 0.0;
        for (double a : alphas) m += a;
        m /= static_cast<double>(alphas.size());
        double v = 0.0;
        for (double a : alphas) v += (a - m) * (a - m);
        v /= static_cast<double>(alphas.size());
        row.alpha_mean = m;
        row.alpha_std = std::sqrt(v);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

} // namespace qlg
