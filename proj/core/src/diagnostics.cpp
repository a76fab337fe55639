#include "qlg/diagnostics.hpp"

#include <cmath>
#include <deque>
#include <numbers>

#include "qlg/errors.hpp"
#include "qlg/spectral.hpp"

namespace qlg {

namespace {
// Centered periodic difference along `axis` of a complex field, divided by 2.
void centered_diff(const std::vector<cplx>& f, const GridSpec& g, int axis,
                   std::vector<cplx>& out) {
  const long long n[3] = {static_cast<long long>(g.nx), static_cast<long long>(g.ny),
                          static_cast<long long>(g.nz)};
#pragma omp parallel for collapse(2) schedule(static)
  for (long long x = 0; x < n[0]; ++x)
    for (long long y = 0; y < n[1]; ++y)
      for (long long z = 0; z < n[2]; ++z) {
        long long p[3] = {x, y, z};
        long long m[3] = {x, y, z};
        p[axis] = p[axis] + 1 == n[axis] ? 0 : p[axis] + 1;
        m[axis] = m[axis] == 0 ? n[axis] - 1 : m[axis] - 1;
        const std::size_t ip = g.idx(p[0], p[1], p[2]);
        const std::size_t im = g.idx(m[0], m[1], m[2]);
        out[g.idx(x, y, z)] = 0.5 * (f[ip] - f[im]);
      }
}
} // namespace

FlowFields madelung(const ScalarField& phi, double density_floor) {
  if (!(density_floor > 0.0)) throw ConfigError("density_floor must be > 0");
  const GridSpec g = phi.grid;
  const std::size_t n = g.sites();
  FlowFields out{RealField::zeros(g), Vec3Field::zeros(g), Vec3Field::zeros(g)};

  std::vector<cplx> sq(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const double rho = std::norm(phi.data[i]);
    out.rho.data[i] = rho;
    sq[i] = cplx(std::sqrt(rho), 0.0);
  }

  const double floor_sqrt = std::sqrt(density_floor);
  std::vector<cplx> d(n);
  for (int axis = 0; axis < 3; ++axis) {
    centered_diff(phi.data, g, axis, d);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      const double denom = std::max(sq[i].real(), floor_sqrt);
      out.w.comp[axis][i] = 2.0 * std::imag(std::conj(phi.data[i]) * d[i]) / denom;
    }
    centered_diff(sq, g, axis, d);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      out.sqrt_rho_grad.comp[axis][i] = d[i].real();
  }
  return out;
}

EnergyBudget energies(const SpinorField& f, const SimParams& p, std::uint64_t timestep,
                      double density_floor) {
  p.validate();
  const ScalarField phi = order_parameter(f);
  const std::size_t n = f.grid.sites();

  if (density_floor <= 0.0) {
    double mx = 0.0;
#pragma omp parallel for schedule(static) reduction(max : mx)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      const double rho = std::norm(phi.data[i]);
      if (rho > mx) mx = rho;
    }
    density_floor = std::max(1e-12 * mx, 1e-300);
  }

  const FlowFields flow = madelung(phi, density_floor);
  EnergyBudget e;
  e.timestep = timestep;

  const auto& w = flow.w;
  e.e_kin = chunked_sum(n, [&w](std::size_t i) {
    return w.comp[0][i] * w.comp[0][i] + w.comp[1][i] * w.comp[1][i] + w.comp[2][i] * w.comp[2][i];
  });
  const auto& gq = flow.sqrt_rho_grad;
  e.e_qu = (2.0 / (p.a * p.a)) * chunked_sum(n, [&gq](std::size_t i) {
             return gq.comp[0][i] * gq.comp[0][i] + gq.comp[1][i] * gq.comp[1][i] +
                    gq.comp[2][i] * gq.comp[2][i];
           });
  const auto& rho = flow.rho;
  e.e_int = (p.g / (p.a * p.a)) *
            chunked_sum(n, [&rho](std::size_t i) { return rho.data[i] * rho.data[i]; });
  e.e_tot = e.e_kin + e.e_qu + e.e_int;

  const auto [winc, wcomp] = helmholtz_split(flow.w);
  e.e_kin_incomp = chunked_sum(n, [&winc](std::size_t i) {
    return winc.comp[0][i] * winc.comp[0][i] + winc.comp[1][i] * winc.comp[1][i] +
           winc.comp[2][i] * winc.comp[2][i];
  });
  e.e_kin_comp = chunked_sum(n, [&wcomp](std::size_t i) {
    return wcomp.comp[0][i] * wcomp.comp[0][i] + wcomp.comp[1][i] * wcomp.comp[1][i] +
           wcomp.comp[2][i] * wcomp.comp[2][i];
  });
  return e;
}

long winding_number(const ScalarField& phi, const std::vector<std::array<std::size_t, 3>>& loop,
                    double density_floor) {
  if (loop.size() < 3) throw ConfigError("winding loop needs at least 3 sites");
  double total = 0.0;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const auto& s0 = loop[i];
    const auto& s1 = loop[(i + 1) % loop.size()];
    const cplx a = phi.data[phi.grid.idx(s0[0], s0[1], s0[2])];
    const cplx b = phi.data[phi.grid.idx(s1[0], s1[1], s1[2])];
    if (std::norm(a) < density_floor || std::norm(b) < density_floor)
      throw NumericError("winding indeterminate: loop touches a near-zero site");
    double d = std::arg(b) - std::arg(a);
    if (d > std::numbers::pi) d -= two_pi;
    if (d < -std::numbers::pi) d += two_pi;
    total += d;
  }
  return std::lround(total / two_pi);
}

VortexMask vortex_core_mask(const ScalarField& phi, double c) {
  if (!(c > 0.0 && c < 1.0)) throw ConfigError("core threshold fraction must be in (0,1)");
  const GridSpec g = phi.grid;
  const std::size_t n = g.sites();
  VortexMask m;
  m.threshold_fraction = c;
  m.grid = g;
  m.mask.assign(n, 0);

  double max_abs = 0.0;
#pragma omp parallel for schedule(static) reduction(max : max_abs)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const double v = std::abs(phi.data[i]);
    if (v > max_abs) max_abs = v;
  }
  const double thr = c * max_abs;
  std::size_t voxels = 0;
#pragma omp parallel for schedule(static) reduction(+ : voxels)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    if (std::abs(phi.data[i]) < thr) {
      m.mask[i] = 1;
      ++voxels;
    }
  }
  m.voxels = voxels;

  // 6-connected components with periodic wrap, BFS over masked sites.
  std::vector<std::uint8_t> seen(n, 0);
  std::deque<std::size_t> queue;
  std::size_t comps = 0;
  const long long dims[3] = {static_cast<long long>(g.nx), static_cast<long long>(g.ny),
                             static_cast<long long>(g.nz)};
  for (std::size_t start = 0; start < n; ++start) {
    if (!m.mask[start] || seen[start]) continue;
    ++comps;
    seen[start] = 1;
    queue.push_back(start);
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      const long long z = static_cast<long long>(cur % g.nz);
      const long long y = static_cast<long long>((cur / g.nz) % g.ny);
      const long long x = static_cast<long long>(cur / (g.nz * g.ny));
      for (int axis = 0; axis < 3; ++axis)
        for (int dir = -1; dir <= 1; dir += 2) {
          long long p[3] = {x, y, z};
          p[axis] += dir;
          if (p[axis] < 0) p[axis] += dims[axis];
          if (p[axis] >= dims[axis]) p[axis] -= dims[axis];
          const std::size_t nb = g.idx(p[0], p[1], p[2]);
          if (m.mask[nb] && !seen[nb]) {
            seen[nb] = 1;
            queue.push_back(nb);
          }
        }
    }
  }
  m.components = comps;
  return m;
}

double fidelity(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid == b.grid)) throw ConfigError("fidelity requires matching grids");
  const std::size_t n = a.grid.sites();
  const double na = norm2(a);
  const double nb = norm2(b);
  if (!(na > 0.0) || !(nb > 0.0)) throw NumericError("fidelity undefined for zero-norm field");
  const auto* da = a.data.data();
  const auto* db = b.data.data();
  const double re =
      chunked_sum(n, [da, db](std::size_t i) { return std::real(std::conj(da[i]) * db[i]); });
  const double im =
      chunked_sum(n, [da, db](std::size_t i) { return std::imag(std::conj(da[i]) * db[i]); });
  return std::sqrt((re * re + im * im) / (na * nb));
}

namespace {
std::array<std::size_t, 3> inverted_site(const GridSpec& g, std::size_t x, std::size_t y,
                                         std::size_t z) {
  return {x == 0 ? 0 : g.nx - x, y == 0 ? 0 : g.ny - y, z == 0 ? 0 : g.nz - z};
}
} // namespace

ScalarField point_inversion(const ScalarField& f) {
  ScalarField out = ScalarField::zeros(f.grid);
  const GridSpec g = f.grid;
  for (std::size_t x = 0; x < g.nx; ++x)
    for (std::size_t y = 0; y < g.ny; ++y)
      for (std::size_t z = 0; z < g.nz; ++z) {
        const auto s = inverted_site(g, x, y, z);
        out.data[g.idx(s[0], s[1], s[2])] = f.data[g.idx(x, y, z)];
      }
  return out;
}

SpinorField point_inversion(const SpinorField& f) {
  SpinorField out = SpinorField::zeros(f.grid);
  const GridSpec g = f.grid;
  for (std::size_t x = 0; x < g.nx; ++x)
    for (std::size_t y = 0; y < g.ny; ++y)
      for (std::size_t z = 0; z < g.nz; ++z) {
        const auto s = inverted_site(g, x, y, z);
        const std::size_t src = g.idx(x, y, z);
        const std::size_t dst = g.idx(s[0], s[1], s[2]);
        out.data[2 * dst] = f.data[2 * src];
        out.data[2 * dst + 1] = f.data[2 * src + 1];
      }
  return out;
}

std::vector<Peak> detect_recurrence(const RecurrenceTrace& trace, double threshold) {
  if (trace.samples.size() < 3) throw ConfigError("recurrence detection needs >= 3 samples");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must be in (0,1)");
  std::vector<Peak> peaks;
  const auto& s = trace.samples;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i].timestep == 0) continue;
    const double f = s[i].fidelity;
    if (f > threshold && f >= s[i - 1].fidelity && f >= s[i + 1].fidelity)
      peaks.push_back({s[i].timestep, f});
  }
  return peaks;
}

std::vector<ScalingRow> diffusion_scaling_check(
    const std::vector<std::pair<std::size_t, std::uint64_t>>& pairs) {
  std::vector<ScalingRow> rows;
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
    ScalingRow r;
    r.l1 = pairs[i].first;
    r.t1 = pairs[i].second;
    r.l2 = pairs[i + 1].first;
    r.t2 = pairs[i + 1].second;
    if (r.l1 == 0 || r.t1 == 0) throw ConfigError("scaling check needs nonzero L and T");
    r.measured_ratio = static_cast<double>(r.t2) / static_cast<double>(r.t1);
    const double lr = static_cast<double>(r.l2) / static_cast<double>(r.l1);
    r.theory_ratio = lr * lr;
    r.discrepancy = std::abs(r.measured_ratio - r.theory_ratio) / r.theory_ratio;
    rows.push_back(r);
  }
  return rows;
}

double coherence_length(const SimParams& p, double rho0) {
  if (!(p.a > 0.0 && p.g > 0.0 && rho0 > 0.0))
    throw ConfigError("coherence length needs a, g, rho0 > 0");
  return 1.0 / std::sqrt(p.a * p.g * rho0);
}

} // namespace qlg
