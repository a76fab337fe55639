#include "qlg/initcond.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qlg/diagnostics.hpp"
#include "qlg/errors.hpp"

namespace qlg {

namespace {
constexpr double kPi = std::numbers::pi;

// Displacement folded to the nearest periodic image, in [-L/2, L/2).
double nearest_delta(double d, double L) {
  double m = std::fmod(d + 0.5 * L, L);
  if (m < 0) m += L;
  return m - 0.5 * L;
}

// Transverse axes in cyclic order after `axis`.
void transverse_axes(int axis, int& a1, int& a2) {
  a1 = (axis + 1) % 3;
  a2 = (axis + 2) % 3;
}
} // namespace

double pade_profile(double r, double a, double g) {
  const double u = a * r * r;
  const double num = 11.0 * u * (12.0 + u);
  const double den = g * (384.0 + u * (128.0 + 11.0 * u));
  return std::sqrt(num / den);
}

std::complex<double> theta1(std::complex<double> u, double q) {
  std::complex<double> s(0.0, 0.0);
  double sign = 1.0;
  for (int n = 0; n < 8; ++n) {
    const double w = std::pow(q, (n + 0.5) * (n + 0.5));
    s += sign * w * std::sin(double(2 * n + 1) * u);
    sign = -sign;
  }
  return 2.0 * s;
}

namespace {
// Transverse-plane factor of one vortex line: unit-background amplitude times
// a unit-modulus winding phase, tabulated over the (t1,t2) plane. The phase
// uses raw chart coordinates (no wrapping): theta_1 is evaluated on the plane
// so that balanced products of factors are exactly doubly periodic.
std::vector<cplx> transverse_factor(std::size_t n1, std::size_t n2, const VortexSpec& v,
                                    const SimParams& p) {
  const double L1 = static_cast<double>(n1);
  const double L2 = static_cast<double>(n2);
  const double q = std::exp(-kPi * L2 / L1);
  std::vector<cplx> tab(n1 * n2);
#pragma omp parallel for collapse(2) schedule(static)
  for (long long i1 = 0; i1 < static_cast<long long>(n1); ++i1)
    for (long long i2 = 0; i2 < static_cast<long long>(n2); ++i2) {
      const double d1 = static_cast<double>(i1) - v.c1;
      const double d2 = static_cast<double>(i2) - v.c2;
      const cplx u = kPi * cplx(d1, d2) / L1;
      cplx f = theta1(u, q);
      f /= std::max(std::abs(f), 1e-300);
      if (v.sign < 0) f = std::conj(f);
      const double r = std::hypot(nearest_delta(d1, L1), nearest_delta(d2, L2));
      double amp = pade_profile(r, p.a, p.g) * std::sqrt(p.g);
      cplx ph = f;
      if (v.winding == 2) {
        amp *= amp;
        ph *= f;
      }
      tab[static_cast<std::size_t>(i1) * n2 + static_cast<std::size_t>(i2)] = amp * ph;
    }
  return tab;
}

void validate_vortex(const VortexSpec& v, const GridSpec& g) {
  if (v.axis < 0 || v.axis > 2) throw ConfigError("vortex axis must be 0, 1, or 2");
  if (v.winding != 1 && v.winding != 2) throw ConfigError("vortex winding must be 1 or 2");
  if (v.sign != 1 && v.sign != -1) throw ConfigError("vortex sign must be +1 or -1");
  int a1, a2;
  transverse_axes(v.axis, a1, a2);
  const double L1 = static_cast<double>(g.extent(a1));
  const double L2 = static_cast<double>(g.extent(a2));
  if (!(v.c1 >= 0.0 && v.c1 < L1 && v.c2 >= 0.0 && v.c2 < L2))
    throw ConfigError("vortex center outside the periodic box");
}

// Multiply the vortex factor into the field, broadcasting the transverse
// table along the line axis.
void multiply_in(std::vector<cplx>& phi, const GridSpec& g, const VortexSpec& v,
                 const std::vector<cplx>& tab) {
  int a1, a2;
  transverse_axes(v.axis, a1, a2);
  const std::size_t n2 = g.extent(a2);
#pragma omp parallel for collapse(2) schedule(static)
  for (long long x = 0; x < static_cast<long long>(g.nx); ++x)
    for (long long y = 0; y < static_cast<long long>(g.ny); ++y)
      for (long long z = 0; z < static_cast<long long>(g.nz); ++z) {
        const std::size_t c[3] = {static_cast<std::size_t>(x), static_cast<std::size_t>(y),
                                  static_cast<std::size_t>(z)};
        phi[g.idx(c[0], c[1], c[2])] *= tab[c[a1] * n2 + c[a2]];
      }
}
} // namespace

ScalarField line_vortex(const GridSpec& grid, const VortexSpec& v, const SimParams& p) {
  grid.validate();
  p.validate();
  validate_vortex(v, grid);
  int a1, a2;
  transverse_axes(v.axis, a1, a2);
  auto tab = transverse_factor(grid.extent(a1), grid.extent(a2), v, p);
  ScalarField out = ScalarField::zeros(grid);
  for (auto& c : out.data) c = cplx(1.0, 0.0);
  multiply_in(out.data, grid, v, tab);
  return out;
}

SpinorField compose(const GridSpec& grid, const InitLayout& layout, const SimParams& p) {
  grid.validate();
  p.validate();
  if (layout.vortices.empty()) throw ConfigError("layout has no vortices");
  if (!(layout.amplitude_rescale > 0.0)) throw ConfigError("amplitude_rescale must be > 0");
  std::vector<cplx> phi(grid.sites(), cplx(1.0, 0.0));
  for (const auto& v : layout.vortices) {
    validate_vortex(v, grid);
    int a1, a2;
    transverse_axes(v.axis, a1, a2);
    auto tab = transverse_factor(grid.extent(a1), grid.extent(a2), v, p);
    multiply_in(phi, grid, v, tab);
  }
  const double scale = layout.amplitude_rescale / std::sqrt(p.g);
  SpinorField out = SpinorField::zeros(grid);
  const std::size_t n = grid.sites();
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const cplx half = 0.5 * scale * phi[static_cast<std::size_t>(i)];
    out.data[2 * i] = half;
    out.data[2 * i + 1] = half;
  }
  return out;
}

namespace {
// Four-line checkerboard in the transverse plane of `axis`: alternating signs
// on the quarter-box 2x2 grid, shifted by `off` along both coordinates. Net
// winding zero and equal coordinate sums per sign, so the theta-factor
// product is exactly periodic.
void checkerboard4(std::vector<VortexSpec>& out, int axis, std::size_t L, std::size_t off,
                   int winding) {
  const double p = static_cast<double>(L / 4 + off);
  const double P = static_cast<double>((3 * L / 4 + off) % L);
  out.push_back({axis, p, p, winding, +1});
  out.push_back({axis, P, P, winding, +1});
  out.push_back({axis, p, P, winding, -1});
  out.push_back({axis, P, p, winding, -1});
}

// Sixteen-line checkerboard: 4x4 grid at odd multiples of L/8, alternating
// signs by (i+j) parity, shifted by `off` along both coordinates.
void checkerboard16(std::vector<VortexSpec>& out, int axis, std::size_t L, std::size_t off,
                    int winding) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double c1 = static_cast<double>((L / 8 + i * (L / 4) + off) % L);
      const double c2 = static_cast<double>((L / 8 + j * (L / 4) + off) % L);
      out.push_back({axis, c1, c2, winding, (i + j) % 2 == 0 ? +1 : -1});
    }
}
} // namespace

InitLayout layout_preset(const std::string& name, const GridSpec& grid, int winding,
                         double rescale) {
  grid.validate();
  if (grid.nx != grid.ny || grid.ny != grid.nz)
    throw ConfigError("layout presets require a cubic grid");
  const std::size_t L = grid.nx;
  InitLayout lay;
  lay.amplitude_rescale = rescale;
  if (name == "single") {
    lay.vortices.push_back({2, static_cast<double>(L / 2), static_cast<double>(L / 2), winding, +1});
  } else if (name == "quad") {
    checkerboard4(lay.vortices, 2, L, 0, winding);
  } else if (name == "twelve") {
    checkerboard4(lay.vortices, 2, L, 0, winding);
    checkerboard4(lay.vortices, 0, L, L / 8, winding);
    checkerboard4(lay.vortices, 1, L, L / 4, winding);
  } else if (name == "fortyeight") {
    checkerboard16(lay.vortices, 2, L, 0, winding);
    checkerboard16(lay.vortices, 0, L, L / 16, winding);
    checkerboard16(lay.vortices, 1, L, L / 8, winding);
  } else {
    throw ConfigError("unknown layout preset '" + name +
                      "' (expected single, quad, twelve, or fortyeight)");
  }
  return lay;
}

std::vector<VortexSpec> parse_layout(const std::string& text) {
  std::vector<VortexSpec> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string axis_tok;
    if (!(ls >> axis_tok)) continue; // blank line
    VortexSpec v;
    if (axis_tok == "x" || axis_tok == "0")
      v.axis = 0;
    else if (axis_tok == "y" || axis_tok == "1")
      v.axis = 1;
    else if (axis_tok == "z" || axis_tok == "2")
      v.axis = 2;
    else
      throw ConfigError("layout line " + std::to_string(lineno) + ": bad axis '" + axis_tok + "'");
    if (!(ls >> v.c1 >> v.c2 >> v.winding >> v.sign))
      throw ConfigError("layout line " + std::to_string(lineno) +
                        ": expected 'axis c1 c2 winding sign'");
    std::string extra;
    if (ls >> extra)
      throw ConfigError("layout line " + std::to_string(lineno) + ": trailing token '" + extra +
                        "'");
    if (v.winding != 1 && v.winding != 2)
      throw ConfigError("layout line " + std::to_string(lineno) + ": winding must be 1 or 2");
    if (v.sign != 1 && v.sign != -1)
      throw ConfigError("layout line " + std::to_string(lineno) + ": sign must be +1 or -1");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("layout file has no vortices");
  return out;
}

StateRatios recurrence_class_check(const SpinorField& f, const SimParams& p) {
  const EnergyBudget e = energies(f, p);
  if (!(e.e_kin > 0.0)) throw NumericError("kinetic energy is zero; ratios undefined");
  StateRatios r;
  r.e_int_over_kin = e.e_int / e.e_kin;
  r.e_qu_over_kin = e.e_qu / e.e_kin;
  r.e_comp_over_incomp = e.e_kin_incomp > 0.0 ? e.e_kin_comp / e.e_kin_incomp
                                              : std::numeric_limits<double>::infinity();
  r.recurrence_class = r.e_int_over_kin < 0.1 && r.e_comp_over_incomp < 0.05;
  return r;
}

} // namespace qlg
