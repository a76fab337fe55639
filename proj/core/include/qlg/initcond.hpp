#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qlg/field.hpp"
#include "qlg/params.hpp"

namespace qlg {

// A straight vortex line along one lattice axis. (c1,c2) is its position in
// the transverse plane, in cyclic coordinate order after the axis:
// axis 0 -> (y,z), axis 1 -> (z,x), axis 2 -> (x,y). `sign` flips the
// circulation sense, `winding` is the phase multiplicity (1 or 2).
struct VortexSpec {
  int axis = 2;
  double c1 = 0.0;
  double c2 = 0.0;
  int winding = 1;
  int sign = 1;
};

struct InitLayout {
  std::vector<VortexSpec> vortices;
  double amplitude_rescale = 1.4;
};

// Radial core amplitude sqrt(11 u (12 + u) / (g (384 + u (128 + 11 u)))) with
// u = a r^2. Zero at the core, tends to 1/sqrt(g) in the far field (with a
// ~5e-4 relative overshoot near u ~ 200 before settling).
double pade_profile(double r, double a, double g);

// First Jacobi theta function, truncated series (adequate for q = exp(-pi)).
// Odd and quasi-periodic; zeros exactly on the period lattice.
std::complex<double> theta1(std::complex<double> u, double q);

// Single periodic vortex-line factor: core amplitude at the nearest periodic
// image distance times a unit-modulus phase whose winding around the core is
// 2 pi * winding * sign. The phase comes from a theta-function chart so that
// balanced multi-line products (equal +/- counts per axis family with equal
// coordinate sums mod L) are exactly periodic and free of seam artifacts.
ScalarField line_vortex(const GridSpec& grid, const VortexSpec& v, const SimParams& p);

// Pointwise product of vortex factors scaled by amplitude_rescale/sqrt(g), so
// the far-field magnitude is ~ amplitude_rescale/sqrt(g). Spinor split evenly:
// alpha = beta = phi/2.
SpinorField compose(const GridSpec& grid, const InitLayout& layout, const SimParams& p);

// Named arrangements:
//   "single"     one z-axis line at box center (amplitude tests; not seam-free)
//   "quad"       four z lines on a quarter-box checkerboard, net winding 0
//   "twelve"     four lines per axis, staggered checkerboards per axis
//   "fortyeight" sixteen lines per axis on 4x4 checkerboards
InitLayout layout_preset(const std::string& name, const GridSpec& grid, int winding,
                         double rescale);

// Parse "axis c1 c2 winding sign" rows, one vortex per line, '#' comments.
// axis accepts x/y/z or 0/1/2. Throws ConfigError with the line number.
std::vector<VortexSpec> parse_layout(const std::string& text);

// Energy-ratio classification of a composed state. recurrence_class is true
// when E_int/E_kin < 0.1 and E_comp/E_incomp < 0.05 (interaction-poor,
// shear-dominated flow that revives under the unitary update). Throws
// NumericError when the kinetic energy vanishes.
struct StateRatios {
  double e_int_over_kin = 0.0;
  double e_qu_over_kin = 0.0;
  double e_comp_over_incomp = 0.0;
  bool recurrence_class = false;
};
StateRatios recurrence_class_check(const SpinorField& f, const SimParams& p);

} // namespace qlg
