#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qlg/field.hpp"
#include "qlg/params.hpp"

namespace qlg {

// Density, density-weighted velocity w = sqrt(rho)*v, and grad sqrt(rho).
struct FlowFields {
  RealField rho;
  Vec3Field w;
  Vec3Field sqrt_rho_grad;
};

// rho = |phi|^2; w = 2 Im(conj(phi) grad phi) / max(sqrt(rho),
// sqrt(density_floor)) with centered periodic differences (the branch-free
// form of sqrt(rho) grad(2 arg phi)); sqrt_rho_grad = centered difference of
// sqrt(rho). Finite everywhere, cores regularized by the floor.
FlowFields madelung(const ScalarField& phi, double density_floor);

struct EnergyBudget {
  double e_kin = 0.0;
  double e_qu = 0.0;
  double e_int = 0.0;
  double e_tot = 0.0;
  double e_kin_incomp = 0.0;
  double e_kin_comp = 0.0;
  std::uint64_t timestep = 0;
};

// Lattice energy budget of phi = alpha + beta:
//   E_kin = sum |w|^2, E_qu = (2/a^2) sum |grad sqrt(rho)|^2,
//   E_int = (g/a^2) sum rho^2, E_tot their sum (exact by construction);
// kinetic split via the Helmholtz projection of w. density_floor defaults to
// 1e-12 * max rho.
EnergyBudget energies(const SpinorField& f, const SimParams& p, std::uint64_t timestep = 0,
                      double density_floor = -1.0);

// (1/2pi) * sum of wrapped phase differences of arg phi along a closed site
// loop, rounded to the nearest integer. Throws NumericError if any loop site
// has |phi|^2 below density_floor (winding indeterminate there).
long winding_number(const ScalarField& phi, const std::vector<std::array<std::size_t, 3>>& loop,
                    double density_floor);

// Sites with |phi| < c * |phi|_max, plus connected-component statistics under
// 6-connectivity with periodic wrap.
struct VortexMask {
  double threshold_fraction = 0.0;
  std::vector<std::uint8_t> mask;
  std::size_t voxels = 0;
  std::size_t components = 0;
  GridSpec grid;
};
VortexMask vortex_core_mask(const ScalarField& phi, double c);

// |<phi_a, phi_b>| / (|phi_a| |phi_b|): 1 iff equal up to a global phase.
// Throws NumericError on zero-norm input.
double fidelity(const ScalarField& a, const ScalarField& b);

// Site map x -> (-x mod L) per axis. An involution.
ScalarField point_inversion(const ScalarField& f);
SpinorField point_inversion(const SpinorField& f);

struct RecurrenceSample {
  std::uint64_t timestep = 0;
  EnergyBudget energy;
  double fidelity = 0.0;
  double fidelity_inversion = 0.0;
  std::size_t core_voxels = 0;
};
struct Peak {
  std::uint64_t timestep = 0;
  double value = 0.0;
};
struct RecurrenceTrace {
  std::vector<RecurrenceSample> samples;
  std::vector<Peak> peaks;
};

// Local maxima of the fidelity series above `threshold`, excluding the t=0
// sample. An empty result is not an error. Requires >= 3 samples and
// threshold in (0,1).
std::vector<Peak> detect_recurrence(const RecurrenceTrace& trace, double threshold);

// For consecutive (L, T_peak) pairs: measured T2/T1 against the diffusion
// prediction (L2/L1)^2 and their relative discrepancy.
struct ScalingRow {
  std::size_t l1 = 0, l2 = 0;
  std::uint64_t t1 = 0, t2 = 0;
  double measured_ratio = 0.0;
  double theory_ratio = 0.0;
  double discrepancy = 0.0;
};
std::vector<ScalingRow> diffusion_scaling_check(
    const std::vector<std::pair<std::size_t, std::uint64_t>>& pairs);

// Healing length 1/sqrt(a g rho0).
double coherence_length(const SimParams& p, double rho0);

} // namespace qlg
