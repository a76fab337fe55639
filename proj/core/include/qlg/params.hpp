#pragma once

namespace qlg {

// Knobs of the evolution rule and energy normalization. `g` is the
// self-interaction strength, `a` sets the vortex core width (healing scale
// ~ 1/sqrt(a)) and the 1/a^2 weights of the quantum-pressure and interaction
// energies, `phase_scale` the per-step weight of the nonlinear phase kick.
struct SimParams {
  double g = 1.0;
  double a = 0.04;
  double phase_scale = 0.1;
  int steps_per_output = 100;

  // Throws ConfigError on non-finite or out-of-range values.
  void validate() const;
};

} // namespace qlg
