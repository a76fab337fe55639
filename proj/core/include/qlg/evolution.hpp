#pragma once

#include <cstdint>
#include <functional>

#include "qlg/field.hpp"
#include "qlg/params.hpp"

namespace qlg {

// In-place local collision on every site: the square-root-of-swap mixing
//   alpha' = c*alpha + conj(c)*beta,  beta' = conj(c)*alpha + c*beta,
// with c = (1 - i)/2. Applying it twice swaps the components; four times is
// the identity.
void collide(SpinorField& f);

// In-place shift of one spinor component by one site along an axis.
// dir = +1 moves values toward higher indices (periodic wrap).
void stream(SpinorField& f, int axis, int dir, int comp);

// Interleaved sweep J = stream(-1) o collide o stream(+1) o collide acting on
// `comp` along `axis`, applied `reps` times. Uses an internal scratch buffer.
class Evolver {
public:
  explicit Evolver(const GridSpec& g);

  void sweep(SpinorField& f, int axis, int comp, int reps = 1);

  // One full update: for each component in order {0,1}, apply the doubled
  // sweep J^2 along x, then y, then z, then multiply both components by the
  // nonlinear half phase exp(-i*phase_scale*(g*|phi|^2 - 1)/2), recomputing
  // |phi|^2 from the current state each time.
  void step(SpinorField& f, const SimParams& p);

private:
  SpinorField buf_;
  void shift_collide(const SpinorField& in, SpinorField& out, int axis, int dir, int comp);
};

// Multiply both components by exp(-i*phase_scale*fraction*(g*|phi|^2 - 1)),
// phi = alpha + beta evaluated from the current state.
void nonlinear_phase(SpinorField& f, const SimParams& p, double fraction);

// Convenience single step (allocates scratch internally).
void evolve_step(SpinorField& f, const SimParams& p);

// Advance `n_steps` steps from timestep `t0`. The hook runs at timestep t0
// before stepping and after every subsequent step, so it sees the monotone
// sequence t0..t0+n_steps. Norm is monitored against its initial value; a
// relative drift above 1e-6 throws NumericError. If the phase kick ever
// exceeds pi/4 per step a warning is emitted once on stderr.
void run(SpinorField& f, const SimParams& p, std::uint64_t n_steps, std::uint64_t t0,
         const std::function<void(std::uint64_t, const SpinorField&)>& hook);

} // namespace qlg
