#pragma once

#include <cstdint>
#include <string>

#include "qlg/diagnostics.hpp"
#include "qlg/io.hpp"

namespace qlg {

// Orchestrated experiment: build or resume a state, evolve with trace
// sampling, periodic snapshots and checkpoints, and atomic CSV emission.
// Kept in the library so resume determinism is testable without a subprocess.
struct SessionResult {
  SpinorField final_state;
  std::uint64_t final_step = 0;
  RecurrenceTrace trace;
  bool resumed = false;
};

// Compose the configured initial condition (preset or layout file).
SpinorField build_initial_state(const RunConfig& c);

// Run n_steps from the IC (or from the last checkpoint when resume=true and
// one exists; the config hash must match). Emits into c.output_dir:
//   ic.qlg, trace.csv, snap_t{T}.qlg (when snapshot_every > 0),
//   checkpoint.qlg + checkpoint.meta (every checkpoint_every), final.qlg.
// The trace samples every hook_every steps, always including step 0 and the
// final step; fidelity columns compare against the IC and its point
// inversion.
SessionResult run_session(const RunConfig& c, bool resume);

} // namespace qlg
