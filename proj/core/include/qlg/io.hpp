#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlg/diagnostics.hpp"
#include "qlg/field.hpp"
#include "qlg/initcond.hpp"
#include "qlg/params.hpp"
#include "qlg/spectral.hpp"

namespace qlg {

// Binary snapshot: magic "QLG1"; u64 nx, ny, nz; u64 timestep; f64 g, a,
// phase_scale; then per site (z fastest, row-major) four f64: Re alpha,
// Im alpha, Re beta, Im beta. Little-endian throughout. Writes are atomic
// (temp file + rename).
struct Snapshot {
  SpinorField field;
  std::uint64_t timestep = 0;
  SimParams params;
};
void save_snapshot(const SpinorField& f, const std::string& path, std::uint64_t timestep,
                   const SimParams& p);
Snapshot load_snapshot(const std::string& path);

// Experiment configuration: "key = value" lines, '#' comments, unknown keys
// rejected with their line number.
struct RunConfig {
  GridSpec grid{64, 64, 64};
  SimParams params;                  // g=1.0, a=0.04, phase_scale=0.1
  std::string layout = "twelve";     // preset name
  std::string layout_file;           // overrides `layout` when set
  int winding = 1;
  double rescale = 1.4;
  std::uint64_t n_steps = 1000;
  std::uint64_t hook_every = 100;    // trace sampling stride
  std::uint64_t snapshot_every = 0;  // 0 = only final
  std::uint64_t checkpoint_every = 5000;
  std::string output_dir = "out";
  double fidelity_threshold = 0.9;
  double core_fraction = 0.13;
  std::vector<FitWindow> fit_windows{{6, 20}};

  void validate() const; // throws ConfigError
};
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// FNV-1a hash of the canonical serialization of the physics-relevant fields;
// used to refuse resuming under a different configuration.
std::uint64_t config_hash(const RunConfig& c);

// Layout file reader ("axis c1 c2 winding sign" rows).
std::vector<VortexSpec> load_layout_file(const std::string& path);

// Whole-file atomic write: temp file in the same directory, then rename.
void atomic_write(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

// Trace CSV: header
//   timestep,E_kin,E_qu,E_int,E_tot,E_kin_incomp,E_kin_comp,fidelity,
//   fidelity_inversion,core_voxels
std::string trace_to_csv(const RecurrenceTrace& trace);
RecurrenceTrace trace_from_csv(const std::string& text);

// Spectra CSV (one snapshot): header k,E_incomp,E_comp,E_quantum,E_total_kin;
// rows per shell starting at k=0. Expects the four spectra of one timestep.
std::string spectra_to_csv(const Spectrum& incomp, const Spectrum& comp, const Spectrum& quantum,
                           const Spectrum& total);

// Fit table CSV: header kind,k_lo,k_hi,alpha_mean,alpha_std,n_snapshots.
std::string fits_to_csv(const std::vector<FitRow>& rows);

// Checkpoint sidecar: "config_hash=<hex>\nstep=<n>\n" next to the snapshot.
struct CheckpointMeta {
  std::uint64_t config_hash = 0;
  std::uint64_t step = 0;
};
void save_checkpoint(const std::string& dir, const SpinorField& f, std::uint64_t step,
                     const RunConfig& c);
bool has_checkpoint(const std::string& dir);
std::pair<Snapshot, CheckpointMeta> load_checkpoint(const std::string& dir, const RunConfig& c);

} // namespace qlg
