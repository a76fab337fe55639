#include "qlg/session.hpp"

#include <filesystem>

#include "qlg/errors.hpp"
#include "qlg/evolution.hpp"

namespace qlg {

namespace fs = std::filesystem;

SpinorField build_initial_state(const RunConfig& c) {
  InitLayout lay;
  if (!c.layout_file.empty()) {
    lay.vortices = load_layout_file(c.layout_file);
    lay.amplitude_rescale = c.rescale;
  } else {
    lay = layout_preset(c.layout, c.grid, c.winding, c.rescale);
  }
  return compose(c.grid, lay, c.params);
}

SessionResult run_session(const RunConfig& c, bool resume) {
  c.validate();
  const fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output dir " + c.output_dir + ": " + ec.message());

  SessionResult res;
  SpinorField state;
  std::uint64_t t0 = 0;

  if (resume && has_checkpoint(c.output_dir)) {
    auto [snap, meta] = load_checkpoint(c.output_dir, c);
    if (!(snap.field.grid == c.grid))
      throw ConfigError("checkpoint grid does not match the configuration");
    state = std::move(snap.field);
    t0 = meta.step;
    res.resumed = true;
    const fs::path trace_path = dir / "trace.csv";
    if (fs::exists(trace_path)) {
      RecurrenceTrace old = trace_from_csv(read_file(trace_path.string()));
      for (const auto& s : old.samples)
        if (s.timestep <= t0) res.trace.samples.push_back(s);
    }
  } else {
    if (resume) throw IoError("no checkpoint found in " + c.output_dir);
    state = build_initial_state(c);
    save_snapshot(state, (dir / "ic.qlg").string(), 0, c.params);
  }

  // Fidelity reference: the composed IC and its point inversion.
  const Snapshot ic = load_snapshot((dir / "ic.qlg").string());
  if (!(ic.field.grid == c.grid)) throw ConfigError("ic.qlg grid does not match the configuration");
  const ScalarField phi0 = order_parameter(ic.field);
  const ScalarField phi0_inv = point_inversion(phi0);

  const std::uint64_t t_end = c.n_steps;
  if (t0 > t_end)
    throw ConfigError("checkpoint step " + std::to_string(t0) + " is beyond steps=" +
                      std::to_string(t_end));

  auto sample = [&](std::uint64_t t, const SpinorField& f) {
    if (!res.trace.samples.empty() && res.trace.samples.back().timestep >= t) return;
    RecurrenceSample s;
    s.timestep = t;
    s.energy = energies(f, c.params, t);
    const ScalarField phi = order_parameter(f);
    s.fidelity = fidelity(phi0, phi);
    s.fidelity_inversion = fidelity(phi0_inv, phi);
    s.core_voxels = vortex_core_mask(phi, c.core_fraction).voxels;
    res.trace.samples.push_back(s);
  };

  auto flush_trace = [&]() {
    atomic_write((dir / "trace.csv").string(), trace_to_csv(res.trace));
  };

  auto hook = [&](std::uint64_t t, const SpinorField& f) {
    if (t % c.hook_every == 0 || t == t_end) sample(t, f);
    if (t > t0) {
      if (c.snapshot_every > 0 && t % c.snapshot_every == 0)
        save_snapshot(f, (dir / ("snap_t" + std::to_string(t) + ".qlg")).string(), t, c.params);
      if (t % c.checkpoint_every == 0 && t < t_end) {
        save_checkpoint(c.output_dir, f, t, c);
        flush_trace();
      }
    }
  };

  run(state, c.params, t_end - t0, t0, hook);

  if (res.trace.samples.size() >= 3)
    res.trace.peaks = detect_recurrence(res.trace, c.fidelity_threshold);
  flush_trace();
  save_snapshot(state, (dir / "final.qlg").string(), t_end, c.params);
  res.final_state = std::move(state);
  res.final_step = t_end;
  return res;
}

} // namespace qlg
