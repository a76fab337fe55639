// Command-line driver: init / run / spectra / recurrence / catmap.
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qlg/catmap.hpp"
#include "qlg/diagnostics.hpp"
#include "qlg/errors.hpp"
#include "qlg/evolution.hpp"
#include "qlg/initcond.hpp"
#include "qlg/io.hpp"
#include "qlg/session.hpp"
#include "qlg/spectral.hpp"

namespace fs = std::filesystem;
using namespace qlg;

namespace {

RunConfig load_config(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return parse_config_file(path);
}

int cmd_init(const std::string& config_path, const std::string& out_override) {
  RunConfig c = load_config(config_path);
  if (!out_override.empty()) c.output_dir = out_override;
  c.validate();
  fs::create_directories(c.output_dir);
  const SpinorField ic = build_initial_state(c);
  save_snapshot(ic, (fs::path(c.output_dir) / "ic.qlg").string(), 0, c.params);
  const StateRatios r = recurrence_class_check(ic, c.params);
  char report[512];
  std::snprintf(report, sizeof report,
                "E_int/E_kin=%.6g\nE_qu/E_kin=%.6g\nE_comp/E_incomp=%.6g\nrecurrence_class=%s\n",
                r.e_int_over_kin, r.e_qu_over_kin, r.e_comp_over_incomp,
                r.recurrence_class ? "true" : "false");
  atomic_write((fs::path(c.output_dir) / "init_report.txt").string(), report);
  std::printf("wrote %s/ic.qlg\n%s", c.output_dir.c_str(), report);
  return 0;
}

int cmd_run(const std::string& config_path, long long steps_override,
            const std::string& out_override, bool resume) {
  RunConfig c = load_config(config_path);
  if (steps_override >= 0) c.n_steps = static_cast<std::uint64_t>(steps_override);
  if (!out_override.empty()) c.output_dir = out_override;
  if (!resume) {
    // a fresh run must not silently continue an old checkpoint
    if (has_checkpoint(c.output_dir))
      throw ConfigError("output dir " + c.output_dir +
                        " has a checkpoint; pass --resume to continue or use a fresh directory");
  }
  const SessionResult res = run_session(c, resume);
  std::printf("ran to step %" PRIu64 " (%s); trace rows=%zu, peaks=%zu\n", res.final_step,
              res.resumed ? "resumed" : "fresh", res.trace.samples.size(), res.trace.peaks.size());
  for (const auto& p : res.trace.peaks)
    std::printf("fidelity peak: t=%" PRIu64 " F=%.4f\n", p.timestep, p.value);
  return 0;
}

int cmd_spectra(const std::vector<std::string>& inputs, const std::string& windows_arg,
                const std::string& out_dir) {
  if (inputs.empty()) throw ConfigError("spectra needs at least one --in snapshot");
  fs::create_directories(out_dir);
  std::vector<FitWindow> windows;
  {
    // reuse the config parser's window grammar
    RunConfig tmp = parse_config("fit_windows = " + windows_arg + "\n");
    windows = tmp.fit_windows;
  }
  std::vector<std::vector<Spectrum>> per_snapshot;
  for (const auto& path : inputs) {
    const Snapshot snap = load_snapshot(path);
    const ScalarField phi = order_parameter(snap.field);
    double max_rho = 0.0;
    for (const auto& v : phi.data) max_rho = std::max(max_rho, std::norm(v));
    const FlowFields flow = madelung(phi, std::max(1e-12 * max_rho, 1e-300));
    const auto [winc, wcomp] = helmholtz_split(flow.w);

    Vec3Field qfield = Vec3Field::zeros(phi.grid);
    const double qs = std::sqrt(2.0) / snap.params.a;
    for (int cpt = 0; cpt < 3; ++cpt)
      for (std::size_t i = 0; i < qfield.comp[cpt].size(); ++i)
        qfield.comp[cpt][i] = qs * flow.sqrt_rho_grad.comp[cpt][i];

    const Spectrum si = shell_spectrum(forward_transform(winc), SpectrumKind::incompressible_KE,
                                       snap.timestep);
    const Spectrum sc = shell_spectrum(forward_transform(wcomp), SpectrumKind::compressible_KE,
                                       snap.timestep);
    const Spectrum sq = shell_spectrum(forward_transform(qfield), SpectrumKind::quantum,
                                       snap.timestep);
    const Spectrum st = shell_spectrum(forward_transform(flow.w), SpectrumKind::total_KE,
                                       snap.timestep);
    const std::string csv_path =
        (fs::path(out_dir) / ("spectra_t" + std::to_string(snap.timestep) + ".csv")).string();
    atomic_write(csv_path, spectra_to_csv(si, sc, sq, st));
    std::printf("wrote %s\n", csv_path.c_str());
    per_snapshot.push_back({si, sc, sq, st});
  }

  if (per_snapshot.size() >= 2) {
    const auto rows = time_averaged_exponents(per_snapshot, windows);
    const std::string fit_path = (fs::path(out_dir) / "fits.csv").string();
    atomic_write(fit_path, fits_to_csv(rows));
    std::printf("wrote %s\n", fit_path.c_str());
    for (const auto& r : rows)
      std::printf("%s k=[%d,%d] alpha=%.4f +- %.4f (n=%d)\n", to_string(r.kind), r.k_lo, r.k_hi,
                  r.alpha_mean, r.alpha_std, r.n_snapshots);
  } else {
    // single snapshot: per-window fits without averaging
    for (const auto& w : windows)
      for (const auto& sp : per_snapshot[0]) {
        try {
          const SpectralFit f = fit_exponent(sp, w.k_lo, w.k_hi);
          std::printf("%s k=[%d,%d] alpha=%.4f +- %.4f (n=%d shells)\n", to_string(sp.kind),
                      f.k_lo, f.k_hi, f.alpha, f.std_error, f.n_points);
        } catch (const NumericError& e) {
          std::printf("%s k=[%d,%d] unusable: %s\n", to_string(sp.kind), w.k_lo, w.k_hi, e.what());
        }
      }
  }
  return 0;
}

int cmd_recurrence(const std::string& grids_arg, std::uint64_t budget,
                   const std::string& config_path, const std::string& out_dir) {
  RunConfig base = load_config(config_path);
  std::vector<std::size_t> grids;
  {
    std::string tok;
    std::istringstream in(grids_arg);
    while (std::getline(in, tok, ',')) grids.push_back(std::stoull(tok));
  }
  if (grids.size() < 2) throw ConfigError("recurrence needs at least two grid sizes");
  fs::create_directories(out_dir);

  std::vector<std::pair<std::size_t, std::uint64_t>> found;
  std::string csv = "grid,T_peak,F_peak\n";
  for (const std::size_t L : grids) {
    RunConfig c = base;
    c.grid = {L, L, L};
    c.grid.validate();
    const SpinorField ic = build_initial_state(c);
    const ScalarField phi0 = order_parameter(ic);
    SpinorField state = ic;

    RecurrenceTrace trace;
    auto hook = [&](std::uint64_t t, const SpinorField& f) {
      RecurrenceSample s;
      s.timestep = t;
      s.fidelity = fidelity(phi0, order_parameter(f));
      trace.samples.push_back(s);
    };
    run(state, c.params, budget, 0, hook);
    const auto peaks = detect_recurrence(trace, c.fidelity_threshold);
    if (peaks.empty()) {
      std::printf("grid %zu: no fidelity peak > %.2f within %" PRIu64 " steps (inconclusive)\n", L,
                  c.fidelity_threshold, budget);
      csv += std::to_string(L) + ",,\n";
    } else {
      std::printf("grid %zu: T_peak=%" PRIu64 " F=%.4f\n", L, peaks[0].timestep, peaks[0].value);
      csv += std::to_string(L) + "," + std::to_string(peaks[0].timestep) + "," +
             std::to_string(peaks[0].value) + "\n";
      found.push_back({L, peaks[0].timestep});
    }
  }
  atomic_write((fs::path(out_dir) / "recurrence.csv").string(), csv);

  if (found.size() >= 2) {
    const auto rows = diffusion_scaling_check(found);
    for (const auto& r : rows)
      std::printf("T(%zu)/T(%zu) = %.4f vs (L2/L1)^2 = %.4f (discrepancy %.2f%%)\n", r.l2, r.l1,
                  r.measured_ratio, r.theory_ratio, 100.0 * r.discrepancy);
  } else {
    std::printf("inconclusive: fewer than two grids produced a peak\n");
  }
  return 0;
}

int cmd_catmap(std::uint64_t n, const std::string& image_path, long long steps,
               const std::string& out_path) {
  PixelImage img;
  if (!image_path.empty()) {
    img = load_pgm(image_path);
    n = img.n;
  }
  const CatPeriod p = cat_period(n);
  std::printf("period=%" PRIu64 ", half_inversion=%s\n", p.period,
              p.half_inversion ? "true" : "false");
  if (steps > 0) {
    if (img.n == 0) img = test_pattern(n);
    for (long long i = 0; i < steps; ++i) img = cat_step(img);
    const std::string out = out_path.empty() ? ("catmap_t" + std::to_string(steps) + ".pgm")
                                             : out_path;
    save_pgm(img, out);
    std::printf("wrote %s\n", out.c_str());
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice evolution of a nonlinear wave field with spectral and recurrence "
               "diagnostics"};
  app.require_subcommand(1);

  std::string config_path, out_dir, windows_arg = "6:20", grids_arg = "24,32";
  std::string image_path, out_path;
  std::vector<std::string> inputs;
  long long steps_override = -1, cat_steps = 0;
  std::uint64_t budget = 20000, cat_n = 313;
  bool resume = false;

  auto* init = app.add_subcommand("init", "compose an initial state and write ic.qlg");
  init->add_option("--config", config_path, "config file (key = value)");
  init->add_option("--out", out_dir, "output directory override");

  auto* runc = app.add_subcommand("run", "evolve with trace, snapshots, and checkpoints");
  runc->add_option("--config", config_path, "config file (key = value)");
  runc->add_option("--steps", steps_override, "override step count");
  runc->add_option("--out", out_dir, "output directory override");
  runc->add_flag("--resume", resume, "continue from the last checkpoint");

  auto* spec = app.add_subcommand("spectra", "shell spectra and power-law fits from snapshots");
  spec->add_option("--in", inputs, "input snapshot(s)")->required();
  spec->add_option("--windows", windows_arg, "fit windows, e.g. \"4:12,14:24\"");
  spec->add_option("--out", out_dir, "output directory");

  auto* rec = app.add_subcommand("recurrence", "multi-grid recurrence-time scaling experiment");
  rec->add_option("--grids", grids_arg, "comma-separated cubic grid sizes");
  rec->add_option("--budget-steps", budget, "step budget per grid");
  rec->add_option("--config", config_path, "config file for physics parameters");
  rec->add_option("--out", out_dir, "output directory");

  auto* cat = app.add_subcommand("catmap", "pixel-map period and half-period inversion check");
  cat->add_option("--n", cat_n, "image side length");
  cat->add_option("--image", image_path, "input PGM (P5); overrides --n");
  cat->add_option("--steps", cat_steps, "iterate the map and write the result image");
  cat->add_option("--out", out_path, "output PGM path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(init)) return cmd_init(config_path, out_dir);
    if (app.got_subcommand(runc)) return cmd_run(config_path, steps_override, out_dir, resume);
    if (app.got_subcommand(spec))
      return cmd_spectra(inputs, windows_arg, out_dir.empty() ? "." : out_dir);
    if (app.got_subcommand(rec))
      return cmd_recurrence(grids_arg, budget, config_path, out_dir.empty() ? "." : out_dir);
    if (app.got_subcommand(cat)) return cmd_catmap(cat_n, image_path, cat_steps, out_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
