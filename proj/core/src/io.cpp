#include "qlg/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qlg/errors.hpp"

namespace qlg {

namespace fs = std::filesystem;

namespace {
constexpr char kMagic[4] = {'Q', 'L', 'G', '1'};

void put_u64(std::string& buf, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  buf.append(b, 8);
}

void put_f64(std::string& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(buf, bits);
}

class Reader {
public:
  Reader(const std::string& bytes, const std::string& path) : bytes_(bytes), path_(path) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  void raw(char* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }
  bool exhausted() const { return pos_ == bytes_.size(); }

private:
  void need(std::size_t n) {
    if (pos_ + n > bytes_.size())
      throw IoError("truncated snapshot " + path_ + ": need " + std::to_string(n) + " bytes at " +
                    std::to_string(pos_) + ", file has " + std::to_string(bytes_.size()));
  }
  const std::string& bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};
} // namespace

void atomic_write(const std::string& path, const std::string& contents) {
  const fs::path target(path);
  const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
  const fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read error on " + path);
  return ss.str();
}

void save_snapshot(const SpinorField& f, const std::string& path, std::uint64_t timestep,
                   const SimParams& p) {
  std::string buf;
  buf.reserve(4 + 8 * 4 + 8 * 3 + 32 * f.grid.sites());
  buf.append(kMagic, 4);
  put_u64(buf, f.grid.nx);
  put_u64(buf, f.grid.ny);
  put_u64(buf, f.grid.nz);
  put_u64(buf, timestep);
  put_f64(buf, p.g);
  put_f64(buf, p.a);
  put_f64(buf, p.phase_scale);
  for (std::size_t i = 0; i < f.grid.sites(); ++i) {
    put_f64(buf, f.data[2 * i].real());
    put_f64(buf, f.data[2 * i].imag());
    put_f64(buf, f.data[2 * i + 1].real());
    put_f64(buf, f.data[2 * i + 1].imag());
  }
  atomic_write(path, buf);
}

Snapshot load_snapshot(const std::string& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    std::string found = bytes.substr(0, std::min<std::size_t>(4, bytes.size()));
    std::string hex;
    char b[8];
    for (unsigned char c : found) {
      std::snprintf(b, sizeof b, "%02x", c);
      hex += b;
    }
    throw IoError("bad snapshot magic in " + path + ": found bytes 0x" + hex + ", expected 'QLG1'");
  }
  Reader r(bytes, path);
  char magic[4];
  r.raw(magic, 4);
  Snapshot snap;
  GridSpec g;
  g.nx = r.u64();
  g.ny = r.u64();
  g.nz = r.u64();
  constexpr std::uint64_t kMaxDim = 1ull << 20;
  if (g.nx == 0 || g.ny == 0 || g.nz == 0 || g.nx > kMaxDim || g.ny > kMaxDim || g.nz > kMaxDim)
    throw IoError("unreasonable snapshot dims in " + path + ": " + std::to_string(g.nx) + "x" +
                  std::to_string(g.ny) + "x" + std::to_string(g.nz));
  const std::uint64_t sites = g.nx * g.ny * g.nz;
  if (sites > (1ull << 31))
    throw IoError("snapshot in " + path + " too large: " + std::to_string(sites) + " sites");
  snap.timestep = r.u64();
  snap.params.g = r.f64();
  snap.params.a = r.f64();
  snap.params.phase_scale = r.f64();
  snap.field.grid = g;
  snap.field.data.resize(2 * sites);
  for (std::uint64_t i = 0; i < sites; ++i) {
    const double ar = r.f64();
    const double ai = r.f64();
    const double br = r.f64();
    const double bi = r.f64();
    snap.field.data[2 * i] = cplx(ar, ai);
    snap.field.data[2 * i + 1] = cplx(br, bi);
  }
  if (!r.exhausted()) throw IoError("trailing bytes after payload in " + path);
  return snap;
}

namespace {
[[noreturn]] void config_fail(int lineno, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(lineno) + ": " + msg);
}

double parse_double(const std::string& tok, int lineno) {
  try {
    std::size_t idx = 0;
    const double v = std::stod(tok, &idx);
    if (idx != tok.size()) config_fail(lineno, "trailing characters in number '" + tok + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    config_fail(lineno, "malformed number '" + tok + "'");
  }
}

std::uint64_t parse_u64(const std::string& tok, int lineno) {
  try {
    std::size_t idx = 0;
    if (!tok.empty() && tok[0] == '-') config_fail(lineno, "negative count '" + tok + "'");
    const unsigned long long v = std::stoull(tok, &idx);
    if (idx != tok.size()) config_fail(lineno, "trailing characters in count '" + tok + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    config_fail(lineno, "malformed count '" + tok + "'");
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<FitWindow> parse_windows(const std::string& val, int lineno) {
  std::vector<FitWindow> out;
  std::istringstream in(val);
  std::string part;
  while (std::getline(in, part, ',')) {
    part = trim(part);
    const auto colon = part.find(':');
    if (colon == std::string::npos) config_fail(lineno, "fit window '" + part + "' is not lo:hi");
    FitWindow w;
    w.k_lo = static_cast<int>(parse_u64(trim(part.substr(0, colon)), lineno));
    w.k_hi = static_cast<int>(parse_u64(trim(part.substr(colon + 1)), lineno));
    out.push_back(w);
  }
  if (out.empty()) config_fail(lineno, "empty fit window list");
  return out;
}
} // namespace

void RunConfig::validate() const {
  grid.validate();
  params.validate();
  if (layout_file.empty() && layout != "single" && layout != "quad" && layout != "twelve" &&
      layout != "fortyeight")
    throw ConfigError("unknown layout preset '" + layout + "'");
  if (winding != 1 && winding != 2) throw ConfigError("winding must be 1 or 2");
  if (!(rescale > 0.0)) throw ConfigError("rescale must be > 0");
  if (hook_every == 0) throw ConfigError("hook_every must be positive");
  if (checkpoint_every == 0) throw ConfigError("checkpoint_every must be positive");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (!(fidelity_threshold > 0.0 && fidelity_threshold < 1.0))
    throw ConfigError("fidelity_threshold must be in (0,1)");
  if (!(core_fraction > 0.0 && core_fraction < 1.0))
    throw ConfigError("core_fraction must be in (0,1)");
  if (fit_windows.empty()) throw ConfigError("fit_windows must not be empty");
  for (std::size_t i = 0; i < fit_windows.size(); ++i) {
    if (fit_windows[i].k_lo < 1 || fit_windows[i].k_lo >= fit_windows[i].k_hi)
      throw ConfigError("fit window " + std::to_string(i) + " must satisfy 1 <= k_lo < k_hi");
    if (i > 0 && fit_windows[i].k_lo <= fit_windows[i - 1].k_hi)
      throw ConfigError("fit windows must be ordered and non-overlapping");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_fail(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) config_fail(lineno, "empty key");
    if (val.empty()) config_fail(lineno, "empty value for key '" + key + "'");

    if (key == "grid") {
      const auto toks = split_ws(val);
      if (toks.size() != 3)
        config_fail(lineno, "grid needs exactly 3 extents, got " + std::to_string(toks.size()));
      c.grid.nx = parse_u64(toks[0], lineno);
      c.grid.ny = parse_u64(toks[1], lineno);
      c.grid.nz = parse_u64(toks[2], lineno);
    } else if (key == "g") {
      c.params.g = parse_double(val, lineno);
    } else if (key == "a") {
      c.params.a = parse_double(val, lineno);
    } else if (key == "phase_scale") {
      c.params.phase_scale = parse_double(val, lineno);
    } else if (key == "layout") {
      c.layout = val;
    } else if (key == "layout_file") {
      c.layout_file = val;
    } else if (key == "winding") {
      c.winding = static_cast<int>(parse_u64(val, lineno));
    } else if (key == "rescale") {
      c.rescale = parse_double(val, lineno);
    } else if (key == "steps") {
      c.n_steps = parse_u64(val, lineno);
    } else if (key == "hook_every" || key == "steps_per_output") {
      c.hook_every = parse_u64(val, lineno);
      if (c.hook_every == 0) config_fail(lineno, "hook_every must be positive");
      c.params.steps_per_output = static_cast<int>(c.hook_every);
    } else if (key == "snapshot_every") {
      c.snapshot_every = parse_u64(val, lineno);
    } else if (key == "checkpoint_every") {
      c.checkpoint_every = parse_u64(val, lineno);
    } else if (key == "output_dir") {
      c.output_dir = val;
    } else if (key == "fidelity_threshold") {
      c.fidelity_threshold = parse_double(val, lineno);
    } else if (key == "core_fraction") {
      c.core_fraction = parse_double(val, lineno);
    } else if (key == "fit_windows") {
      c.fit_windows = parse_windows(val, lineno);
    } else {
      config_fail(lineno, "unknown key '" + key + "'");
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config invalid: ") + e.what());
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) { return parse_config(read_file(path)); }

std::uint64_t config_hash(const RunConfig& c) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%zu %zu %zu|%.17g %.17g %.17g|%s|%s|%d|%.17g", c.grid.nx,
                c.grid.ny, c.grid.nz, c.params.g, c.params.a, c.params.phase_scale,
                c.layout.c_str(), c.layout_file.c_str(), c.winding, c.rescale);
  std::uint64_t h = 1469598103934665603ull;
  for (const char* p = buf; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<VortexSpec> load_layout_file(const std::string& path) {
  return parse_layout(read_file(path));
}

namespace {
std::string fmt_double(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}
} // namespace

std::string trace_to_csv(const RecurrenceTrace& trace) {
  std::string out = "timestep,E_kin,E_qu,E_int,E_tot,E_kin_incomp,E_kin_comp,fidelity,"
                    "fidelity_inversion,core_voxels\n";
  for (const auto& s : trace.samples) {
    out += std::to_string(s.timestep);
    out += ',';
    out += fmt_double(s.energy.e_kin);
    out += ',';
    out += fmt_double(s.energy.e_qu);
    out += ',';
    out += fmt_double(s.energy.e_int);
    out += ',';
    out += fmt_double(s.energy.e_tot);
    out += ',';
    out += fmt_double(s.energy.e_kin_incomp);
    out += ',';
    out += fmt_double(s.energy.e_kin_comp);
    out += ',';
    out += fmt_double(s.fidelity);
    out += ',';
    out += fmt_double(s.fidelity_inversion);
    out += ',';
    out += std::to_string(s.core_voxels);
    out += '\n';
  }
  return out;
}

RecurrenceTrace trace_from_csv(const std::string& text) {
  RecurrenceTrace t;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty trace CSV");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(ls, tok, ',')) toks.push_back(tok);
    if (toks.size() != 10)
      throw IoError("trace CSV line " + std::to_string(lineno) + ": expected 10 columns, got " +
                    std::to_string(toks.size()));
    RecurrenceSample s;
    s.timestep = std::stoull(toks[0]);
    s.energy.timestep = s.timestep;
    s.energy.e_kin = std::stod(toks[1]);
    s.energy.e_qu = std::stod(toks[2]);
    s.energy.e_int = std::stod(toks[3]);
    s.energy.e_tot = std::stod(toks[4]);
    s.energy.e_kin_incomp = std::stod(toks[5]);
    s.energy.e_kin_comp = std::stod(toks[6]);
    s.fidelity = std::stod(toks[7]);
    s.fidelity_inversion = std::stod(toks[8]);
    s.core_voxels = std::stoull(toks[9]);
    t.samples.push_back(s);
  }
  return t;
}

std::string spectra_to_csv(const Spectrum& incomp, const Spectrum& comp, const Spectrum& quantum,
                           const Spectrum& total) {
  const std::size_t n = incomp.values.size();
  if (comp.values.size() != n || quantum.values.size() != n || total.values.size() != n)
    throw ConfigError("spectra CSV requires equal shell counts");
  std::string out = "k,E_incomp,E_comp,E_quantum,E_total_kin\n";
  for (std::size_t k = 0; k < n; ++k) {
    out += std::to_string(k);
    out += ',';
    out += fmt_double(incomp.values[k]);
    out += ',';
    out += fmt_double(comp.values[k]);
    out += ',';
    out += fmt_double(quantum.values[k]);
    out += ',';
    out += fmt_double(total.values[k]);
    out += '\n';
  }
  return out;
}

std::string fits_to_csv(const std::vector<FitRow>& rows) {
  std::string out = "kind,k_lo,k_hi,alpha_mean,alpha_std,n_snapshots\n";
  for (const auto& r : rows) {
    out += to_string(r.kind);
    out += ',';
    out += std::to_string(r.k_lo);
    out += ',';
    out += std::to_string(r.k_hi);
    out += ',';
    out += fmt_double(r.alpha_mean);
    out += ',';
    out += fmt_double(r.alpha_std);
    out += ',';
    out += std::to_string(r.n_snapshots);
    out += '\n';
  }
  return out;
}

void save_checkpoint(const std::string& dir, const SpinorField& f, std::uint64_t step,
                     const RunConfig& c) {
  const fs::path d(dir);
  save_snapshot(f, (d / "checkpoint.qlg").string(), step, c.params);
  char meta[128];
  std::snprintf(meta, sizeof meta, "config_hash=%016" PRIx64 "\nstep=%" PRIu64 "\n",
                config_hash(c), step);
  atomic_write((d / "checkpoint.meta").string(), meta);
}

bool has_checkpoint(const std::string& dir) {
  const fs::path d(dir);
  return fs::exists(d / "checkpoint.qlg") && fs::exists(d / "checkpoint.meta");
}

std::pair<Snapshot, CheckpointMeta> load_checkpoint(const std::string& dir, const RunConfig& c) {
  const fs::path d(dir);
  Snapshot snap = load_snapshot((d / "checkpoint.qlg").string());
  const std::string meta_text = read_file((d / "checkpoint.meta").string());
  CheckpointMeta meta;
  unsigned long long hash = 0, step = 0;
  if (std::sscanf(meta_text.c_str(), "config_hash=%llx\nstep=%llu", &hash, &step) != 2)
    throw IoError("malformed checkpoint meta in " + dir);
  meta.config_hash = hash;
  meta.step = step;
  if (meta.config_hash != config_hash(c))
    throw ConfigError("checkpoint in " + dir + " belongs to a different configuration");
  if (meta.step != snap.timestep)
    throw IoError("checkpoint meta step " + std::to_string(meta.step) +
                  " disagrees with snapshot timestep " + std::to_string(snap.timestep));
  return {std::move(snap), meta};
}

} // namespace qlg
