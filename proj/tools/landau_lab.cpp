// landau-lab: command-line front end for the numerical laboratory. Every
// subcommand resolves a Config, runs one pipeline, and drops its artifacts
// plus a manifest into the output directory.
//
// Exit codes: 0 success, 1 verification failure (a checked ratio or tolerance
// breached), 2 usage error, 3 numerical failure (quadrature or Picard
// divergence, non-contraction).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "landau/characteristics.hpp"
#include "landau/config.hpp"
#include "landau/equilibrium.hpp"
#include "landau/estimates.hpp"
#include "landau/kernels.hpp"
#include "landau/nonlinear.hpp"
#include "landau/report.hpp"
#include "landau/rng.hpp"
#include "landau/sources.hpp"
#include "landau/volterra.hpp"

namespace fs = std::filesystem;
using namespace landau;
using landau::io::ordered_json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "config file (sectioned key=value)");
  cmd->add_option("--set", a.overrides, "override, section.key=value")->take_all();
  cmd->add_option("--out", a.out_dir, "output directory");
  cmd->add_option("--seed", a.seed, "RNG seed override")->each([&](const std::string&) {
    a.seed_set = true;
  });
  cmd->add_option("--threads", a.threads, "worker thread cap");
}

Config resolve_config(const CommonArgs& a) {
  Config cfg = a.config_path.empty() ? Config{} : Config::from_file(a.config_path);
  for (const auto& ov : a.overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos) throw ConfigError("bad --set (want key=value): " + ov);
    cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
  }
  if (a.seed_set) cfg.seed = a.seed;
  if (a.threads > 0) cfg.threads = a.threads;
  if (!a.out_dir.empty()) {
    cfg.out_dir = a.out_dir;
  } else if (const char* env = std::getenv("LANDAU_LAB_OUT"); env && *env) {
    cfg.out_dir = env;
  }
  cfg.validate();
  return cfg;
}

fs::path prepare_out(const Config& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

// -------- equilibrium-check --------

int run_equilibrium(const Config& cfg) {
  Timer timer;
  const fs::path dir = prepare_out(cfg);
  io::RunManifest man(dir, "equilibrium-check", cfg);

  const double mass = equilibrium::mu_fourier_quadrature(0.0);
  double max_ft_err = 0;
  ordered_json ft = ordered_json::array();
  for (double e : {0.5, 1.0, 2.0}) {
    const double q = equilibrium::mu_fourier_quadrature(e);
    const double err = std::abs(q - std::exp(-e));
    max_ft_err = std::max(max_ft_err, err);
    ft.push_back({{"eta", e}, {"quadrature", q}, {"closed", std::exp(-e)}, {"error", err}});
  }
  auto rng = task_rng(cfg.seed, 0xe9);
  std::uniform_real_distribution<double> u(-4.0, 4.0), us(0.2, 5.0);
  double max_scale_err = 0;
  for (int i = 0; i < 1000; ++i) {
    const double s = us(rng);
    const Vec3 x{u(rng), u(rng), u(rng)};
    const double a = kernels::G(s, x);
    const double b = equilibrium::scaled_mu(s, x);
    max_scale_err = std::max(max_scale_err, std::abs(a - b) / std::abs(b));
  }
  ordered_json j;
  j["mass"] = mass;
  j["mass_error"] = std::abs(mass - 1.0);
  j["fourier_checks"] = ft;
  j["scaled_identity_max_rel_error"] = max_scale_err;
  const bool ok = std::abs(mass - 1.0) <= 1e-8 && max_ft_err <= 1e-6 && max_scale_err <= 1e-12;
  j["pass"] = ok;
  io::write_json(dir / "equilibrium.json", j);
  man.add("equilibrium.json");
  man.write(timer.seconds());
  return ok ? 0 : 1;
}

// -------- kernel-decay --------

int run_kernel_decay(const Config& cfg, const std::string& which, int j1, int j2,
                     const std::string& samples) {
  Timer timer;
  if (samples != "builtin") throw ConfigError("only builtin samples are available");
  kernels::DecayStyle style;
  if (which == "glow-riesz") style = kernels::DecayStyle::LowRiesz;
  else if (which == "glow") style = kernels::DecayStyle::Low;
  else if (which == "ghigh") style = kernels::DecayStyle::HighRiesz;
  else throw ConfigError("unknown --which: " + which);

  const fs::path dir = prepare_out(cfg);
  io::RunManifest man(dir, "kernel-decay", cfg);
  auto rep = kernels::verify_kernel_decay(kernels::builtin_decay_samples(), j1, j2, style);
  const std::string name =
      "kernel_decay_" + which + "_" + std::to_string(j1) + std::to_string(j2) + ".csv";
  io::write_ratio_csv(dir / name, rep);
  man.add(name);
  ordered_json j = io::ratio_summary(rep);
  j["which"] = which;
  j["j1"] = j1;
  j["j2"] = j2;
  io::write_json(dir / "kernel_decay_summary.json", j);
  man.add("kernel_decay_summary.json");
  man.write(timer.seconds());
  return std::isfinite(rep.max_ratio()) ? 0 : 1;
}

// -------- solve-linear --------

void write_fields_csv(const fs::path& path, const FieldEvaluator& ev) {
  io::CsvWriter w(path, {"t", "x1", "x2", "x3", "rho", "E1", "E2", "E3", "gradE_norm"});
  const double T = ev.T();
  const Vec3 xs[] = {{0, 0, 0}, {1, 0, 0}, {4, 0, 0}, {0, 2, 2}};
  const int nt = 120;
  for (int i = 0; i <= nt; ++i) {
    const double t = T * i / nt;
    for (const auto& x : xs) {
      const Vec3 E = ev.E(t, x);
      w.row({t, x[0], x[1], x[2], ev.rho(t, x), E[0], E[1], E[2], max_abs(ev.gradE(t, x))});
    }
  }
}

int run_solve_linear(const Config& cfg, const std::string& tracks_dir,
                     const std::string& fields_csv) {
  Timer timer;
  const fs::path dir = prepare_out(cfg);
  io::RunManifest man(dir, "solve-linear", cfg);
  auto data = make_initial_data(cfg.family, cfg.epsilon);
  auto ts = solve_linear(*data, cfg);
  const fs::path tdir = tracks_dir.empty() ? dir : fs::path(tracks_dir);
  fs::create_directories(tdir);
  io::write_tracks(tdir, "tracks", ts);
  if (tdir == dir) {
    man.add("tracks.bin");
    man.add("tracks.json");
  }
  FieldEvaluator ev(ts);
  const std::string fname = fields_csv.empty() ? "fields.csv" : fields_csv;
  write_fields_csv(dir / fname, ev);
  man.add(fname);
  man.write(timer.seconds());
  return 0;
}

// -------- solve-nonlinear --------

int run_solve_nonlinear(const Config& cfg) {
  Timer timer;
  const fs::path dir = prepare_out(cfg);
  io::RunManifest man(dir, "solve-nonlinear", cfg);
  auto data = make_initial_data(cfg.family, cfg.epsilon);
  auto res = solve_nonlinear(*data, cfg);
  io::write_tracks(dir, "tracks", res.tracks);
  man.add("tracks.bin");
  man.add("tracks.json");
  ordered_json j;
  j["iterations"] = res.trace.iterations;
  j["converged"] = res.trace.converged;
  j["diffs"] = res.trace.diffs;
  j["ratios"] = res.trace.ratios();
  j["norm_1T"] = res.trace.norm1T;
  io::write_json(dir / "trace.json", j);
  man.add("trace.json");
  FieldEvaluator ev(res.tracks);
  write_fields_csv(dir / "fields.csv", ev);
  man.add("fields.csv");
  man.write(timer.seconds());
  return res.trace.converged ? 0 : 1;
}

// -------- characteristics-check --------

FieldHandle synthetic_field() {
  return {[](double t, const Vec3& x) {
            const double d = 1 + norm2(x);
            return (1e-2 * std::exp(-t) / (d * d)) * Vec3{1, 0, 0};
          },
          1e30};
}

std::vector<CharSample> builtin_char_samples(double t_max) {
  std::vector<CharSample> out;
  const Vec3 xs[] = {{0, 0, 0}, {2, 0, 0}, {-1, 3, 0}, {0, 0, 8}};
  const Vec3 vs[] = {{0, 0, 0}, {0.5, 0, 0}, {-1, 1, 1}};
  for (double s : {0.0, 1.0, 2.0, 4.0, 8.0})
    for (double dt : {1.0, 4.0, 10.0}) {
      const double t = s + dt;
      if (t > t_max) continue;
      for (const auto& x : xs)
        for (const auto& v : vs) out.push_back({s, t, x, v});
    }
  return out;
}

int run_characteristics(const Config& cfg, const std::string& field_kind,
                        const std::string& run_dir, const std::string& which) {
  Timer timer;
  const fs::path dir = prepare_out(cfg);
  io::RunManifest man(dir, "characteristics-check", cfg);

  FieldHandle field;
  TrackSet ts;
  FieldEvaluator* ev = nullptr;
  FieldEvaluator ev_store{ts};
  if (field_kind == "synthetic") {
    field = synthetic_field();
  } else if (field_kind == "linear-run") {
    if (run_dir.empty()) throw ConfigError("--run-dir required with --field linear-run");
    ts = io::read_tracks(run_dir, "tracks");
    ev_store = FieldEvaluator(ts);
    ev = &ev_store;
    field = track_field(*ev);
  } else {
    throw ConfigError("unknown --field: " + field_kind);
  }

  CharBoundOptions opts;
  opts.dt = cfg.dt;
  opts.tol = std::min(cfg.picard_tol, 1e-11);
  opts.max_iter = cfg.picard_max_iter;
  opts.kappa0 = cfg.kappa0;
  // measured monitor: weighted sup of the field over the sample set
  double M = 0;
  for (const auto& s : spacetime_samples({0, 1, 2, 4, 8, 16}, 32.0, 8)) {
    if (s.t > field.T) continue;
    M = std::max(M, std::pow(weight(s.t, s.x), 3.0 - cfg.kappa0) * max_abs(field.E(s.t, s.x)));
  }
  opts.M = M > 0 ? M : 1.0;

  const double t_max = std::min(field.T, 18.0);
  auto samples = builtin_char_samples(t_max);
  int rc = 0;
  if (which == "identity") {
    io::CsvWriter w(dir / "char_identity.csv",
                    {"s", "t", "x1", "x2", "x3", "v1", "v2", "v3", "residual", "bound"});
    double worst = 0;
    for (const auto& c : samples) {
      double res = 0;
      psi_map(field, c.s, c.t, c.x, c.v, opts.dt, opts.tol, opts.max_iter, &res);
      const double bound = opts.tol * (c.t - c.s);
      worst = std::max(worst, res / bound);
      w.row({c.s, c.t, c.x[0], c.x[1], c.x[2], c.v[0], c.v[1], c.v[2], res, bound});
    }
    man.add("char_identity.csv");
    rc = worst <= 1.0 ? 0 : 1;
  } else {
    CharBound cb;
    if (which == "a9") cb = CharBound::YDeriv;
    else if (which == "a10") cb = CharBound::WDeriv;
    else if (which == "a13") cb = CharBound::PsiShift;
    else if (which == "a15") cb = CharBound::PsiJacobian;
    else throw ConfigError("unknown --which: " + which);
    auto rep = verify_char_bounds(field, samples, cb, opts);
    const std::string name = "char_" + which + ".csv";
    io::write_ratio_csv(dir / name, rep);
    man.add(name);
    ordered_json j = io::ratio_summary(rep);
    j["which"] = which;
    j["monitor_M"] = opts.M;
    io::write_json(dir / "char_summary.json", j);
    man.add("char_summary.json");
    rc = std::isfinite(rep.max_ratio()) ? 0 : 1;
  }
  man.write(timer.seconds());
  return rc;
}

// -------- lemmas --------

int run_lemmas(const Config& cfg, const std::string& which, const std::string& samples) {
  Timer timer;
  if (samples != "builtin") throw ConfigError("only builtin samples are available");
  const fs::path dir = prepare_out(cfg);
  io::RunManifest man(dir, "lemmas", cfg);
  ordered_json summary;
  int rc = 0;
  auto finite_or_fail = [&](const RatioReport& rep) {
    if (!std::isfinite(rep.max_ratio())) rc = 1;
  };

  if (which == "a8" || which == "all") {
    RatioReport rep;
    io::CsvWriter w(dir / "lemma_a8.csv",
                    {"beta1", "beta2", "t", "x1", "lhs", "rhs", "ratio"});
    const double betas[][2] = {{5, 3}, {4, 4}, {5, 4}};
    for (auto [b1, b2] : betas)
      for (double t : {0.0, 1.0, 4.0, 10.0})
        for (double r : {0.0, 4.0, 20.0}) {
          auto c = estimates::lemma_a8_check(b1, b2, t, {r, 0, 0});
          w.row({b1, b2, t, r, c.lhs, c.rhs, c.ratio});
          rep.rows.push_back({t, {r, 0, 0}, c.lhs, c.rhs, c.ratio});
        }
    man.add("lemma_a8.csv");
    summary["a8"] = io::ratio_summary(rep);
    finite_or_fail(rep);
  }
  if (which == "a3" || which == "all") {
    RatioReport rep;
    io::CsvWriter w(dir / "lemma_a3.csv", {"n", "t", "x1", "lhs", "rhs", "ratio"});
    for (double n : {1.0, 2.0})
      for (double t : {0.0, 1.0, 10.0, 100.0})
        for (double r : {0.0, 5.0, 50.0}) {
          auto c = estimates::lemma_a3_check(n, t, {r, 0, 0});
          w.row({n, t, r, c.lhs, c.rhs, c.ratio});
          rep.rows.push_back({t, {r, 0, 0}, c.lhs, c.rhs, c.ratio});
        }
    man.add("lemma_a3.csv");
    summary["a3"] = io::ratio_summary(rep);
    finite_or_fail(rep);
  }
  if (which == "A" || which == "all") {
    estimates::AOptions ao;
    ao.seed = cfg.seed;
    ao.v_samples = cfg.mc_samples * 4;
    std::vector<SpaceTimeSample> sts;
    for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) sts.push_back({t, {0, 0, 0}});
    for (double r : {2.0, 4.0, 8.0, 16.0, 32.0}) sts.push_back({1.0, {r, 0, 0}});
    sts.push_back({4.0, {8.0, 0, 0}});
    auto rep = estimates::lemma_42_check(sts, cfg.kappa0, ao);
    io::write_ratio_csv(dir / "lemma_A_low.csv", rep.low);
    io::write_ratio_csv(dir / "lemma_A_high.csv", rep.high);
    man.add("lemma_A_low.csv");
    man.add("lemma_A_high.csv");
    summary["A_low"] = io::ratio_summary(rep.low);
    summary["A_high"] = io::ratio_summary(rep.high);
    finite_or_fail(rep.low);
    finite_or_fail(rep.high);
  }
  if (which == "a1" || which == "all") {
    auto data = make_initial_data(cfg.family, cfg.epsilon);
    TrackSet base;
    base.grid = TimeGrid::make(cfg.T_horizon, cfg.dt);
    base.xi = ModeGrid::make(cfg.xi_min, cfg.xi_max, cfg.xi_levels);
    base.rho.assign(base.xi.modes.size(),
                    std::vector<Complex>(base.grid.size(), Complex(0)));
    auto dec = decompose_rho(base, *data);
    const double f0b = f0_norm(*data);
    std::vector<SpaceTimeSample> sts;
    for (double t : {0.0, 2.0, 5.0, 10.0, 20.0})
      for (double r : {0.0, 2.0, 8.0})
        if (t <= base.grid.T()) sts.push_back({t, {r, 0, 0}});
    RatioReport all;
    io::CsvWriter w(dir / "lemma_a1.csv",
                    {"part", "n1", "n2", "t", "x1", "lhs", "rhs", "ratio"});
    for (int part = 1; part <= 2; ++part) {
      const TrackSet& sing = part == 1 ? dec.sing1 : dec.sing2;
      const int orders[][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
      for (auto [n1, n2] : orders) {
        auto rep = estimates::singular_decay_check(sing, f0b, sts, n1, n2);
        for (const auto& r : rep.rows) {
          w.row({double(part), double(n1), double(n2), r.t, r.x[0], r.lhs, r.rhs, r.ratio});
          all.rows.push_back(r);
        }
      }
    }
    man.add("lemma_a1.csv");
    summary["a1"] = io::ratio_summary(all);
    finite_or_fail(all);
  }
  if (summary.empty()) throw ConfigError("unknown --which: " + which);
  io::write_json(dir / "lemmas_summary.json", summary);
  man.add("lemmas_summary.json");
  man.write(timer.seconds());
  return rc;
}

// -------- scatter --------

int run_scatter(const Config& cfg, const std::string& run_dir, std::vector<double> t_list) {
  Timer timer;
  const fs::path dir = prepare_out(cfg);
  io::RunManifest man(dir, "scatter", cfg);
  auto data = make_initial_data(cfg.family, cfg.epsilon);
  TrackSet ts;
  if (!run_dir.empty()) {
    ts = io::read_tracks(run_dir, "tracks");
  } else {
    ts = solve_linear(*data, cfg);
  }
  FieldEvaluator ev(ts);
  FieldHandle field = track_field(ev);
  if (t_list.empty()) t_list = {5.0, 10.0, 20.0};
  PathOpts opts = PathOpts::from(cfg);
  auto prof = scattering_profile(*data, field, t_list, builtin_scatter_samples(), opts,
                                 cfg.threads);
  io::CsvWriter w(dir / "scatter.csv", {"t", "sup_diff", "fitted_exponent"});
  for (const auto& r : prof.rows) w.row({r.t, r.sup_diff, prof.fitted_exponent});
  man.add("scatter.csv");
  man.write(timer.seconds());
  return 0;
}

// -------- report --------

int run_report(const Config& cfg, const std::string& in_dir) {
  Timer timer;
  const fs::path in = in_dir.empty() ? fs::path(cfg.out_dir) : fs::path(in_dir);
  std::vector<fs::path> manifests;
  if (fs::exists(in))
    for (const auto& e : fs::recursive_directory_iterator(in))
      if (e.is_regular_file() && e.path().filename() == "manifest.json")
        manifests.push_back(e.path());
  std::sort(manifests.begin(), manifests.end());
  if (manifests.empty()) {
    std::cerr << "report: no manifests under " << in << "\n";
    return 2;
  }
  ordered_json merged = ordered_json::array();
  std::string text;
  for (const auto& mp : manifests) {
    std::ifstream f(mp);
    ordered_json m;
    try {
      f >> m;
    } catch (const std::exception&) {
      std::cerr << "report: corrupt manifest " << mp << "\n";
      return 2;
    }
    const fs::path base = mp.parent_path();
    for (const auto& art : m.value("artifacts", ordered_json::array())) {
      const std::string name = art.value("name", "");
      const fs::path ap = base / name;
      if (!fs::exists(ap) || io::digest_file(ap) != art.value("digest", "")) {
        std::cerr << "report: digest mismatch for " << ap << "\n";
        return 2;
      }
    }
    ordered_json entry;
    entry["dir"] = base.lexically_relative(in).string();
    entry["subcommand"] = m.value("subcommand", "");
    entry["artifacts"] = m.value("artifacts", ordered_json::array());
    // pull in any summary artifacts whole
    for (const auto& art : m.value("artifacts", ordered_json::array())) {
      const std::string name = art.value("name", "");
      if (name.size() > 5 && name.substr(name.size() - 5) == ".json") {
        std::ifstream sf(base / name);
        ordered_json s;
        sf >> s;
        entry["summaries"][name] = s;
      }
    }
    merged.push_back(entry);
    text += m.value("subcommand", "?") + " (" + entry["dir"].get<std::string>() + "): " +
            std::to_string(entry["artifacts"].size()) + " artifacts, digests verified\n";
  }
  const fs::path dir = prepare_out(cfg);
  io::write_json(dir / "report.json", merged);
  std::ofstream txt(dir / "report.txt", std::ios::binary);
  txt << text;
  Timer t2;
  (void)t2;
  (void)timer;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for Landau damping near the Poisson equilibrium"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string which = "glow-riesz", samples = "builtin";
  int j1 = 0, j2 = 0;
  std::string tracks_dir, fields_csv, field_kind = "synthetic", run_dir, lemmas_which = "all",
              char_which = "identity", report_dir;
  std::vector<double> t_list;

  auto* eq = app.add_subcommand("equilibrium-check", "equilibrium identities and transforms");
  add_common(eq, common);

  auto* kd = app.add_subcommand("kernel-decay", "kernel decay ratio sweeps");
  add_common(kd, common);
  kd->add_option("--which", which, "glow-riesz | glow | ghigh");
  kd->add_option("--j1", j1, "time-derivative order");
  kd->add_option("--j2", j2, "space-derivative order");
  kd->add_option("--samples", samples, "builtin");

  auto* sl = app.add_subcommand("solve-linear", "linearized density equation on the mode grid");
  add_common(sl, common);
  sl->add_option("--emit-tracks", tracks_dir, "directory for track binaries");
  sl->add_option("--emit-fields", fields_csv, "fields CSV name");

  auto* sn = app.add_subcommand("solve-nonlinear", "outer fixed-point loop");
  add_common(sn, common);

  auto* cc = app.add_subcommand("characteristics-check", "characteristic bound monitors");
  add_common(cc, common);
  cc->add_option("--field", field_kind, "synthetic | linear-run");
  cc->add_option("--run-dir", run_dir, "track directory for --field linear-run");
  cc->add_option("--which", char_which, "a9 | a10 | a13 | a15 | identity");

  auto* lm = app.add_subcommand("lemmas", "integral estimate verification");
  add_common(lm, common);
  lm->add_option("--which", lemmas_which, "a8 | a3 | a1 | A | all");
  lm->add_option("--samples", samples, "builtin");

  auto* sc = app.add_subcommand("scatter", "scattering profile extraction");
  add_common(sc, common);
  sc->add_option("--run-dir", run_dir, "track directory of a prior solve");
  sc->add_option("--t-list", t_list, "comparison times")->take_all();

  auto* rp = app.add_subcommand("report", "merge manifests into one summary");
  add_common(rp, common);
  rp->add_option("--in", report_dir, "directory holding prior runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const Config cfg = resolve_config(common);
    if (eq->parsed()) return run_equilibrium(cfg);
    if (kd->parsed()) return run_kernel_decay(cfg, which, j1, j2, samples);
    if (sl->parsed()) return run_solve_linear(cfg, tracks_dir, fields_csv);
    if (sn->parsed()) return run_solve_nonlinear(cfg);
    if (cc->parsed()) return run_characteristics(cfg, field_kind, run_dir, char_which);
    if (lm->parsed()) return run_lemmas(cfg, lemmas_which, samples);
    if (sc->parsed()) return run_scatter(cfg, run_dir, t_list);
    if (rp->parsed()) return run_report(cfg, report_dir);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << " (achieved " << e.achieved << ")\n";
    return 3;
  } catch (const PicardError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
