#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace landau {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Run configuration. Defaults are the desk-scale baseline; everything can be
// overridden from a sectioned key=value file or --set section.key=value flags.
struct Config {
  // model
  double kappa0 = 0.05;         // small decay-exponent parameter, 0 < kappa0 < 1
  double epsilon = 1e-3;        // perturbation amplitude
  std::string family = "gaussian-odd";  // gaussian-odd | polyweight

  // time discretization
  double T_horizon = 20.0;
  double dt = 0.05;

  // xi grid: log-spaced radial levels x 26 directions
  double xi_min = 0.02;
  double xi_max = 6.0;
  int xi_levels = 32;

  // quadrature / sampling
  int vel_nodes = 48;           // tangent-mapped Gauss-Legendre nodes per axis
  int mc_samples = 1000;
  std::uint64_t seed = 20240817;

  // nonlinear loop
  int max_outer = 10;
  double outer_tol = 1e-10;
  double picard_tol = 1e-10;
  int picard_max_iter = 50;

  int threads = 1;
  std::string out_dir = "out";

  void validate() const {
    if (!(kappa0 > 0 && kappa0 < 1)) throw ConfigError("kappa0 must be in (0,1)");
    if (!(dt > 0)) throw ConfigError("dt must be positive");
    if (!(T_horizon >= dt)) throw ConfigError("T_horizon must be >= dt");
    if (mc_samples < 1) throw ConfigError("mc_samples must be >= 1");
    if (xi_levels < 2) throw ConfigError("xi_levels must be >= 2");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (family != "gaussian-odd" && family != "polyweight")
      throw ConfigError("unknown source family: " + family);
  }

  void set(const std::string& key, const std::string& value) {
    auto d = [&] { return std::stod(value); };
    auto i = [&] { return std::stoi(value); };
    if (key == "model.kappa0") kappa0 = d();
    else if (key == "source.epsilon") epsilon = d();
    else if (key == "source.family") family = value;
    else if (key == "time.T") T_horizon = d();
    else if (key == "time.dt") dt = d();
    else if (key == "xi.min") xi_min = d();
    else if (key == "xi.max") xi_max = d();
    else if (key == "xi.levels") xi_levels = i();
    else if (key == "quad.vel_nodes") vel_nodes = i();
    else if (key == "mc.samples") mc_samples = i();
    else if (key == "mc.seed") seed = std::stoull(value);
    else if (key == "nonlinear.max_outer") max_outer = i();
    else if (key == "nonlinear.tol") outer_tol = d();
    else if (key == "picard.tol") picard_tol = d();
    else if (key == "picard.max_iter") picard_max_iter = i();
    else if (key == "run.threads") threads = i();
    else if (key == "run.out_dir") out_dir = value;
    else throw ConfigError("unknown config key: " + key);
  }

  // Sectioned key-value text:  [section] / key = value, '#' comments.
  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    Config cfg;
    std::string line, section;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[' && line.back() == ']') {
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("bad config line: " + line);
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      cfg.set(section.empty() ? key : section + "." + key, value);
    }
    cfg.validate();
    return cfg;
  }

  // Canonical dump in key order, used by the run manifest.
  std::map<std::string, std::string> dump() const {
    std::map<std::string, std::string> m;
    auto put = [&](const std::string& k, auto v) {
      std::ostringstream os;
      os.precision(17);
      os << v;
      m[k] = os.str();
    };
    put("model.kappa0", kappa0);
    put("source.epsilon", epsilon);
    m["source.family"] = family;
    put("time.T", T_horizon);
    put("time.dt", dt);
    put("xi.min", xi_min);
    put("xi.max", xi_max);
    put("xi.levels", xi_levels);
    put("quad.vel_nodes", vel_nodes);
    put("mc.samples", mc_samples);
    put("mc.seed", seed);
    put("nonlinear.max_outer", max_outer);
    put("nonlinear.tol", outer_tol);
    put("picard.tol", picard_tol);
    put("picard.max_iter", picard_max_iter);
    put("run.threads", threads);
    m["run.out_dir"] = out_dir;
    return m;
  }
};

}  // namespace landau
