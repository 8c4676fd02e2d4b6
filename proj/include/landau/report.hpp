#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "landau/config.hpp"
#include "landau/ratio_report.hpp"
#include "landau/volterra.hpp"

namespace landau {
namespace io {

using ordered_json = nlohmann::ordered_json;

// All floating-point text output goes through one shortest-roundtrip format so
// serial and threaded runs produce byte-identical artifacts.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvWriter {
  std::ofstream out;

  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out(path, std::ios::binary) {
    if (!out) throw std::runtime_error("cannot open " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i)
      out << (i ? "," : "") << header[i];
    out << "\n";
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
      out << (i ? "," : "") << fmt(values[i]);
    out << "\n";
  }
};

inline void write_ratio_csv(const std::filesystem::path& path, const RatioReport& rep) {
  CsvWriter w(path, {"t", "x1", "x2", "x3", "lhs", "rhs", "ratio"});
  for (const auto& r : rep.rows)
    w.row({r.t, r.x[0], r.x[1], r.x[2], r.lhs, r.rhs, r.ratio});
}

inline ordered_json ratio_summary(const RatioReport& rep) {
  ordered_json j;
  j["rows"] = rep.rows.size();
  j["max_ratio"] = rep.max_ratio();
  const auto am = rep.argmax();
  j["argmax"] = {{"t", am.t}, {"x", {am.x[0], am.x[1], am.x[2]}}};
  j["trend"] = rep.trend();
  return j;
}

// FNV-1a over the file bytes; cheap content fingerprint for the manifest.
inline std::string digest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= std::uint8_t(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx", (unsigned long long)h);
  return hex;
}

inline void write_json(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << "\n";
}

// One manifest per run: what ran, with which resolved config, what it emitted.
// The wall-clock entry is the only field that varies between identical runs.
class RunManifest {
 public:
  RunManifest(std::filesystem::path out_dir, std::string subcommand, const Config& cfg)
      : dir_(std::move(out_dir)), sub_(std::move(subcommand)), cfg_(cfg) {}

  void add(const std::string& name) { artifacts_.push_back(name); }

  void write(double wall_seconds) const {
    ordered_json j;
    j["subcommand"] = sub_;
    j["version"] = "1.0.0";
    ordered_json c;
    for (const auto& [k, v] : cfg_.dump()) c[k] = v;
    j["config"] = c;
    j["wall_seconds"] = wall_seconds;
    ordered_json arts = ordered_json::array();
    for (const auto& a : artifacts_) {
      arts.push_back({{"name", a}, {"digest", digest_file(dir_ / a)}});
    }
    j["artifacts"] = arts;
    write_json(dir_ / "manifest.json", j);
  }

 private:
  std::filesystem::path dir_;
  std::string sub_;
  Config cfg_;
  std::vector<std::string> artifacts_;
};

// Mode tracks: raw little-endian f64 arrays plus a JSON sidecar describing the
// layout. Per mode, per time point: Re source, Im source, Re rho, Im rho.
inline void write_tracks(const std::filesystem::path& dir, const std::string& stem,
                         const TrackSet& ts) {
  const int K = ts.grid.size();
  const std::size_t M = ts.xi.modes.size();
  std::ofstream bin(dir / (stem + ".bin"), std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open track binary");
  const bool has_src = ts.source.size() == M;
  for (std::size_t m = 0; m < M; ++m) {
    std::vector<double> row(4 * K, 0.0);
    for (int k = 0; k < K; ++k) {
      if (has_src) {
        row[4 * k] = ts.source[m][k].real();
        row[4 * k + 1] = ts.source[m][k].imag();
      }
      row[4 * k + 2] = ts.rho[m][k].real();
      row[4 * k + 3] = ts.rho[m][k].imag();
    }
    bin.write(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(double));
  }
  bin.close();

  ordered_json j;
  j["format"] = "landau-tracks-v1";
  j["dt"] = ts.grid.dt;
  j["n_steps"] = ts.grid.n_steps;
  j["layout"] = "per mode, per time point: re_source, im_source, re_rho, im_rho (f64 LE)";
  ordered_json modes = ordered_json::array();
  for (const auto& md : ts.xi.modes)
    modes.push_back({{"xi", {md.xi[0], md.xi[1], md.xi[2]}}, {"weight", md.weight}});
  j["modes"] = modes;
  write_json(dir / (stem + ".json"), j);
}

inline TrackSet read_tracks(const std::filesystem::path& dir, const std::string& stem) {
  std::ifstream meta(dir / (stem + ".json"));
  if (!meta) throw std::runtime_error("cannot open track sidecar");
  ordered_json j;
  meta >> j;
  if (j.value("format", "") != "landau-tracks-v1")
    throw std::runtime_error("unrecognized track format");
  TrackSet ts;
  ts.grid.dt = j.at("dt").get<double>();
  ts.grid.n_steps = j.at("n_steps").get<int>();
  for (const auto& m : j.at("modes")) {
    Mode md;
    const auto& xi = m.at("xi");
    md.xi = {xi[0].get<double>(), xi[1].get<double>(), xi[2].get<double>()};
    md.lambda = norm(md.xi);
    md.weight = m.at("weight").get<double>();
    ts.xi.modes.push_back(md);
  }
  const int K = ts.grid.size();
  const std::size_t M = ts.xi.modes.size();
  std::ifstream bin(dir / (stem + ".bin"), std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open track binary");
  ts.source.resize(M);
  ts.rho.resize(M);
  std::vector<double> row(4 * K);
  for (std::size_t m = 0; m < M; ++m) {
    if (!bin.read(reinterpret_cast<char*>(row.data()), row.size() * sizeof(double)))
      throw std::runtime_error("track binary truncated");
    ts.source[m].resize(K);
    ts.rho[m].resize(K);
    for (int k = 0; k < K; ++k) {
      ts.source[m][k] = Complex(row[4 * k], row[4 * k + 1]);
      ts.rho[m][k] = Complex(row[4 * k + 2], row[4 * k + 3]);
    }
  }
  return ts;
}

}  // namespace io
}  // namespace landau
