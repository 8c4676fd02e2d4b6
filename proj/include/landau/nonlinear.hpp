#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "landau/characteristics.hpp"
#include "landau/config.hpp"
#include "landau/equilibrium.hpp"
#include "landau/estimates.hpp"
#include "landau/norms.hpp"
#include "landau/parallel.hpp"
#include "landau/rng.hpp"
#include "landau/sources.hpp"
#include "landau/volterra.hpp"

namespace landau {

struct PathOpts {
  double dt = 0.05;
  double tol = 1e-10;
  int max_iter = 50;

  static PathOpts from(const Config& cfg) {
    return {cfg.dt, cfg.picard_tol, cfg.picard_max_iter};
  }
};

inline FieldHandle zero_field(double T = 1e30) {
  return {[](double, const Vec3&) { return Vec3{0, 0, 0}; }, T};
}

inline FieldHandle track_field(const FieldEvaluator& ev) {
  return {[&ev](double t, const Vec3& x) { return ev.E(t, x); }, ev.T()};
}

// Both perturbative integrands at (t,x,v) from one converged path. In chart
// coordinates a = x - t v the trajectory starts at a and the free comparison
// positions are a + s v = x - (t-s) v.
struct IntegrandPair {
  double I = 0;  // f0 at the backward foot
  double R = 0;  // s-integral of the field-correction difference
};

inline IntegrandPair moment_integrands(const InitialData& data, const FieldHandle& field,
                                       double t, const Vec3& x, const Vec3& v,
                                       const PathOpts& opts) {
  const Vec3 a = x - t * v;
  auto p = picard_path(field, 0.0, t, a, v, opts.dt, opts.tol, opts.max_iter);
  IntegrandPair out;
  out.I = data.f0(p.pos(0), v + p.W[0]);
  const int n = p.n();
  if (n == 0) return out;
  double acc = 0;
  for (int i = 0; i <= n; ++i) {
    const double s = p.tau(i);
    const double term = dot(field.E(s, a + s * v), equilibrium::grad_mu(v)) -
                        dot(field.E(s, p.pos(i)), equilibrium::grad_mu(v + p.W[i]));
    acc += (i == 0 || i == n) ? 0.5 * term : term;
  }
  out.R = p.h * acc;
  return out;
}

inline double moment_integrand_I(const InitialData& data, const FieldHandle& field, double t,
                                 const Vec3& x, const Vec3& v, const PathOpts& opts) {
  return moment_integrands(data, field, t, x, v, opts).I;
}

inline double moment_integrand_R(const InitialData& data, const FieldHandle& field, double t,
                                 const Vec3& x, const Vec3& v, const PathOpts& opts) {
  return moment_integrands(data, field, t, x, v, opts).R;
}

// Moments of the perturbative decomposition against 1, v, v (x) v, with the
// initial-data and field-correction contributions kept separate.
struct MomentEntry {
  double I0 = 0, C0 = 0;
  Vec3 I1{0, 0, 0}, C1{0, 0, 0};
  Mat3 I2{}, C2{};

  double R0() const { return I0 + C0; }
  Vec3 R1() const { return I1 + C1; }
  Mat3 R2() const { return I2 + C2; }
};

struct MomentField {
  std::vector<SpaceTimeSample> samples;
  std::vector<MomentEntry> entries;
};

// v-integration by tangent-mapped tensor Gauss, vel_nodes per axis.
inline MomentEntry compute_moment_entry(const InitialData& data, const FieldHandle& field,
                                        double t, const Vec3& x, int vel_nodes,
                                        const PathOpts& opts) {
  const auto& r = tan_rule(vel_nodes);
  MomentEntry e;
  for (int i = 0; i < vel_nodes; ++i)
    for (int j = 0; j < vel_nodes; ++j)
      for (int k = 0; k < vel_nodes; ++k) {
        const Vec3 v{r.x[i], r.x[j], r.x[k]};
        const double w = r.w[i] * r.w[j] * r.w[k];
        const auto pair = moment_integrands(data, field, t, x, v, opts);
        e.I0 += w * pair.I;
        e.C0 += w * pair.R;
        e.I1 += (w * pair.I) * v;
        e.C1 += (w * pair.R) * v;
        const Mat3 vv = outer(v, v);
        for (int q = 0; q < 9; ++q) {
          e.I2[q] += w * pair.I * vv[q];
          e.C2[q] += w * pair.R * vv[q];
        }
      }
  return e;
}

inline MomentField compute_moments(const InitialData& data, const FieldHandle& field,
                                   const std::vector<SpaceTimeSample>& samples, int vel_nodes,
                                   const PathOpts& opts, int threads = 1) {
  MomentField mf;
  mf.samples = samples;
  mf.entries.resize(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    mf.entries[i] = compute_moment_entry(data, field, samples[i].t, samples[i].x, vel_nodes, opts);
  });
  return mf;
}

// Moment time series on a regular (t, x-lattice) grid for differencing.
struct MomentGrid {
  std::vector<double> times;  // uniform spacing
  int nx = 0;                 // lattice is nx^3, spacing hx, centered at center
  double hx = 0;
  Vec3 center{0, 0, 0};
  std::vector<MomentEntry> entries;  // time-major: [it * nx^3 + lattice index]

  Vec3 point(int ix, int iy, int iz) const {
    const double off = 0.5 * (nx - 1);
    return center + hx * Vec3{ix - off, iy - off, iz - off};
  }
  int index(int it, int ix, int iy, int iz) const {
    return ((it * nx + ix) * nx + iy) * nx + iz;
  }
};

inline MomentGrid compute_moment_grid(const InitialData& data, const FieldHandle& field,
                                      const std::vector<double>& times, const Vec3& center,
                                      int nx, double hx, int vel_nodes, const PathOpts& opts,
                                      int threads = 1) {
  MomentGrid g;
  g.times = times;
  g.nx = nx;
  g.hx = hx;
  g.center = center;
  const int npts = nx * nx * nx;
  g.entries.resize(times.size() * npts);
  parallel_for(g.entries.size(), threads, [&](std::size_t q) {
    const int it = int(q) / npts;
    const int rem = int(q) % npts;
    const int ix = rem / (nx * nx), iy = (rem / nx) % nx, iz = rem % nx;
    g.entries[q] = compute_moment_entry(data, field, times[it],
                                        g.point(ix, iy, iz), vel_nodes, opts);
  });
  return g;
}

// Centered-difference residuals of the two conservation laws, evaluated at the
// interior of the grid. The field terms div(E (x) E) - (1/2) grad |E|^2 are
// differenced on the same lattice for a consistent O(h^2) comparison.
struct ConservationResidual {
  std::vector<double> res1;  // d_t R0 + div R1
  std::vector<double> res2;  // max-abs component of the momentum-law residual
  double max1 = 0, max2 = 0;
};

inline ConservationResidual conservation_residual(const MomentGrid& g, const FieldHandle& field) {
  const int nt = int(g.times.size()), nx = g.nx;
  if (nt < 3 || nx < 3) throw std::invalid_argument("grid too coarse for differencing");
  const double ht = g.times[1] - g.times[0];
  ConservationResidual out;
  auto E_at = [&](double t, int ix, int iy, int iz) { return field.E(t, g.point(ix, iy, iz)); };
  for (int it = 1; it < nt - 1; ++it) {
    const double t = g.times[it];
    for (int ix = 1; ix < nx - 1; ++ix)
      for (int iy = 1; iy < nx - 1; ++iy)
        for (int iz = 1; iz < nx - 1; ++iz) {
          auto at = [&](int dt_, int dx_, int dy_, int dz_) -> const MomentEntry& {
            return g.entries[g.index(it + dt_, ix + dx_, iy + dy_, iz + dz_)];
          };
          const double dtR0 = (at(1, 0, 0, 0).R0() - at(-1, 0, 0, 0).R0()) / (2 * ht);
          double divR1 = (at(0, 1, 0, 0).R1()[0] - at(0, -1, 0, 0).R1()[0] +
                          at(0, 0, 1, 0).R1()[1] - at(0, 0, -1, 0).R1()[1] +
                          at(0, 0, 0, 1).R1()[2] - at(0, 0, 0, -1).R1()[2]) /
                         (2 * g.hx);
          out.res1.push_back(dtR0 + divR1);
          out.max1 = std::max(out.max1, std::abs(dtR0 + divR1));

          Vec3 dtR1 = (1.0 / (2 * ht)) * (at(1, 0, 0, 0).R1() - at(-1, 0, 0, 0).R1());
          Vec3 res{0, 0, 0};
          for (int a = 0; a < 3; ++a) {
            double divR2 = 0;
            divR2 += (at(0, 1, 0, 0).R2()[3 * a + 0] - at(0, -1, 0, 0).R2()[3 * a + 0]);
            divR2 += (at(0, 0, 1, 0).R2()[3 * a + 1] - at(0, 0, -1, 0).R2()[3 * a + 1]);
            divR2 += (at(0, 0, 0, 1).R2()[3 * a + 2] - at(0, 0, 0, -1).R2()[3 * a + 2]);
            res[a] = dtR1[a] + divR2 / (2 * g.hx);
          }
          // field stress terms: div(E (x) E) - (1/2) grad |E|^2, centered
          const Vec3 Exp = E_at(t, ix + 1, iy, iz), Exm = E_at(t, ix - 1, iy, iz);
          const Vec3 Eyp = E_at(t, ix, iy + 1, iz), Eym = E_at(t, ix, iy - 1, iz);
          const Vec3 Ezp = E_at(t, ix, iy, iz + 1), Ezm = E_at(t, ix, iy, iz - 1);
          for (int a = 0; a < 3; ++a) {
            const double divEE = (Exp[a] * Exp[0] - Exm[a] * Exm[0] + Eyp[a] * Eyp[1] -
                                  Eym[a] * Eym[1] + Ezp[a] * Ezp[2] - Ezm[a] * Ezm[2]) /
                                 (2 * g.hx);
            const Vec3& p = a == 0 ? Exp : (a == 1 ? Eyp : Ezp);
            const Vec3& m = a == 0 ? Exm : (a == 1 ? Eym : Ezm);
            const double gradE2 = (norm2(p) - norm2(m)) / (4 * g.hx);
            res[a] -= divEE - gradE2;
          }
          out.res2.push_back(max_abs(res));
          out.max2 = std::max(out.max2, max_abs(res));
        }
  }
  return out;
}

// Fixed phase-space sample set for the moment-transform Monte-Carlo. The same
// draws serve every outer iteration (common random numbers), so successive
// iterates differ only through the field and the contraction factor is not
// drowned in sampling noise.
//
// Proposal, independently in a and in v: 0.8 N(0, I/2) + 0.2 radial <q>^{-10}.
// The Gaussian part matches the data bulk (exactly for the gaussian-odd family,
// which keeps the importance weights nearly flat there); the heavy radial part
// keeps the variance finite against the polynomial factors of the field
// correction (grad mu ~ <v>^{-7}) and the polyweight tails.
struct McSampleSet {
  std::vector<Vec3> a, v;
  std::vector<double> inv_p;  // 1 / (N p(a_i, v_i))

  static McSampleSet draw(int n, std::uint64_t seed) {
    McSampleSet s;
    const estimates::detail::RadialProposal heavy(10.0);
    auto rng = task_rng(seed, 0x6d63);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5)), gd(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double cg = std::pow(M_PI, -1.5);  // density of N(0, I/2): pi^{-3/2} e^{-|q|^2}
    auto draw3 = [&]() -> Vec3 {
      if (u(rng) < 0.8) return {g(rng), g(rng), g(rng)};
      const double r = heavy.sample(u(rng));
      Vec3 d{gd(rng), gd(rng), gd(rng)};
      const double dn = norm(d);
      d = dn > 1e-300 ? (1.0 / dn) * d : Vec3{1, 0, 0};
      return r * d;
    };
    auto density3 = [&](const Vec3& q) {
      return 0.8 * cg * std::exp(-norm2(q)) + 0.2 * heavy.density(norm(q));
    };
    for (int i = 0; i < n; ++i) {
      const Vec3 a3 = draw3(), v3 = draw3();
      const double p = density3(a3) * density3(v3);
      s.a.push_back(a3);
      s.v.push_back(v3);
      s.inv_p.push_back(1.0 / (p * n));
    }
    return s;
  }
};

struct FixedPointTrace {
  std::vector<double> diffs;   // sampled weighted sup |E_n - E_{n-1}|
  std::vector<double> norm1T;  // per iterate
  bool converged = false;
  int iterations = 0;

  std::vector<double> ratios() const {
    std::vector<double> r;
    for (std::size_t i = 1; i < diffs.size(); ++i)
      r.push_back(diffs[i - 1] > 0 ? diffs[i] / diffs[i - 1] : 0.0);
    return r;
  }
};

namespace detail {

// sources on the mode grid from the Monte-Carlo transform of the moment field
inline std::vector<std::vector<Complex>> mc_sources(const InitialData& data,
                                                    const FieldHandle& field,
                                                    const McSampleSet& mc, const TimeGrid& grid,
                                                    const ModeGrid& modes, const PathOpts& opts,
                                                    int threads) {
  const int K = grid.size();
  const std::size_t N = mc.a.size(), M = modes.modes.size();
  // integrand values F(t_k, a_i, v_i), all paths independent
  std::vector<double> F(N * K);
  parallel_for(N, threads, [&](std::size_t i) {
    for (int k = 0; k < K; ++k) {
      const double t = grid.time(k);
      const Vec3 x = mc.a[i] + t * mc.v[i];
      const auto pr = moment_integrands(data, field, t, x, mc.v[i], opts);
      F[i * K + k] = (pr.I + pr.R) * mc.inv_p[i];
    }
  });
  // accumulate e^{-i xi.(a + t v)} phases per mode, fixed block order so the
  // reduction is byte-identical for any thread count
  std::vector<std::vector<Complex>> src(M, std::vector<Complex>(K, Complex(0)));
  parallel_for(M, threads, [&](std::size_t m) {
    const Vec3 xi = modes.modes[m].xi;
    auto& sm = src[m];
    for (std::size_t i = 0; i < N; ++i) {
      const double ph0 = -dot(xi, mc.a[i]);
      const double dph = -grid.dt * dot(xi, mc.v[i]);
      Complex rot(std::cos(ph0), std::sin(ph0));
      const Complex step(std::cos(dph), std::sin(dph));
      for (int k = 0; k < K; ++k) {
        sm[k] += F[i * K + k] * rot;
        rot *= step;
      }
    }
  });
  return src;
}

inline std::vector<SpaceTimeSample> norm_samples(double T) {
  std::vector<double> times;
  for (int i = 0; i <= 8; ++i) times.push_back(T * i / 8);
  return spacetime_samples(times, 64.0, 8);
}

inline double field_norm1T(const TrackSet& ts, double kappa0) {
  FieldEvaluator ev(ts);
  std::vector<DensitySample> ds;
  for (const auto& s : norm_samples(ts.grid.T())) {
    DensitySample d;
    d.t = s.t;
    d.x = s.x;
    d.grad1 = ev.grad_pot_maxabs(1, s.t, s.x);
    d.grad2 = ev.grad_pot_maxabs(2, s.t, s.x);
    d.grad3 = ev.grad_pot_maxabs(3, s.t, s.x);
    ds.push_back(d);
  }
  return norm_1T(ds, ts.grid.T(), kappa0);
}

inline double field_diff(const TrackSet& a, const TrackSet& b, double kappa0) {
  FieldEvaluator ea(a), eb(b);
  double sup = 0;
  for (const auto& s : norm_samples(a.grid.T())) {
    const double d = max_abs(ea.E(s.t, s.x) - eb.E(s.t, s.x));
    sup = std::max(sup, std::pow(weight(s.t, s.x), 3.0 - kappa0) * d);
  }
  return sup;
}

}  // namespace detail

struct NonlinearResult {
  TrackSet tracks;
  FixedPointTrace trace;
};

// Outer fixed point: rho -> E -> characteristics -> moment transform -> new rho
// through the resolvent, with common random numbers across iterations. Iterate
// 0 runs the zero field through the same pipeline, so the free-streaming source
// carries the same sampling error as every later iterate.
inline NonlinearResult solve_nonlinear(const InitialData& data, const Config& cfg) {
  NonlinearResult out;
  auto& ts = out.tracks;
  ts.grid = TimeGrid::make(cfg.T_horizon, cfg.dt);
  ts.xi = ModeGrid::make(cfg.xi_min, cfg.xi_max, cfg.xi_levels);
  const auto mc = McSampleSet::draw(cfg.mc_samples, cfg.seed);
  const auto opts = PathOpts::from(cfg);

  auto sweep = [&](const FieldHandle& field) {
    TrackSet next;
    next.grid = ts.grid;
    next.xi = ts.xi;
    next.source = detail::mc_sources(data, field, mc, ts.grid, ts.xi, opts, cfg.threads);
    next.rho.resize(next.source.size());
    parallel_for(next.source.size(), cfg.threads, [&](std::size_t m) {
      next.rho[m] =
          apply_resolvent<Complex>(next.source[m], ts.xi.modes[m].lambda, ts.grid.dt);
    });
    return next;
  };

  ts = sweep(zero_field(ts.grid.T()));
  out.trace.norm1T.push_back(detail::field_norm1T(ts, cfg.kappa0));
  if (out.trace.norm1T.back() == 0.0) {  // zero data: the free iterate is exact
    out.trace.converged = true;
    return out;
  }

  double theta = 1.0;
  for (int n = 1; n <= cfg.max_outer; ++n) {
    FieldEvaluator ev(ts);
    TrackSet next = sweep(track_field(ev));
    if (theta != 1.0) {
      for (std::size_t m = 0; m < next.rho.size(); ++m)
        for (int k = 0; k < ts.grid.size(); ++k)
          next.rho[m][k] = (1 - theta) * ts.rho[m][k] + theta * next.rho[m][k];
    }
    const double diff = detail::field_diff(next, ts, cfg.kappa0);
    ts = std::move(next);
    out.trace.diffs.push_back(diff);
    out.trace.norm1T.push_back(detail::field_norm1T(ts, cfg.kappa0));
    out.trace.iterations = n;
    const double scale = std::max(cfg.outer_tol, 1e-4 * out.trace.diffs.front());
    if (diff <= scale) {
      out.trace.converged = true;
      return out;
    }
    const auto& d = out.trace.diffs;
    if (d.size() >= 3 && d[d.size() - 1] >= d[d.size() - 2] &&
        d[d.size() - 2] >= d[d.size() - 3])
      throw std::runtime_error("outside perturbative regime");
    if (d.size() >= 2 && d[d.size() - 1] > d[d.size() - 2]) theta = 0.5;
  }
  return out;
}

// Scattering diagnostics: g(t;x,v) = f(t, x+tv, v) along the solved field.
struct ScatterSample {
  Vec3 x, v;
};

struct ScatterRow {
  double t = 0;
  double sup_diff = 0;  // sup over samples of <v>^5 |g(t) - g(2t)|
};

struct ScatterProfile {
  std::vector<ScatterRow> rows;
  double fitted_exponent = 0;       // log-log slope of sup_diff vs t
  std::vector<double> f_inf;        // g(T) per sample
};

inline double scatter_g(const InitialData& data, const FieldHandle& field, double t,
                        const Vec3& x, const Vec3& v, const PathOpts& opts) {
  auto p = picard_path(field, 0.0, t, x, v, opts.dt, opts.tol, opts.max_iter);
  double g = data.f0(p.pos(0), v + p.W[0]);
  const int n = p.n();
  if (n == 0) return g;
  double acc = 0;
  for (int i = 0; i <= n; ++i) {
    const double term = dot(field.E(p.tau(i), p.pos(i)), equilibrium::grad_mu(v + p.W[i]));
    acc += (i == 0 || i == n) ? 0.5 * term : term;
  }
  return g - p.h * acc;
}

inline std::vector<ScatterSample> builtin_scatter_samples() {
  std::vector<ScatterSample> out;
  const Vec3 dirs[] = {{1, 0, 0}, {0, -1, 0}, {1 / std::sqrt(3.0), 1 / std::sqrt(3.0),
                                               1 / std::sqrt(3.0)}};
  const double rx[] = {0, 2, 8};
  const double rv[] = {0, 0.5, 1, 2, 4, 8};
  for (double ax : rx)
    for (const auto& dx : dirs) {
      for (double av : rv)
        for (const auto& dv : dirs) {
          out.push_back({ax * dx, av * dv});
          if (av == 0) break;  // v = 0 once per x
        }
      if (ax == 0) break;  // x = 0 once
    }
  return out;
}

inline ScatterProfile scattering_profile(const InitialData& data, const FieldHandle& field,
                                         const std::vector<double>& t_list,
                                         const std::vector<ScatterSample>& samples,
                                         const PathOpts& opts, int threads = 1) {
  ScatterProfile prof;
  prof.rows.resize(t_list.size());
  prof.f_inf.resize(samples.size());
  for (double t : t_list)
    if (2 * t > field.T + 1e-9)
      throw std::invalid_argument("scattering comparison needs 2t within the solved horizon");

  std::vector<double> sup(t_list.size(), 0.0);
  std::vector<std::vector<double>> per_sample(samples.size(),
                                              std::vector<double>(t_list.size()));
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    const auto& s = samples[i];
    const double w5 = std::pow(bracket(s.v), 5.0);
    for (std::size_t j = 0; j < t_list.size(); ++j) {
      const double g1 = scatter_g(data, field, t_list[j], s.x, s.v, opts);
      const double g2 = scatter_g(data, field, 2 * t_list[j], s.x, s.v, opts);
      per_sample[i][j] = w5 * std::abs(g1 - g2);
    }
    prof.f_inf[i] = scatter_g(data, field, field.T, s.x, s.v, opts);
  });
  for (std::size_t j = 0; j < t_list.size(); ++j) {
    for (std::size_t i = 0; i < samples.size(); ++i) sup[j] = std::max(sup[j], per_sample[i][j]);
    prof.rows[j] = {t_list[j], sup[j]};
  }
  // least-squares slope in log-log over the rows with signal
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : prof.rows) {
    if (r.t <= 0 || r.sup_diff <= 0) continue;
    const double lx = std::log(r.t), ly = std::log(r.sup_diff);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  prof.fitted_exponent = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  return prof;
}

}  // namespace landau
