#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "landau/config.hpp"
#include "landau/cutoff.hpp"
#include "landau/parallel.hpp"
#include "landau/sampling.hpp"
#include "landau/sources.hpp"
#include "landau/vec.hpp"

namespace landau {

struct TimeGrid {
  double dt = 0.05;
  int n_steps = 0;  // grid has n_steps+1 points, t_0 = 0 .. t_n = T

  static TimeGrid make(double T, double dt) {
    TimeGrid g;
    g.dt = dt;
    g.n_steps = std::max(1, int(std::lround(T / dt)));
    return g;
  }
  int size() const { return n_steps + 1; }
  double time(int i) const { return dt * i; }
  double T() const { return dt * n_steps; }
};

// Explicit resolvent form of the density equation per mode: the solution is
// rho(t) = S(t) - int_0^t sin(s) e^{-s lambda} S(t-s) ds, evaluated by product
// trapezoid on the uniform grid (O(dt^2)).
template <typename T>
std::vector<T> apply_resolvent(std::span<const T> source, double lambda, double dt) {
  const int n = int(source.size());
  std::vector<double> K(n);
  for (int j = 0; j < n; ++j) K[j] = std::sin(dt * j) * std::exp(-dt * j * lambda);
  std::vector<T> rho(n);
  if (n > 0) rho[0] = source[0];
  for (int i = 1; i < n; ++i) {
    T acc = 0.5 * K[0] * source[i] + 0.5 * K[i] * source[0];
    for (int j = 1; j < i; ++j) acc += K[j] * source[i - j];
    rho[i] = source[i] - dt * acc;
  }
  return rho;
}

// Independent oracle: time-march the second-kind Volterra equation
// rho(t) = S(t) - int_0^t (t-s) e^{-(t-s) lambda} rho(s) ds directly.
// Its resolvent kernel is exactly sin(s) e^{-s lambda}, so the two routes must
// agree to discretization order.
template <typename T>
std::vector<T> volterra_step(std::span<const T> source, double lambda, double dt) {
  const int n = int(source.size());
  std::vector<double> K(n);
  for (int j = 0; j < n; ++j) K[j] = dt * j * std::exp(-dt * j * lambda);
  std::vector<T> rho(n);
  if (n > 0) rho[0] = source[0];
  for (int i = 1; i < n; ++i) {
    // K[0] = 0, so the scheme is explicit
    T acc = 0.5 * K[i] * rho[0];
    for (int j = 1; j < i; ++j) acc += K[j] * rho[i - j];
    rho[i] = source[i] - dt * acc;
  }
  return rho;
}

namespace detail {

// Shared batched convolution core for n_src sources on one (lambda, dt) grid.
// Layout is time-major: data[i * n_src + s], so the inner loop over sources is
// contiguous and vectorizes. march = false applies the kernel to the sources
// (resolvent form); march = true applies it to the solution being built.
inline void conv_batch(const std::vector<double>& kernel, const double* src, double* rho,
                       int n, int n_src, double dt, bool march) {
  std::vector<double> acc(n_src);
  for (int s = 0; s < n_src; ++s) rho[s] = src[s];
  for (int i = 1; i < n; ++i) {
    const double* base = march ? rho : src;
    for (int s = 0; s < n_src; ++s)
      acc[s] = 0.5 * kernel[0] * base[std::size_t(i) * n_src + s] + 0.5 * kernel[i] * base[s];
    for (int j = 1; j < i; ++j) {
      const double k = kernel[j];
      const double* p = base + std::size_t(i - j) * n_src;
      for (int s = 0; s < n_src; ++s) acc[s] += k * p[s];
    }
    for (int s = 0; s < n_src; ++s)
      rho[std::size_t(i) * n_src + s] = src[std::size_t(i) * n_src + s] - dt * acc[s];
  }
}

}  // namespace detail

// Batched forms of the two routes above for many real sources sharing one
// lambda. sources is time-major: sources[i * n_src + s]. For volterra_step the
// kernel weight at lag 0 is 0, so the march stays explicit and reading rho[i]
// before it is written never happens.
inline std::vector<double> apply_resolvent_many(std::span<const double> sources, int n_src,
                                                double lambda, double dt) {
  const int n = int(sources.size()) / n_src;
  std::vector<double> K(n);
  for (int j = 0; j < n; ++j) K[j] = std::sin(dt * j) * std::exp(-dt * j * lambda);
  std::vector<double> rho(sources.size());
  detail::conv_batch(K, sources.data(), rho.data(), n, n_src, dt, false);
  return rho;
}

inline std::vector<double> volterra_step_many(std::span<const double> sources, int n_src,
                                              double lambda, double dt) {
  const int n = int(sources.size()) / n_src;
  std::vector<double> K(n);
  for (int j = 0; j < n; ++j) K[j] = dt * j * std::exp(-dt * j * lambda);
  std::vector<double> rho(sources.size());
  detail::conv_batch(K, sources.data(), rho.data(), n, n_src, dt, true);
  return rho;
}

// Fourier sampling grid: log-spaced radial levels times the 26-direction rule,
// storing one representative per +-xi pair (conjugate symmetry supplies the
// other half). weight carries the full d^3xi measure of the pair's half.
struct Mode {
  Vec3 xi{0, 0, 0};
  double lambda = 0;  // |xi|
  double weight = 0;  // radial trapezoid x r^2 x 4pi x direction weight
};

struct ModeGrid {
  std::vector<Mode> modes;

  static ModeGrid make(double xi_min, double xi_max, int levels) {
    ModeGrid g;
    auto rad = log_spaced(xi_min, xi_max, levels);
    std::vector<double> wr(levels);
    wr[0] = (rad[1] - rad[0]) / 2;
    wr[levels - 1] = (rad[levels - 1] - rad[levels - 2]) / 2;
    for (int i = 1; i < levels - 1; ++i) wr[i] = (rad[i + 1] - rad[i - 1]) / 2;
    for (int i = 0; i < levels; ++i) {
      for (const auto& d : directions26()) {
        // keep the representative with positive leading component
        double lead = d.n[0] != 0 ? d.n[0] : (d.n[1] != 0 ? d.n[1] : d.n[2]);
        if (lead < 0) continue;
        Mode m;
        m.xi = rad[i] * d.n;
        m.lambda = rad[i];
        m.weight = wr[i] * rad[i] * rad[i] * 4 * M_PI * d.w;
        g.modes.push_back(m);
      }
    }
    return g;
  }
};

// The solved mode tracks of one run: rho^ and its source per mode on a shared
// time grid. The xi = 0 mode is identically zero by the mean-zero hypothesis
// and is never stored.
struct TrackSet {
  TimeGrid grid;
  ModeGrid xi;
  std::vector<std::vector<Complex>> source;  // per mode, per time
  std::vector<std::vector<Complex>> rho;
};

inline TrackSet solve_linear(const InitialData& data, const Config& cfg) {
  TrackSet ts;
  ts.grid = TimeGrid::make(cfg.T_horizon, cfg.dt);
  ts.xi = ModeGrid::make(cfg.xi_min, cfg.xi_max, cfg.xi_levels);
  const std::size_t nm = ts.xi.modes.size();
  ts.source.resize(nm);
  ts.rho.resize(nm);
  parallel_for(nm, cfg.threads, [&](std::size_t m) {
    const auto& mode = ts.xi.modes[m];
    std::vector<Complex> src(ts.grid.size());
    for (int i = 0; i < ts.grid.size(); ++i)
      src[i] = data.rho_free_hat(ts.grid.time(i), mode.xi);
    ts.rho[m] = apply_resolvent<Complex>(src, mode.lambda, ts.grid.dt);
    ts.source[m] = std::move(src);
  });
  return ts;
}

// Reconstruction of physical-space fields from mode tracks. Evaluators are
// read-only and safe for concurrent calls.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const TrackSet& ts) : ts_(&ts) {}

  double T() const { return ts_->grid.T(); }

  // rho(t,x)
  double rho(double t, const Vec3& x) const {
    return sum_scalar(t, x, [](const Mode&) { return 1.0; });
  }

  // E = nabla Delta^{-1} rho
  Vec3 E(double t, const Vec3& x) const {
    auto [i0, i1, c0, c1] = locate(t);
    Vec3 out{0, 0, 0};
    const auto& modes = ts_->xi.modes;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const Mode& md = modes[m];
      const Complex rh = c0 * ts_->rho[m][i0] + c1 * ts_->rho[m][i1];
      const double ph = dot(x, md.xi);
      // 2 Re[(-i xi/|xi|^2) rho^ e^{ix.xi}] = (xi/|xi|^2) 2(Re rho sin + Im rho cos)
      const double amp = 2.0 * (rh.real() * std::sin(ph) + rh.imag() * std::cos(ph)) /
                         (md.lambda * md.lambda) * md.weight;
      out += amp * md.xi;
    }
    return inv8pi3 * out;
  }

  // max-abs entry of nabla^m Delta^{-1} rho for m = 1..5, with n_t extra time
  // derivatives applied to the singular-part style tracks (see below); for the
  // solved rho tracks n_t must be 0 (no time-derivative data).
  double grad_pot_maxabs(int m, double t, const Vec3& x) const {
    return tensor_maxabs(ts_->rho, m, 0, t, x);
  }

  // full gradient tensor of E: (nabla^2 Delta^{-1} rho)_{ij}
  Mat3 gradE(double t, const Vec3& x) const {
    auto [i0, i1, c0, c1] = locate(t);
    Mat3 out{};
    const auto& modes = ts_->xi.modes;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const Mode& md = modes[m];
      const Complex rh = c0 * ts_->rho[m][i0] + c1 * ts_->rho[m][i1];
      const double ph = dot(x, md.xi);
      // 2 Re[(i xi)^{x2} (-1/l^2) rho e^{i ph}] = (xi_i xi_j/l^2) 2 Re[rho e^{iph}]
      const double amp =
          2.0 * (rh.real() * std::cos(ph) - rh.imag() * std::sin(ph)) / (md.lambda * md.lambda) *
          md.weight;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[3 * i + j] += amp * md.xi[i] * md.xi[j];
    }
    for (auto& v : out) v *= inv8pi3;
    return out;
  }

  double tensor_maxabs(const std::vector<std::vector<Complex>>& tracks, int m, int n_t, double t,
                       const Vec3& x) const {
    auto [i0, i1, c0, c1] = locate(t);
    // iterate distinct symmetric multi-indices of order m
    double best = 0;
    std::vector<int> idx(m, 0);
    while (true) {
      double acc = 0;
      const auto& modes = ts_->xi.modes;
      for (std::size_t mm = 0; mm < modes.size(); ++mm) {
        const Mode& md = modes[mm];
        Complex rh = c0 * tracks[mm][i0] + c1 * tracks[mm][i1];
        for (int d = 0; d < n_t; ++d) rh *= -md.lambda;
        double xi_prod = 1;
        for (int q = 0; q < m; ++q) xi_prod *= md.xi[idx[q]];
        const double ph = dot(x, md.xi);
        // (i)^m factor: rotate rho^ by m quarter turns
        Complex rot = rh;
        for (int q = 0; q < m % 4; ++q) rot *= Complex(0, 1);
        acc += -2.0 * (rot.real() * std::cos(ph) - rot.imag() * std::sin(ph)) /
               (md.lambda * md.lambda) * xi_prod * md.weight;
      }
      best = std::max(best, std::abs(acc * inv8pi3));
      // next non-decreasing multi-index
      int q = m - 1;
      while (q >= 0 && idx[q] == 2) --q;
      if (q < 0) break;
      ++idx[q];
      for (int r = q + 1; r < m; ++r) idx[r] = idx[q];
    }
    return best;
  }

 private:
  static constexpr double inv8pi3 = 1.0 / (8 * M_PI * M_PI * M_PI);

  struct Loc {
    int i0, i1;
    double c0, c1;
  };
  Loc locate(double t) const {
    const auto& g = ts_->grid;
    if (t < -1e-12 || t > g.T() + 1e-9)
      throw std::out_of_range("field evaluation outside solved time range");
    double u = std::clamp(t / g.dt, 0.0, double(g.n_steps));
    int i0 = std::min(int(u), g.n_steps - 1);
    double c1 = u - i0;
    return {i0, i0 + 1, 1.0 - c1, c1};
  }

  template <typename W>
  double sum_scalar(double t, const Vec3& x, W&& w) const {
    auto [i0, i1, c0, c1] = locate(t);
    double out = 0;
    const auto& modes = ts_->xi.modes;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const Mode& md = modes[m];
      const Complex rh = c0 * ts_->rho[m][i0] + c1 * ts_->rho[m][i1];
      const double ph = dot(x, md.xi);
      out += 2.0 * (rh.real() * std::cos(ph) - rh.imag() * std::sin(ph)) * md.weight * w(md);
    }
    return inv8pi3 * out;
  }

  const TrackSet* ts_;
};

// Oscillatory singular parts and residual of the density, on the symbol side:
// rho1^(t,xi) = e^{-t|xi|} chi rho00^, rho2^ = |xi| e^{-t|xi|} chi rho00^
// - e^{-t|xi|} chi (div rho10)^, rho_re^ = rho^ - cos(t) rho1^ - sin(t) rho2^.
struct RhoDecomposition {
  TrackSet sing1;   // rho^1_sing tracks
  TrackSet sing2;   // rho^2_sing tracks
  TrackSet resid;   // rho_re tracks
};

inline RhoDecomposition decompose_rho(const TrackSet& ts, const InitialData& data) {
  RhoDecomposition d;
  for (TrackSet* part : {&d.sing1, &d.sing2, &d.resid}) {
    part->grid = ts.grid;
    part->xi = ts.xi;
    part->rho.resize(ts.xi.modes.size());
  }
  for (std::size_t m = 0; m < ts.xi.modes.size(); ++m) {
    const Mode& md = ts.xi.modes[m];
    const double chi = cutoff::chi(md.xi);
    const Complex r00 = data.moment0_hat(md.xi);
    const Complex div_r10 = data.div_moment1_hat(md.xi);
    const int n = ts.grid.size();
    auto& s1 = d.sing1.rho[m];
    auto& s2 = d.sing2.rho[m];
    auto& re = d.resid.rho[m];
    s1.resize(n);
    s2.resize(n);
    re.resize(n);
    for (int i = 0; i < n; ++i) {
      const double t = ts.grid.time(i);
      const double decay = std::exp(-t * md.lambda) * chi;
      s1[i] = decay * r00;
      s2[i] = decay * (md.lambda * r00 - div_r10);
      re[i] = ts.rho[m][i] - std::cos(t) * s1[i] - std::sin(t) * s2[i];
    }
  }
  return d;
}

}  // namespace landau
