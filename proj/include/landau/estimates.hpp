#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "landau/quadrature.hpp"
#include "landau/ratio_report.hpp"
#include "landau/rng.hpp"
#include "landau/volterra.hpp"

namespace landau {
namespace estimates {

// Space-time convolution bound: LHS of the basic integral estimate
//   int_0^t int <t-s, x-y>^{-beta1} <s, y>^{-beta2} dy ds.
// The y-integral is axisymmetric about x, reducing to (r, u = cos angle).
struct LemmaCheck {
  double lhs = 0, rhs = 0, ratio = 0;
};

namespace detail {

// inner dy integral at fixed s, by tangent-mapped radial x Gauss angular rule
inline double conv_inner(double a, double b, double beta1, double beta2, double X) {
  const auto& rad = tan_rule(96);
  const auto& ang = gauss_legendre(32);
  double sum = 0;
  for (int i = 0; i < 96; ++i) {
    const double r = rad.x[i];
    if (r <= 0) continue;
    const double wr = rad.w[i] * r * r;
    const double w2 = 1 + b * b + r * r;  // <s, y>^2 with |y| = r
    double asum = 0;
    for (int j = 0; j < 32; ++j) {
      const double u = ang.x[j];
      const double d2 = r * r + X * X - 2 * r * X * u;  // |x - y|^2
      const double w1 = 1 + a * a + d2;
      asum += ang.w[j] * std::pow(w1, -beta1 / 2);
    }
    sum += wr * asum * std::pow(w2, -beta2 / 2);
  }
  return 2 * M_PI * sum;
}

}  // namespace detail

inline LemmaCheck lemma_a8_check(double beta1, double beta2, double t, const Vec3& x) {
  if (!(beta1 >= std::max(4.0, beta2) && beta2 >= 3))
    throw std::invalid_argument("exponents must satisfy beta1 >= max(4, beta2) >= 3");
  const double X = norm(x);
  LemmaCheck out;
  if (t > 0) {
    out.lhs = adaptive_simpson(
        [&](double s) { return detail::conv_inner(t - s, s, beta1, beta2, X); }, 0.0, t, 1e-8);
  }
  const double w = weight(t, x);
  out.rhs = std::pow(w, -beta2);
  if (beta1 == 4) out.rhs *= std::log(2 + std::abs(t) + X);
  out.ratio = out.lhs / out.rhs;
  return out;
}

// Velocity-average bound: int <x - tv, v>^{-n-3} dv against <t>^{-3} <x/<t>>^{-n}.
inline LemmaCheck lemma_a3_check(double n, double t, const Vec3& x) {
  if (!(n > 0)) throw std::invalid_argument("n must be positive");
  const double X = norm(x);
  const auto& rad = tan_rule(96);
  const auto& ang = gauss_legendre(32);
  double sum = 0;
  for (int i = 0; i < 96; ++i) {
    const double r = rad.x[i];
    if (r <= 0) continue;
    const double wr = rad.w[i] * r * r;
    double asum = 0;
    for (int j = 0; j < 32; ++j) {
      const double u = ang.x[j];
      const double d2 = X * X - 2 * t * X * r * u + t * t * r * r;  // |x - tv|^2
      asum += ang.w[j] * std::pow(1 + d2 + r * r, -(n + 3) / 2);
    }
    sum += wr * asum;
  }
  LemmaCheck out;
  out.lhs = 2 * M_PI * sum;
  const double bt = bracket(t);
  out.rhs = std::pow(bt, -3.0) * std::pow(bracket(X / bt), -n);
  out.ratio = out.lhs / out.rhs;
  return out;
}

// The eight space-time integrals of the decay lemma. All share the shape
//   int_0^t int_s^t pref(s,tau) int <s, x-(t-s)v>^{-p} <tau, x-(t-tau)v>^{-q}
//                                    <v>^{-r} dv dtau ds,
// differing in the prefactor and exponents.
struct ASpec {
  double p, q, r;
  int pref;  // 0:1  1:(tau-s)  2:tau  3:(tau-s)tau  4:s  5:s(tau-s)(t-tau+1)/(t-s)
};

inline ASpec a_spec(int k, double kappa0) {
  switch (k) {
    case 1: return {3 - kappa0, 3 - kappa0, 4, 0};
    case 2: return {4 - kappa0, 3 - kappa0, 3, 1};
    case 3: return {3 - kappa0, 4 - kappa0, 4, 2};
    case 4: return {4 - kappa0, 4 - kappa0, 3, 3};
    case 5: return {3 - kappa0, 3 - kappa0, 5, 0};
    case 6: return {4 - kappa0, 3 - kappa0, 4, 1};
    case 7: return {4 - kappa0, 3 - kappa0, 4, 4};
    case 8: return {4 - kappa0, 4 - kappa0, 3, 5};
    default: throw std::invalid_argument("A_k index must be 1..8");
  }
}

struct AValue {
  double value = 0;
  double sigma = 0;  // Monte-Carlo standard error
};

struct AOptions {
  int st_nodes = 16;    // Gauss nodes in each of s and tau
  int v_samples = 4000;
  int groups = 10;      // variance estimated over independent sample groups
  std::uint64_t seed = 20240817;
  double rel_sigma_max = 1e100;
};

namespace detail {

// Radial sampler for the proposal q(v) proportional to <v>^{-alpha}: inverse
// CDF of r^2 <r>^{-alpha} dr on a log-spaced table. alpha = r_exp + 3 matches
// the integrand's worst-case velocity tail up to <v>^{kappa0}.
class RadialProposal {
 public:
  explicit RadialProposal(double alpha) : alpha_(alpha) {
    const int n = 2000;
    grid_.resize(n + 1);
    cdf_.resize(n + 1);
    grid_[0] = 0;
    cdf_[0] = 0;
    double acc = 0, prev_r = 0, prev_f = 0;
    for (int i = 1; i <= n; ++i) {
      const double r = 1e-3 * std::pow(1e7, double(i - 1) / (n - 1));
      const double f = r * r * std::pow(1 + r * r, -alpha / 2);
      acc += 0.5 * (f + prev_f) * (r - prev_r);
      grid_[i] = r;
      cdf_[i] = acc;
      prev_r = r;
      prev_f = f;
    }
    norm_ = acc;
    for (auto& c : cdf_) c /= norm_;
  }

  double sample(double u) const {
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.begin()) return grid_.front();
    if (it == cdf_.end()) return grid_.back();
    const std::size_t i = it - cdf_.begin();
    const double c0 = cdf_[i - 1], c1 = cdf_[i];
    const double f = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
    return grid_[i - 1] + f * (grid_[i] - grid_[i - 1]);
  }

  // density of the 3D proposal at |v| = r
  double density(double r) const {
    return std::pow(1 + r * r, -alpha_ / 2) / (4 * M_PI * norm_);
  }

 private:
  double alpha_, norm_;
  std::vector<double> grid_, cdf_;
};

}  // namespace detail

inline AValue A_integral(int k, double t, const Vec3& x, double kappa0,
                         const AOptions& opts = {}) {
  const ASpec spec = a_spec(k, kappa0);
  AValue out;
  if (t <= 0) return out;

  detail::RadialProposal prop(spec.r + 3);
  auto rng = task_rng(opts.seed, 0xA0 + k);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int N = opts.v_samples;
  std::vector<Vec3> v(N);
  std::vector<double> inv_q(N);
  for (int i = 0; i < N; ++i) {
    const double r = prop.sample(uni(rng));
    Vec3 d{gauss(rng), gauss(rng), gauss(rng)};
    const double dn = norm(d);
    d = dn > 1e-300 ? (1.0 / dn) * d : Vec3{1, 0, 0};
    v[i] = r * d;
    inv_q[i] = 1.0 / prop.density(r);
  }

  const auto& g = gauss_legendre(opts.st_nodes);
  const int B = std::max(1, opts.groups);
  std::vector<double> group(B, 0.0);
  for (int a = 0; a < opts.st_nodes; ++a) {
    const double s = t / 2 * (1 + g.x[a]);
    const double ws = t / 2 * g.w[a];
    for (int b = 0; b < opts.st_nodes; ++b) {
      const double tau = s + (t - s) / 2 * (1 + g.x[b]);
      const double wtau = (t - s) / 2 * g.w[b];
      double pref = 1;
      switch (spec.pref) {
        case 1: pref = tau - s; break;
        case 2: pref = tau; break;
        case 3: pref = (tau - s) * tau; break;
        case 4: pref = s; break;
        case 5: pref = s * (tau - s) * (t - tau + 1) / (t - s); break;
      }
      const double wst = ws * wtau * pref;
      for (int i = 0; i < N; ++i) {
        const double w1 = weight(s, x - (t - s) * v[i]);
        const double w2 = weight(tau, x - (t - tau) * v[i]);
        const double f = std::pow(w1, -spec.p) * std::pow(w2, -spec.q) *
                         std::pow(1 + norm2(v[i]), -spec.r / 2);
        group[std::size_t(i) * B / N] += wst * f * inv_q[i];
      }
    }
  }
  // each group holds N/B samples worth of weight; rescale to unbiased means
  double mean = 0;
  for (int b = 0; b < B; ++b) {
    group[b] *= double(B) / N;
    mean += group[b];
  }
  mean /= B;
  double var = 0;
  for (int b = 0; b < B; ++b) var += (group[b] - mean) * (group[b] - mean);
  out.value = mean;
  out.sigma = B > 1 ? std::sqrt(var / (B * (B - 1))) : 0.0;
  if (out.value != 0 && out.sigma > opts.rel_sigma_max * std::abs(out.value))
    throw QuadratureError("A_k Monte-Carlo error above tolerance", out.sigma);
  return out;
}

// Deterministic cross-check of the same triple integral on a coarse tensor
// grid (tangent-mapped v), used to validate the Monte-Carlo route.
inline double A_integral_quadrature(int k, double t, const Vec3& x, double kappa0,
                                    int st_nodes = 12, int v_nodes = 20) {
  const ASpec spec = a_spec(k, kappa0);
  if (t <= 0) return 0;
  const auto& g = gauss_legendre(st_nodes);
  const auto& vr = tan_rule(v_nodes);
  double total = 0;
  for (int a = 0; a < st_nodes; ++a) {
    const double s = t / 2 * (1 + g.x[a]);
    const double ws = t / 2 * g.w[a];
    for (int b = 0; b < st_nodes; ++b) {
      const double tau = s + (t - s) / 2 * (1 + g.x[b]);
      const double wtau = (t - s) / 2 * g.w[b];
      double pref = 1;
      switch (spec.pref) {
        case 1: pref = tau - s; break;
        case 2: pref = tau; break;
        case 3: pref = (tau - s) * tau; break;
        case 4: pref = s; break;
        case 5: pref = s * (tau - s) * (t - tau + 1) / (t - s); break;
      }
      double vsum = 0;
      for (int i = 0; i < v_nodes; ++i)
        for (int j = 0; j < v_nodes; ++j)
          for (int l = 0; l < v_nodes; ++l) {
            const Vec3 v{vr.x[i], vr.x[j], vr.x[l]};
            const double w1 = weight(s, x - (t - s) * v);
            const double w2 = weight(tau, x - (t - tau) * v);
            vsum += vr.w[i] * vr.w[j] * vr.w[l] * std::pow(w1, -spec.p) *
                    std::pow(w2, -spec.q) * std::pow(1 + norm2(v), -spec.r / 2);
          }
      total += ws * wtau * pref * vsum;
    }
  }
  return total;
}

// Ratio sweep of the two displayed decay bounds of the A_k family.
struct Lemma42Report {
  RatioReport low;   // A1 + A2 vs <x,t>^{-3}
  RatioReport high;  // sum A3..A8 vs <t> <x,t>^{-4}
};

inline Lemma42Report lemma_42_check(const std::vector<SpaceTimeSample>& samples, double kappa0,
                                    const AOptions& opts = {}) {
  Lemma42Report rep;
  for (const auto& smp : samples) {
    if (smp.t < 1) throw std::invalid_argument("lemma_42_check needs t >= 1");
    const double w = weight(smp.t, smp.x);
    RatioRow lo, hi;
    lo.t = hi.t = smp.t;
    lo.x = hi.x = smp.x;
    for (int k = 1; k <= 8; ++k) {
      const double val = A_integral(k, smp.t, smp.x, kappa0, opts).value;
      (k <= 2 ? lo.lhs : hi.lhs) += val;
    }
    lo.rhs = std::pow(w, -3.0);
    hi.rhs = bracket(smp.t) * std::pow(w, -4.0);
    lo.ratio = lo.lhs / lo.rhs;
    hi.ratio = hi.lhs / hi.rhs;
    rep.low.rows.push_back(lo);
    rep.high.rows.push_back(hi);
  }
  return rep;
}

// Decay of the oscillatory singular parts: max-abs entries of
// d_t^{n2} nabla^{1+n1} Delta^{-1} rho_sing against [f0] <t,x>^{-(3+n1+n2)}.
inline RatioReport singular_decay_check(const TrackSet& sing, double f0_bracket,
                                        const std::vector<SpaceTimeSample>& samples, int n1,
                                        int n2) {
  if (n1 + n2 > 4) throw std::invalid_argument("n1+n2 must be <= 4");
  FieldEvaluator ev(sing);
  RatioReport rep;
  for (const auto& s : samples) {
    RatioRow row;
    row.t = s.t;
    row.x = s.x;
    row.lhs = ev.tensor_maxabs(sing.rho, 1 + n1, n2, s.t, s.x);
    row.rhs = f0_bracket * std::pow(weight(s.t, s.x), -(3.0 + n1 + n2));
    row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace estimates
}  // namespace landau
