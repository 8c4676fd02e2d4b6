#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "landau/cutoff.hpp"
#include "landau/quadrature.hpp"
#include "landau/ratio_report.hpp"
#include "landau/sampling.hpp"
#include "landau/vec.hpp"

namespace landau {

// The Green kernel of the linearized problem and its low/high frequency split.
// Symbol side: G^(s,xi) = e^{-s|xi|}, G_<^ = G^ chi, G_>^ = G^ (1-chi).
// All physical-side values come from the 3D radial reduction, so they are real
// by construction (no imaginary residue to discard).
namespace kernels {

inline double G(double s, const Vec3& x) {
  if (!(s > 0)) throw std::domain_error("G(s,x) requires s > 0");
  const double d = s * s + norm2(x);
  return s / (M_PI * M_PI * d * d);
}

enum class Band { Low, High, Full };

inline double band_factor(Band b, double k) {
  switch (b) {
    case Band::Low: return cutoff::psi(k);
    case Band::High: return 1.0 - cutoff::psi(k);
    default: return 1.0;
  }
}

// Radial symbol profile including time derivatives and the optional
// nabla(-Delta)^{-1} prefix: h(k) = (-k)^{j1} e^{-sk} band(k) [k^{-2} if riesz].
struct Profile {
  Band band;
  double s;
  int j1;
  bool riesz;

  double operator()(double k) const {
    double h = std::exp(-s * k) * band_factor(band, k);
    for (int i = 0; i < j1; ++i) h *= -k;
    if (riesz) h /= k * k;
    return h;
  }
};

// Integration domain: Low band is supported on [0,2]; High band on [1,inf),
// truncated where the exponential tail is negligible.
inline std::pair<double, double> domain(const Profile& p, int pow_k) {
  if (p.band == Band::Low) return {0.0, 2.0};
  if (!(p.s > 0)) throw std::domain_error("high-frequency kernel requires s > 0");
  const double pw = pow_k + p.j1;
  double kmax = (40.0 + pw * std::log(std::max(40.0 / p.s, 2.0))) / p.s;
  kmax = std::max(kmax, 4.0);
  return {p.band == Band::High ? 1.0 : 0.0, kmax};
}

// entry = (1/2pi^2) int k^{2+m} h(k) E(k r) dk, panelized against the
// oscillation scale of E(kr).
template <typename E>
double entry_integral(const Profile& p, double r, int m, E&& ker) {
  auto [ka, kb] = domain(p, 2 + m);
  const double osc = std::max(r, 0.5);
  const double panel = std::min((kb - ka) / 4.0, M_PI / (2.0 * osc));
  double sum = 0, a = ka;
  while (a < kb) {
    double b = std::min(a + panel, kb);
    // resolve the cutoff glue on [1,2]: align panels to its knots and keep
    // them short there, so Low + High matches Full to quadrature precision
    if (a < 2.0) b = std::min(b, a + 0.25);
    if (a < 1.0) b = std::min(b, 1.0);
    else if (a < 2.0) b = std::min(b, 2.0);
    sum += gauss_panel(
        [&](double k) { return std::pow(k, 2 + m) * p(k) * ker(k * r); }, a, b, 12);
    a = b;
  }
  return sum / (2 * M_PI * M_PI);
}

// Scalar kernel value (j2 = 0, no prefix) at radius r.
inline double value(Band band, double s, double r, int j1 = 0) {
  Profile p{band, s, j1, false};
  return entry_integral(p, r, 0, sinckern::e0);
}

// Max-abs tensor entry of d_t^{j1} nabla_x^{j2} [nabla(-Delta)^{-1}] of the band
// kernel at (s, |x| = r). Spatial entries of a radial profile g at x = r e1 are
// combinations of radial derivatives; each is evaluated as its own 1D integral
// with a smooth kernel, stable down to r = 0.
inline double eval_maxabs(Band band, double s, double r, int j1, int j2, bool riesz) {
  const int m = j2 + (riesz ? 1 : 0);
  if (m > 4) throw std::invalid_argument("spatial order > 4 not supported");
  Profile p{band, s, j1, riesz};
  using namespace sinckern;
  switch (m) {
    case 0:
      return std::abs(entry_integral(p, r, 0, e0));
    case 1:
      return std::abs(entry_integral(p, r, 1, e1));
    case 2:
      return std::max(std::abs(entry_integral(p, r, 2, e2a)),
                      std::abs(entry_integral(p, r, 2, e2b)));
    case 3:
      return std::max(std::abs(entry_integral(p, r, 3, e3a)),
                      std::abs(entry_integral(p, r, 3, e3b)));
    default:
      return std::max({std::abs(entry_integral(p, r, 4, e4a)),
                       std::abs(entry_integral(p, r, 4, e4b)),
                       3.0 * std::abs(entry_integral(p, r, 4, e4d))});
  }
}

enum class DecayStyle { LowRiesz, Low, HighRiesz };

// RHS majorants of the kernel decay bounds, including the j1 = 0 / j1 >= 1 case
// split of the non-Riesz and high-frequency styles.
inline double decay_majorant(DecayStyle which, double t, double r, int j1, int j2) {
  const Vec3 x{r, 0, 0};
  const double w = weight(t, x);
  switch (which) {
    case DecayStyle::LowRiesz:
      return 1.0 / std::pow(w, 2.0 + j1 + j2);
    case DecayStyle::Low:
      return j1 == 0 ? bracket(t) / std::pow(w, 4.0 + j2)
                     : 1.0 / std::pow(w, 3.0 + j1 + j2);
    default: {
      const double tr = t + r;
      return j1 == 0 ? t / (std::pow(tr, 4.0 + j2) * std::pow(w, 7.0))
                     : 1.0 / (std::pow(tr, 3.0 + j1 + j2) * std::pow(w, 7.0));
    }
  }
}

inline double decay_lhs(DecayStyle which, double t, double r, int j1, int j2) {
  switch (which) {
    case DecayStyle::LowRiesz: return eval_maxabs(Band::Low, t, r, j1, j2, true);
    case DecayStyle::Low: return eval_maxabs(Band::Low, t, r, j1, j2, false);
    default: return eval_maxabs(Band::High, t, r, j1, j2, true);
  }
}

inline RatioReport verify_kernel_decay(const std::vector<SpaceTimeSample>& samples, int j1,
                                       int j2, DecayStyle which) {
  if (j1 + j2 > 4) throw std::invalid_argument("j1+j2 must be <= 4");
  RatioReport rep;
  for (const auto& s : samples) {
    const double r = norm(s.x);
    RatioRow row;
    row.t = s.t;
    row.x = s.x;
    row.lhs = decay_lhs(which, s.t, r, j1, j2);
    row.rhs = decay_majorant(which, s.t, r, j1, j2);
    row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
    rep.rows.push_back(row);
  }
  return rep;
}

// Builtin sample set for the decay sweeps: dyadic times and radii. The range
// reaches past the cutoff-glue transition (ratios peak near |x| = 32) so the
// trend statistic measures the asymptotic regime.
inline std::vector<SpaceTimeSample> builtin_decay_samples() {
  std::vector<SpaceTimeSample> out;
  const double ts[] = {1, 2, 4, 8, 16, 32, 64, 128};
  const double rs[] = {0, 1, 2, 4, 8, 16, 32, 64, 128};
  for (double t : ts)
    for (double r : rs) out.push_back({t, Vec3{r, 0, 0}});
  return out;
}

}  // namespace kernels

}  // namespace landau
