#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "landau/quadrature.hpp"
#include "landau/ratio_report.hpp"
#include "landau/vec.hpp"

namespace landau {

struct PicardError : std::runtime_error {
  double residual;
  PicardError(const std::string& msg, double res) : std::runtime_error(msg), residual(res) {}
};

// Field access for the characteristic solves. The evaluator must be safe for
// concurrent calls; every solve below is independent of every other.
struct FieldHandle {
  std::function<Vec3(double, const Vec3&)> E;
  double T = 0;  // domain [0,T]
};

// One converged correction path in the shifted chart: the (x,v) arguments are
// the free-transport chart variables, with trajectories x + tau v + Y_{tau,t}; phase-space
// feet are recovered through X_{s,t}(x,v) = x - (t-s) v + Y_{s,t}(x - v t, v).
struct CharPath {
  double s = 0, t = 0;
  Vec3 x{0, 0, 0}, v{0, 0, 0};
  double h = 0;                 // tau step
  std::vector<Vec3> Y, W;       // at tau_i = s + i h, i = 0..n
  int iterations = 0;
  double residual = 0;

  double tau(int i) const { return s + h * i; }
  int n() const { return int(Y.size()) - 1; }
  // trajectory position at tau_i
  Vec3 pos(int i) const { return x + tau(i) * v + Y[std::size_t(i)]; }
};

// Fixed-point iteration for Y_{s,t}, W_{s,t} on a uniform tau grid (composite
// trapezoid, cumulative from the right). Y = 0 start; converges geometrically
// for small fields, throws PicardError otherwise.
inline CharPath picard_path(const FieldHandle& field, double s, double t, const Vec3& x,
                            const Vec3& v, double dt, double tol, int max_iter) {
  if (!(0 <= s && s <= t))
    throw std::invalid_argument("picard_path requires 0 <= s <= t");
  CharPath p;
  p.s = s;
  p.t = t;
  p.x = x;
  p.v = v;
  const int n = std::max(0, int(std::ceil((t - s) / dt - 1e-12)));
  p.h = n > 0 ? (t - s) / n : 0.0;
  p.Y.assign(n + 1, Vec3{0, 0, 0});
  p.W.assign(n + 1, Vec3{0, 0, 0});
  if (n == 0) return p;  // Y_{t,t} = W_{t,t} = 0, empty integral

  std::vector<Vec3> Evals(n + 1);
  double delta = 0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    for (int i = 0; i <= n; ++i) Evals[i] = field.E(p.tau(i), p.pos(i));
    // right-cumulative trapezoid: I1_i = int_{tau_i}^t E, I2_i = int_{tau_i}^t sigma E
    Vec3 I1{0, 0, 0}, I2{0, 0, 0};
    delta = 0;
    std::vector<Vec3> newY(n + 1);
    newY[n] = {0, 0, 0};
    p.W[n] = {0, 0, 0};
    for (int i = n - 1; i >= 0; --i) {
      I1 += (p.h / 2) * (Evals[i] + Evals[i + 1]);
      I2 += (p.h / 2) * (p.tau(i) * Evals[i] + p.tau(i + 1) * Evals[i + 1]);
      newY[i] = I2 - p.tau(i) * I1;
      p.W[i] = -1.0 * I1;
      delta = std::max(delta, max_abs(newY[i] - p.Y[i]));
    }
    p.Y.swap(newY);
    p.iterations = iter;
    p.residual = delta;
    if (delta <= tol) return p;
  }
  throw PicardError("Picard divergence: field too large", delta);
}

// Y, W at the path start: the correction state Y_{s,t}(x,v), W_{s,t}(x,v).
struct CharacteristicState {
  double s = 0, t = 0;
  Vec3 x{0, 0, 0}, v{0, 0, 0};
  Vec3 Y{0, 0, 0}, W{0, 0, 0};
  int iterations = 0;
  double residual = 0;
};

inline CharacteristicState picard_YW(const FieldHandle& field, double s, double t, const Vec3& x,
                                     const Vec3& v, double dt, double tol, int max_iter) {
  auto p = picard_path(field, s, t, x, v, dt, tol, max_iter);
  return {s, t, x, v, p.Y[0], p.W[0], p.iterations, p.residual};
}

// Straightening map: Psi_{s,t}(x,v) with X_{s,t}(x, Psi) = x - (t-s) v.
// Fixed point of Psi = v + Y_{s,t}(x - Psi t, Psi)/(t-s); each sweep is one
// Picard path solve at the current velocity iterate.
inline Vec3 psi_map(const FieldHandle& field, double s, double t, const Vec3& x, const Vec3& v,
                    double dt, double tol, int max_iter, double* residual_out = nullptr) {
  if (!(s < t)) throw std::invalid_argument("psi_map requires s < t");
  Vec3 psi = v;
  double delta = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    auto st = picard_YW(field, s, t, x - t * psi, psi, dt, tol, max_iter);
    const Vec3 next = v + (1.0 / (t - s)) * st.Y;
    delta = max_abs(next - psi);
    psi = next;
    if (delta <= tol) {
      if (residual_out) *residual_out = delta * (t - s);
      return psi;
    }
  }
  throw PicardError("Picard divergence: field too large", delta);
}

// Sample point for the bound monitors.
struct CharSample {
  double s = 0, t = 0;
  Vec3 x{0, 0, 0}, v{0, 0, 0};
};

enum class CharBound { YDeriv, WDeriv, PsiShift, PsiJacobian };

struct CharBoundOptions {
  double dt = 0.05;
  double tol = 1e-11;
  int max_iter = 60;
  double M = 1.0;      // measured field monitor replacing the implicit constant
  double kappa0 = 0.05;
  double fd_h1 = 1e-4;  // first derivatives
  double fd_h2 = 1e-3;  // second derivatives
};

namespace detail {

// composite Gauss quadrature in tau over [s,t], panels of length <= 1
template <typename F>
double tau_quad(F&& f, double s, double t) {
  if (!(t > s)) return 0.0;
  const int panels = std::max(1, int(std::ceil(t - s)));
  const double h = (t - s) / panels;
  double sum = 0;
  for (int i = 0; i < panels; ++i) sum += gauss_panel(f, s + i * h, s + (i + 1) * h, 8);
  return sum;
}

// majorant integrand of the Y/W derivative bounds at order (n1,n2)
inline double deriv_majorant(const CharSample& c, int n1, int n2, bool with_tau_minus_s,
                             double kappa0) {
  const int n = n1 + n2;
  return tau_quad(
      [&](double tau) {
        const double w = weight(tau, c.x + tau * c.v);
        const double dec = n <= 1 ? std::pow(w, -3.0 - n + kappa0) : std::pow(w, -4.0);
        double fac = std::pow(tau, double(n2)) * dec;
        if (with_tau_minus_s) fac *= tau - c.s;
        return fac;
      },
      c.s, c.t);
}

}  // namespace detail

// Ratio monitors for the derivative and straightening-map bounds. LHS by
// central differences of the converged maps in the shifted chart, RHS by
// tau-quadrature of the corresponding majorant scaled by the measured M.
inline RatioReport verify_char_bounds(const FieldHandle& field,
                                      const std::vector<CharSample>& samples, CharBound which,
                                      const CharBoundOptions& opts) {
  const double h1 = opts.fd_h1, h2 = opts.fd_h2;
  if (opts.tol > 0.01 * h2 * h2 || opts.tol > 0.05 * h1)
    throw std::invalid_argument("finite-difference step underflow vs tolerance conflict");

  RatioReport rep;
  if (which == CharBound::YDeriv || which == CharBound::WDeriv) {
    const bool wantY = which == CharBound::YDeriv;
    auto map_at = [&](const CharSample& c, const Vec3& x, const Vec3& v) {
      auto st = picard_YW(field, c.s, c.t, x, v, opts.dt, opts.tol, opts.max_iter);
      return wantY ? st.Y : st.W;
    };
    const int orders[][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}};
    for (const auto& c : samples) {
      for (auto [n1, n2] : orders) {
        const int n = n1 + n2;
        double lhs = 0;
        if (n == 0) {
          lhs = max_abs(map_at(c, c.x, c.v));
        } else if (n == 1) {
          for (int a = 0; a < 3; ++a) {
            Vec3 xp = c.x, xm = c.x, vp = c.v, vm = c.v;
            (n1 ? xp[a] : vp[a]) += h1;
            (n1 ? xm[a] : vm[a]) -= h1;
            lhs = std::max(lhs, max_abs((1.0 / (2 * h1)) * (map_at(c, xp, vp) - map_at(c, xm, vm))));
          }
        } else {
          // n = 2: first slot from x (n1 >= 1), second from x or v
          for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
              if (n1 == 2 && b < a) continue;  // symmetric pairs, skip duplicates
              auto shift = [&](int sa, int sb) {
                Vec3 x = c.x, v = c.v;
                x[a] += sa * h2;
                (n1 == 2 ? x[b] : v[b]) += sb * h2;
                return map_at(c, x, v);
              };
              const Vec3 d2 = (1.0 / (4 * h2 * h2)) *
                              (shift(1, 1) - shift(1, -1) - shift(-1, 1) + shift(-1, -1));
              lhs = std::max(lhs, max_abs(d2));
            }
          }
        }
        RatioRow row;
        row.t = c.s;
        row.x = c.x;
        row.lhs = lhs;
        row.rhs = opts.M * detail::deriv_majorant(c, n1, n2, wantY, opts.kappa0);
        row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
        rep.rows.push_back(row);
      }
    }
    return rep;
  }

  for (const auto& c : samples) {
    RatioRow row;
    row.t = c.s;
    row.x = c.x;
    if (which == CharBound::PsiShift) {
      const Vec3 psi = psi_map(field, c.s, c.t, c.x, c.v, opts.dt, opts.tol, opts.max_iter);
      row.lhs = max_abs(psi - c.v);
      row.rhs = opts.M * detail::tau_quad(
                             [&](double tau) {
                               const double w = weight(tau, c.x - (c.t - tau) * c.v);
                               return (tau - c.s) / (c.t - c.s) * std::pow(w, -3.0 + opts.kappa0);
                             },
                             c.s, c.t);
    } else {
      Mat3 J{};
      for (int b = 0; b < 3; ++b) {
        Vec3 vp = c.v, vm = c.v;
        vp[b] += h1;
        vm[b] -= h1;
        const Vec3 col = (1.0 / (2 * h1)) *
                         (psi_map(field, c.s, c.t, c.x, vp, opts.dt, opts.tol, opts.max_iter) -
                          psi_map(field, c.s, c.t, c.x, vm, opts.dt, opts.tol, opts.max_iter));
        for (int a = 0; a < 3; ++a) J[3 * a + b] = col[a];
      }
      row.lhs = std::abs(det(J) - 1.0);
      row.rhs = opts.M * detail::tau_quad(
                             [&](double tau) {
                               const double w = weight(tau, c.x - (c.t - tau) * c.v);
                               return (tau - c.s) * (c.t - tau + 1) / (c.t - c.s) *
                                      std::pow(w, -4.0 + opts.kappa0);
                             },
                             c.s, c.t);
    }
    row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
    rep.rows.push_back(row);
  }
  return rep;
}

// Defining-identity residual |X_{s,t}(x,Psi) - (x - (t-s) v)|.
inline double psi_identity_residual(const FieldHandle& field, double s, double t, const Vec3& x,
                                    const Vec3& v, const Vec3& psi, double dt, double tol,
                                    int max_iter) {
  auto st = picard_YW(field, s, t, x - t * psi, psi, dt, tol, max_iter);
  const Vec3 X = x - (t - s) * psi + st.Y;
  const Vec3 target = x - (t - s) * v;
  return norm(X - target);
}

}  // namespace landau
