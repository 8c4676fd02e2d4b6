#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace landau {

struct QuadratureError : std::runtime_error {
  double achieved;
  QuadratureError(const std::string& msg, double err)
      : std::runtime_error(msg), achieved(err) {}
};

struct QuadRule {
  std::vector<double> x;  // nodes on [-1,1]
  std::vector<double> w;
};

// Gauss-Legendre nodes/weights by Newton iteration on P_n, cached per order.
inline const QuadRule& gauss_legendre(int n) {
  static std::map<int, QuadRule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1 - x * x) * pp * pp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

// Fixed-order Gauss panel on [a,b].
template <typename F>
double gauss_panel(F&& f, double a, double b, int n = 16) {
  const auto& r = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < n; ++i) s += r.w[i] * f(c + h * r.x[i]);
  return h * s;
}

namespace detail {
template <typename F>
double adaptive_rec(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth, double& err_acc) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (b - a) / 12.0 * (fa + 4 * flm + fm);
  const double right = (b - a) / 12.0 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) {
    err_acc += std::abs(delta) / 15;
    return left + right + delta / 15;
  }
  return adaptive_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1, err_acc) +
         adaptive_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1, err_acc);
}
}  // namespace detail

// Adaptive Simpson on [a,b]; throws QuadratureError if the error estimate stays
// above tol at maximum depth.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-10, int max_depth = 40) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  double err = 0;
  const double v = detail::adaptive_rec(f, a, b, fa, fm, fb, whole, tol, max_depth, err);
  if (err > 100 * tol + 1e-13 * std::abs(v))
    throw QuadratureError("adaptive quadrature did not converge", err);
  return v;
}

// Tangent-mapped nodes for integrals over the whole line: v = tan(theta).
struct MappedRule {
  std::vector<double> x;  // node in (-inf, inf)
  std::vector<double> w;  // includes the sec^2 Jacobian
};

inline const MappedRule& tan_rule(int n) {
  static std::map<int, MappedRule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const auto& g = gauss_legendre(n);
  MappedRule r;
  r.x.resize(n);
  r.w.resize(n);
  const double h = M_PI / 2;
  for (int i = 0; i < n; ++i) {
    const double th = h * g.x[i];
    const double c = std::cos(th);
    r.x[i] = std::tan(th);
    r.w[i] = h * g.w[i] / (c * c);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

// sinc-derivative kernels e_m(z) entering radial tensor entries; all are smooth,
// with series fallbacks below |z| = 0.5.
namespace sinckern {

inline double e0(double z) {
  if (std::abs(z) < 0.5) {
    const double z2 = z * z;
    return 1 + z2 * (-1.0 / 6 + z2 * (1.0 / 120 + z2 * (-1.0 / 5040 + z2 / 362880)));
  }
  return std::sin(z) / z;
}
inline double e1(double z) {  // s'(z)
  if (std::abs(z) < 0.5) {
    const double z2 = z * z;
    return z * (-1.0 / 3 + z2 * (1.0 / 30 + z2 * (-1.0 / 840 + z2 * (1.0 / 45360 - z2 / 3991680))));
  }
  return (z * std::cos(z) - std::sin(z)) / (z * z);
}
inline double e2a(double z) {  // s''(z)
  if (std::abs(z) < 0.5) {
    const double z2 = z * z;
    return -1.0 / 3 + z2 * (1.0 / 10 + z2 * (-1.0 / 168 + z2 * (1.0 / 6480 - z2 / 443520)));
  }
  return (-z * z * std::sin(z) - 2 * z * std::cos(z) + 2 * std::sin(z)) / (z * z * z);
}
inline double e2b(double z) {  // s'(z)/z
  if (std::abs(z) < 0.5) {
    const double z2 = z * z;
    return -1.0 / 3 + z2 * (1.0 / 30 + z2 * (-1.0 / 840 + z2 * (1.0 / 45360 - z2 / 3991680)));
  }
  return (z * std::cos(z) - std::sin(z)) / (z * z * z);
}
inline double e3a(double z) {  // s'''(z)
  if (std::abs(z) < 0.5) {
    const double z2 = z * z;
    return z * (1.0 / 5 + z2 * (-1.0 / 42 + z2 * (1.0 / 1080 + z2 * (-1.0 / 55440 + z2 / 4717440))));
  }
  const double z2 = z * z;
  return (-z2 * z * std::cos(z) + 3 * z2 * std::sin(z) + 6 * z * std::cos(z) - 6 * std::sin(z)) /
         (z2 * z2);
}
inline double e3b(double z) {  // (z s'' - s')/z^2
  if (std::abs(z) < 0.5) {
    const double z2 = z * z;
    return z * (1.0 / 15 + z2 * (-1.0 / 210 + z2 * (1.0 / 7560 + z2 * (-1.0 / 498960 + z2 / 51891840))));
  }
  const double z2 = z * z;
  return (-z2 * std::sin(z) - 3 * z * std::cos(z) + 3 * std::sin(z)) / (z2 * z2);
}
inline double e4a(double z) {  // s''''(z)
  if (std::abs(z) < 0.5) {
    const double z2 = z * z;
    return 1.0 / 5 + z2 * (-1.0 / 14 + z2 * (1.0 / 216 + z2 * (-1.0 / 7920 + z2 / 524160)));
  }
  const double z2 = z * z;
  return (z2 * z2 * std::sin(z) + 4 * z2 * z * std::cos(z) - 12 * z2 * std::sin(z) -
          24 * z * std::cos(z) + 24 * std::sin(z)) /
         (z2 * z2 * z);
}
inline double e4b(double z) {  // (z^2 s''' - 2z s'' + 2 s')/z^3
  if (std::abs(z) < 0.5) {
    const double z2 = z * z;
    return 1.0 / 15 + z2 * (-1.0 / 70 + z2 * (1.0 / 1512 + z2 * (-1.0 / 71280 + z2 / 5765760)));
  }
  const double z2 = z * z;
  return (-z2 * z * std::cos(z) + 5 * z2 * std::sin(z) + 12 * z * std::cos(z) - 12 * std::sin(z)) /
         (z2 * z2 * z);
}
inline double e4d(double z) {  // (z s'' - s')/z^3
  if (std::abs(z) < 0.5) {
    const double z2 = z * z;
    return 1.0 / 15 + z2 * (-1.0 / 210 + z2 * (1.0 / 7560 + z2 * (-1.0 / 498960 + z2 / 51891840)));
  }
  const double z2 = z * z;
  return (-z2 * std::sin(z) - 3 * z * std::cos(z) + 3 * std::sin(z)) / (z2 * z2 * z);
}

}  // namespace sinckern

}  // namespace landau
