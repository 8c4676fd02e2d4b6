#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace landau {

// Fixed small shapes only: scalars, 3-vectors, 3x3 tensors.
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<double, 9>;  // row-major

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double c, const Vec3& a) { return {c * a[0], c * a[1], c * a[2]}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) { a[0] += b[0]; a[1] += b[1]; a[2] += b[2]; return a; }
inline Vec3& operator-=(Vec3& a, const Vec3& b) { a[0] -= b[0]; a[1] -= b[1]; a[2] -= b[2]; return a; }

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }

inline Mat3 operator+(const Mat3& a, const Mat3& b) {
  Mat3 m;
  for (int i = 0; i < 9; ++i) m[i] = a[i] + b[i];
  return m;
}

inline Mat3 outer(const Vec3& a, const Vec3& b) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[3 * i + j] = a[i] * b[j];
  return m;
}

inline double max_abs(const Vec3& a) {
  return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

inline double max_abs(const Mat3& m) {
  double r = 0;
  for (double x : m) r = std::max(r, std::abs(x));
  return r;
}

inline double det(const Mat3& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

// Japanese bracket <a> = sqrt(1+|a|^2).
inline double bracket(double a) { return std::sqrt(1.0 + a * a); }
inline double bracket(const Vec3& a) { return std::sqrt(1.0 + norm2(a)); }
inline double bracket(double t, const Vec3& x) { return std::sqrt(1.0 + t * t + norm2(x)); }
inline double bracket2(double a, double b) { return std::sqrt(1.0 + a * a + b * b); }

// Space-time weight <t,x> = sqrt(1+t^2+|x|^2) >= 1.
inline double weight(double t, const Vec3& x) { return bracket(t, x); }

// Phase-space weight <x,v> = sqrt(1+|x|^2+|v|^2).
inline double weight_xv(const Vec3& x, const Vec3& v) {
  return std::sqrt(1.0 + norm2(x) + norm2(v));
}

}  // namespace landau
