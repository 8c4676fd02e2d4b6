#pragma once

#include <cmath>

#include "landau/vec.hpp"

namespace landau {

// Smooth frequency cutoff: psi = 1 on [0,1], 0 on [2,inf), glued by the standard
// exponential bump sigma(u) = e^{-1/u}.
namespace cutoff {

inline double sigma(double u) { return u > 0 ? std::exp(-1.0 / u) : 0.0; }

inline double psi(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = sigma(2.0 - r), b = sigma(r - 1.0);
  return a / (a + b);
}

inline double chi(const Vec3& xi) { return psi(norm(xi)); }

}  // namespace cutoff

}  // namespace landau
