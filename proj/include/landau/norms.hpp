#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "landau/vec.hpp"

namespace landau {

// One sampled evaluation of a density history: the three potential gradients
// nabla^m Delta^{-1} rho for m=1,2,3, reduced to max-abs entries.
struct DensitySample {
  double t = 0;
  Vec3 x{0, 0, 0};
  double grad1 = 0;  // |nabla Delta^{-1} rho|, max-abs entry
  double grad2 = 0;  // |nabla^2 Delta^{-1} rho|
  double grad3 = 0;  // |nabla^3 Delta^{-1} rho|
};

// One sampled evaluation of a moment field g (scalar/vector/tensor reduced to
// max-abs entries).
struct MomentSample {
  double t = 0;
  Vec3 x{0, 0, 0};
  double value = 0;  // |g|
  double grad = 0;   // |nabla g|
};

// ||.||_{1,T}: sampled sup of <t,x>^{3-k0}|nabla D^-1 g| + <t,x>^{4-k0}|nabla^2 D^-1 g|
// + <t,x>^4 |nabla^3 D^-1 g|. This is a lower bound of the true sup: the sample
// set stands in for R^3.
inline double norm_1T(std::span<const DensitySample> samples, double T, double kappa0) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  double m1 = 0, m2 = 0, m3 = 0;
  for (const auto& s : samples) {
    if (s.t > T) continue;
    const double w = weight(s.t, s.x);
    m1 = std::max(m1, std::pow(w, 3.0 - kappa0) * s.grad1);
    m2 = std::max(m2, std::pow(w, 4.0 - kappa0) * s.grad2);
    m3 = std::max(m3, std::pow(w, 4.0) * s.grad3);
  }
  return m1 + m2 + m3;
}

// ||.||_{2,T}: sampled sup of <t,x>^4|nabla g| + <t,x>^3|g|.
inline double norm_2T(std::span<const MomentSample> samples, double T) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  double mg = 0, mv = 0;
  for (const auto& s : samples) {
    if (s.t > T) continue;
    const double w = weight(s.t, s.x);
    mg = std::max(mg, std::pow(w, 4.0) * s.grad);
    mv = std::max(mv, std::pow(w, 3.0) * s.value);
  }
  return mg + mv;
}

// Bootstrap monitor M = ||rho||_{1,T} + [f0].
struct NormMonitor {
  double norm1T = 0;
  double f0_bracket = 0;
  double M() const { return norm1T + f0_bracket; }
};

}  // namespace landau
