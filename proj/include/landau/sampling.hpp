#pragma once

#include <cmath>
#include <vector>

#include "landau/vec.hpp"

namespace landau {

// 26-point spherical rule (axes + edge midpoints + cube vertices), degree 7.
// Weights sum to 1 over the unit sphere average.
struct Direction {
  Vec3 n;
  double w;
};

inline const std::vector<Direction>& directions26() {
  static const std::vector<Direction> dirs = [] {
    std::vector<Direction> d;
    const double wa = 1.0 / 21.0;     // 6 axis points
    const double we = 4.0 / 105.0;    // 12 edge midpoints
    const double wv = 27.0 / 840.0;   // 8 vertices
    for (int i = 0; i < 3; ++i)
      for (int s : {1, -1}) {
        Vec3 n{0, 0, 0};
        n[i] = s;
        d.push_back({n, wa});
      }
    const double r2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        for (int si : {1, -1})
          for (int sj : {1, -1}) {
            Vec3 n{0, 0, 0};
            n[i] = si * r2;
            n[j] = sj * r2;
            d.push_back({n, we});
          }
    const double r3 = 1.0 / std::sqrt(3.0);
    for (int sx : {1, -1})
      for (int sy : {1, -1})
        for (int sz : {1, -1}) d.push_back({Vec3{sx * r3, sy * r3, sz * r3}, wv});
    return d;
  }();
  return dirs;
}

inline std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> r(n);
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i) r[i] = std::exp(la + (lb - la) * i / (n - 1));
  return r;
}

// Documented space-time sample set for "sampled sup" quantities: origin plus
// log-spaced radii along the 26 directions, at the given times.
struct SpaceTimeSample {
  double t;
  Vec3 x;
};

inline std::vector<SpaceTimeSample> spacetime_samples(const std::vector<double>& times,
                                                      double r_max = 1000.0, int n_r = 12) {
  std::vector<SpaceTimeSample> out;
  auto radii = log_spaced(0.25, r_max, n_r);
  for (double t : times) {
    out.push_back({t, Vec3{0, 0, 0}});
    for (double r : radii)
      for (const auto& d : directions26()) out.push_back({t, r * d.n});
  }
  return out;
}

}  // namespace landau
