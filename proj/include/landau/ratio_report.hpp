#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "landau/vec.hpp"

namespace landau {

// One verified-inequality evaluation: LHS magnitude, the majorant RHS
// majorant, and their ratio. The implicit constants of the inequalities are
// unknown, so everything is reported as ratios, never asserted against a fixed
// constant.
struct RatioRow {
  double t = 0;
  Vec3 x{0, 0, 0};
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
};

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  if (n < 3) return 0.0;
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t k = 0; k < idx.size();) {
      std::size_t k2 = k;
      while (k2 + 1 < idx.size() && v[idx[k2 + 1]] == v[idx[k]]) ++k2;
      const double avg = 0.5 * (k + k2);
      for (std::size_t j = k; j <= k2; ++j) r[idx[j]] = avg;
      k = k2 + 1;
    }
    return r;
  };
  auto ra = ranks(a), rb = ranks(b);
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) { ma += ra[i]; mb += rb[i]; }
  ma /= n; mb /= n;
  double num = 0, da = 0, db = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  if (da == 0 || db == 0) return 0.0;
  return num / std::sqrt(da * db);
}

struct RatioReport {
  std::vector<RatioRow> rows;

  double max_ratio() const {
    double m = 0;
    for (const auto& r : rows) m = std::max(m, r.ratio);
    return m;
  }
  RatioRow argmax() const {
    RatioRow best;
    for (const auto& r : rows)
      if (r.ratio >= best.ratio) best = r;
    return best;
  }
  // Trend of ratio against log<t,x>; near zero means the majorant captures the
  // decay with no residual growth.
  double trend() const {
    std::vector<double> lw, ra;
    for (const auto& r : rows) {
      if (r.ratio <= 0) continue;
      lw.push_back(std::log(weight(r.t, r.x)));
      ra.push_back(r.ratio);
    }
    return spearman(ra, lw);
  }
};

}  // namespace landau
