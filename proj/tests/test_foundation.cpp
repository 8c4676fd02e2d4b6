#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "landau/config.hpp"
#include "landau/cutoff.hpp"
#include "landau/parallel.hpp"
#include "landau/quadrature.hpp"
#include "landau/ratio_report.hpp"
#include "landau/rng.hpp"
#include "landau/sampling.hpp"
#include "landau/summation.hpp"
#include "landau/vec.hpp"

using namespace landau;

TEST_CASE("vec algebra and brackets", "[foundation]") {
  Vec3 a{1, 2, 3}, b{-2, 0, 1};
  CHECK(dot(a, b) == 1.0);
  CHECK(norm2(a) == 14.0);
  CHECK(max_abs(a - b) == 3.0);
  CHECK(det(Mat3{1, 0, 0, 0, 2, 0, 0, 0, 3}) == 6.0);
  CHECK(det(outer(a, a)) == 0.0);
  CHECK(bracket(0.0) == 1.0);
  CHECK(weight(3.0, Vec3{0, 0, 0}) == Catch::Approx(std::sqrt(10.0)));
  CHECK(weight_xv(a, b) == Catch::Approx(std::sqrt(1 + 14 + 5)));
  const Mat3 s = outer(a, b) + outer(b, a);
  CHECK(s[1] == s[3]);
}

TEST_CASE("gauss-legendre integrates polynomials exactly", "[foundation]") {
  for (int n : {2, 5, 16, 48}) {
    const auto& r = gauss_legendre(n);
    double m0 = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
      m0 += r.w[i];
      m2 += r.w[i] * r.x[i] * r.x[i];
    }
    CHECK(m0 == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(m2 == Catch::Approx(2.0 / 3).epsilon(1e-13));
  }
  // degree 2n-1 exactness at n = 4: integral of x^6 over [-1,1]
  const auto& r = gauss_legendre(4);
  double m6 = 0;
  for (int i = 0; i < 4; ++i) m6 += r.w[i] * std::pow(r.x[i], 6.0);
  CHECK(m6 == Catch::Approx(2.0 / 7).epsilon(1e-13));
}

TEST_CASE("adaptive simpson value and failure", "[foundation]") {
  const double v = adaptive_simpson([](double x) { return std::exp(-x * x); }, 0.0, 10.0, 1e-12);
  CHECK(v == Catch::Approx(std::sqrt(M_PI) / 2).epsilon(1e-10));
  // a needle the limited depth cannot resolve
  CHECK_THROWS_AS(adaptive_simpson([](double x) { return 1.0 / (1e-30 + x * x); }, -1.0, 1.0,
                                   1e-12, 4),
                  QuadratureError);
}

TEST_CASE("tan rule covers the whole line", "[foundation]") {
  const auto& r = tan_rule(64);
  double g = 0, c = 0;
  for (int i = 0; i < 64; ++i) {
    g += r.w[i] * std::exp(-r.x[i] * r.x[i]);
    c += r.w[i] * std::pow(1 + r.x[i] * r.x[i], -2.0);
  }
  CHECK(g == Catch::Approx(std::sqrt(M_PI)).epsilon(1e-8));
  CHECK(c == Catch::Approx(M_PI / 2).epsilon(1e-10));
}

TEST_CASE("sinc kernels match finite differences of sin(z)/z", "[foundation]") {
  auto s = [](double z) { return std::sin(z) / z; };
  const double h = 1e-5;
  for (double z : {0.1, 0.3, 0.7, 2.0, 9.0}) {
    CHECK(sinckern::e0(z) == Catch::Approx(s(z)).margin(1e-12));
    CHECK(sinckern::e1(z) == Catch::Approx((s(z + h) - s(z - h)) / (2 * h)).margin(1e-8));
    CHECK(sinckern::e2a(z) ==
          Catch::Approx((s(z + h) - 2 * s(z) + s(z - h)) / (h * h)).margin(1e-5));
    CHECK(sinckern::e2b(z) == Catch::Approx(sinckern::e1(z) / z).margin(1e-12));
    CHECK(sinckern::e3b(z) ==
          Catch::Approx((z * sinckern::e2a(z) - sinckern::e1(z)) / (z * z)).margin(1e-12));
    CHECK(sinckern::e4d(z) == Catch::Approx(sinckern::e3b(z) / z).margin(1e-12));
  }
  // series/closed-form agreement across the switch at |z| = 0.5; the series is
  // truncated at z^8, so the residual there is O(z^10/11!) ~ 2e-11
  for (double z : {0.499, 0.501}) {
    CHECK(sinckern::e0(z) == Catch::Approx(std::sin(z) / z).epsilon(1e-10));
  }
}

TEST_CASE("26-direction rule has degree at least 3", "[foundation]") {
  const auto& d = directions26();
  REQUIRE(d.size() == 26);
  double w = 0, x2 = 0, x4 = 0;
  for (const auto& dir : d) {
    w += dir.w;
    x2 += dir.w * dir.n[0] * dir.n[0];
    x4 += dir.w * std::pow(dir.n[0], 4.0);
  }
  CHECK(w == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(x2 == Catch::Approx(1.0 / 3).epsilon(1e-14));  // sphere average of x1^2
  CHECK(x4 == Catch::Approx(1.0 / 5).epsilon(1e-14));  // sphere average of x1^4
}

TEST_CASE("log_spaced endpoints and spacetime sample count", "[foundation]") {
  auto r = log_spaced(0.1, 10.0, 5);
  CHECK(r.front() == Catch::Approx(0.1));
  CHECK(r.back() == Catch::Approx(10.0));
  CHECK(r[2] == Catch::Approx(1.0));
  auto s = spacetime_samples({0.0, 1.0}, 100.0, 3);
  CHECK(s.size() == 2 * (1 + 3 * 26));
}

TEST_CASE("parallel_for is deterministic across thread counts", "[foundation]") {
  std::vector<double> serial(1000), threaded(1000);
  auto fill = [](std::vector<double>& out) {
    return [&out](std::size_t i) {
      auto rng = task_rng(7, i);
      std::uniform_real_distribution<double> u(0, 1);
      out[i] = u(rng);
    };
  };
  parallel_for(1000, 1, fill(serial));
  parallel_for(1000, 8, fill(threaded));
  CHECK(serial == threaded);
}

TEST_CASE("pairwise_sum agrees with plain accumulation", "[foundation]") {
  std::vector<double> v(1003);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.1 * i);
  const double ref = std::accumulate(v.begin(), v.end(), 0.0);
  CHECK(pairwise_sum(v) == Catch::Approx(ref).epsilon(1e-13));
}

TEST_CASE("task_rng streams are reproducible and distinct", "[foundation]") {
  auto a = task_rng(42, 1), b = task_rng(42, 1), c = task_rng(42, 2);
  CHECK(a() == b());
  CHECK(a() != c());
}

TEST_CASE("cutoff glue", "[foundation]") {
  CHECK(cutoff::psi(0.5) == 1.0);
  CHECK(cutoff::psi(1.0) == 1.0);
  CHECK(cutoff::psi(2.0) == 0.0);
  CHECK(cutoff::psi(1.5) == Catch::Approx(0.5));
  CHECK(cutoff::psi(1.2) > cutoff::psi(1.4));
  CHECK(cutoff::chi(Vec3{0.3, 0.4, 0.0}) == 1.0);
}

TEST_CASE("config set, validate, file parse", "[foundation]") {
  Config cfg;
  cfg.set("time.T", "42.5");
  CHECK(cfg.T_horizon == 42.5);
  CHECK_THROWS_AS(cfg.set("bogus.key", "1"), ConfigError);
  cfg.kappa0 = 2.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  namespace fs = std::filesystem;
  const fs::path p = fs::temp_directory_path() / "landau_test_cfg.ini";
  {
    std::ofstream out(p);
    out << "[time]\nT = 7.0  # horizon\ndt = 0.5\n[source]\nfamily = polyweight\n";
  }
  Config fromf = Config::from_file(p.string());
  CHECK(fromf.T_horizon == 7.0);
  CHECK(fromf.dt == 0.5);
  CHECK(fromf.family == "polyweight");
  CHECK(fromf.dump().at("time.T") == "7");
  fs::remove(p);
  CHECK_THROWS_AS(Config::from_file("/nonexistent/landau.ini"), ConfigError);
}

TEST_CASE("spearman and ratio trend", "[foundation]") {
  CHECK(spearman({1, 2, 3, 4}, {2, 4, 6, 8}) == Catch::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {8, 6, 4, 2}) == Catch::Approx(-1.0));
  RatioReport rep;
  for (int i = 1; i <= 6; ++i) {
    RatioRow r;
    r.t = i;
    r.lhs = 1.0;
    r.rhs = i;  // ratio falls with the weight
    r.ratio = r.lhs / r.rhs;
    rep.rows.push_back(r);
  }
  CHECK(rep.max_ratio() == 1.0);
  CHECK(rep.trend() == Catch::Approx(-1.0));
  CHECK(rep.argmax().t == 1.0);
}
