#include <catch2/catch_amalgamated.hpp>

#include "landau/kernels.hpp"

using namespace landau;
using kernels::Band;

TEST_CASE("full-band kernel value matches the closed form", "[kernels]") {
  for (double s : {0.5, 1.0, 2.0}) {
    for (double r : {0.0, 0.5, 1.5, 4.0}) {
      const double closed = kernels::G(s, Vec3{r, 0, 0});
      CHECK(kernels::value(Band::Full, s, r) == Catch::Approx(closed).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(kernels::G(0.0, Vec3{1, 0, 0}), std::domain_error);
}

TEST_CASE("band split sums to the full kernel", "[kernels]") {
  for (double s : {0.7, 1.3}) {
    for (double r : {0.0, 1.0, 3.0}) {
      const double lo = kernels::value(Band::Low, s, r);
      const double hi = kernels::value(Band::High, s, r);
      const double full = kernels::value(Band::Full, s, r);
      CHECK(lo + hi == Catch::Approx(full).margin(1e-10));
    }
  }
}

TEST_CASE("time derivative order j1 matches finite differences", "[kernels]") {
  const double s = 1.2, r = 0.8, h = 1e-5;
  const double fd = (kernels::value(Band::Full, s + h, r) - kernels::value(Band::Full, s - h, r)) /
                    (2 * h);
  CHECK(kernels::value(Band::Full, s, r, 1) == Catch::Approx(fd).margin(1e-7));
}

TEST_CASE("first spatial entry matches the radial derivative", "[kernels]") {
  const double s = 1.0, r = 1.3, h = 1e-5;
  const double fd =
      (kernels::value(Band::Low, s, r + h) - kernels::value(Band::Low, s, r - h)) / (2 * h);
  CHECK(kernels::eval_maxabs(Band::Low, s, r, 0, 1, false) ==
        Catch::Approx(std::abs(fd)).margin(1e-7));
}

TEST_CASE("kernel evaluation is stable at the origin", "[kernels]") {
  for (int j2 = 0; j2 <= 3; ++j2) {
    const double v = kernels::eval_maxabs(Band::Low, 1.0, 0.0, 0, j2, true);
    CHECK(std::isfinite(v));
  }
  // odd-order entries of a radial profile vanish at r = 0
  CHECK(kernels::eval_maxabs(Band::Low, 1.0, 0.0, 0, 1, false) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("decay majorant branch structure", "[kernels]") {
  using kernels::DecayStyle;
  const double t = 2.0, r = 3.0;
  const Vec3 x{r, 0, 0};
  const double w = weight(t, x);
  CHECK(kernels::decay_majorant(DecayStyle::LowRiesz, t, r, 1, 2) ==
        Catch::Approx(std::pow(w, -5.0)));
  CHECK(kernels::decay_majorant(DecayStyle::Low, t, r, 0, 1) ==
        Catch::Approx(bracket(t) * std::pow(w, -5.0)));
  CHECK(kernels::decay_majorant(DecayStyle::Low, t, r, 2, 1) == Catch::Approx(std::pow(w, -6.0)));
  CHECK(kernels::decay_majorant(DecayStyle::HighRiesz, t, r, 0, 0) ==
        Catch::Approx(t / (std::pow(t + r, 4.0) * std::pow(w, 7.0))));
}

TEST_CASE("decay sweep report over a small sample set", "[kernels]") {
  std::vector<SpaceTimeSample> samples = {{1.0, Vec3{0, 0, 0}}, {2.0, Vec3{4, 0, 0}},
                                          {8.0, Vec3{1, 0, 0}}};
  for (auto style : {kernels::DecayStyle::LowRiesz, kernels::DecayStyle::Low,
                     kernels::DecayStyle::HighRiesz}) {
    auto rep = kernels::verify_kernel_decay(samples, 0, 1, style);
    REQUIRE(rep.rows.size() == 3);
    CHECK(std::isfinite(rep.max_ratio()));
    CHECK(rep.max_ratio() > 0);
  }
  CHECK_THROWS_AS(kernels::verify_kernel_decay(samples, 3, 2, kernels::DecayStyle::Low),
                  std::invalid_argument);
}

TEST_CASE("builtin decay samples cover the dyadic grid", "[kernels]") {
  auto s = kernels::builtin_decay_samples();
  CHECK(s.size() == 72);
  CHECK(s.front().t == 1.0);
  CHECK(norm(s.back().x) == 128.0);
}
