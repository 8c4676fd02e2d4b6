#include <catch2/catch_amalgamated.hpp>

#include "landau/estimates.hpp"
#include "landau/sources.hpp"

using namespace landau;
using namespace landau::estimates;

TEST_CASE("a8 validity domain and log branch", "[estimates]") {
  CHECK_THROWS_AS(lemma_a8_check(3.5, 3.0, 1.0, Vec3{}), std::invalid_argument);
  CHECK_THROWS_AS(lemma_a8_check(4.0, 5.0, 1.0, Vec3{}), std::invalid_argument);
  auto c = lemma_a8_check(5.0, 3.0, 2.0, Vec3{1, 0, 0});
  CHECK(c.lhs > 0);
  CHECK(std::isfinite(c.ratio));
  // beta1 = 4 activates the logarithmic factor in the majorant
  auto c4 = lemma_a8_check(4.0, 4.0, 2.0, Vec3{1, 0, 0});
  const double w = weight(2.0, Vec3{1, 0, 0});
  CHECK(c4.rhs == Catch::Approx(std::pow(w, -4.0) * std::log(2 + 2 + 1)));
}

TEST_CASE("a8 t = 0 edge and symmetry of the convolution", "[estimates]") {
  auto c = lemma_a8_check(5.0, 3.0, 0.0, Vec3{2, 0, 0});
  CHECK(c.lhs == 0.0);
  // for beta1 = beta2 the substitution s -> t-s, y -> x-y leaves the LHS fixed
  const double t = 3.0, X = 1.5;
  const double fwd = adaptive_simpson(
      [&](double s) { return estimates::detail::conv_inner(t - s, s, 4.0, 4.0, X); }, 0.0, t,
      1e-9);
  const double rev = adaptive_simpson(
      [&](double s) { return estimates::detail::conv_inner(s, t - s, 4.0, 4.0, X); }, 0.0, t,
      1e-9);
  CHECK(std::abs(fwd - rev) < 1e-7);
}

TEST_CASE("a3 closed anchor at the origin", "[estimates]") {
  // t = 0, x = 0: LHS = int <v>^{-n-3} dv; for n = 2 this is 4 pi / 3
  auto c = lemma_a3_check(2.0, 0.0, Vec3{0, 0, 0});
  CHECK(c.lhs == Catch::Approx(4 * M_PI / 3).epsilon(1e-8));
  CHECK(c.rhs == 1.0);
  CHECK_THROWS_AS(lemma_a3_check(0.0, 1.0, Vec3{}), std::invalid_argument);
}

TEST_CASE("a3 large-time decay slope", "[estimates]") {
  const double l10 = lemma_a3_check(1.0, 10.0, Vec3{0, 0, 0}).lhs;
  const double l100 = lemma_a3_check(1.0, 100.0, Vec3{0, 0, 0}).lhs;
  const double slope = std::log(l100 / l10) / std::log(10.0);
  CHECK(slope == Catch::Approx(-3.0).margin(0.05));
}

TEST_CASE("A-integral catalog and guards", "[estimates]") {
  CHECK_THROWS_AS(a_spec(0, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(a_spec(9, 0.05), std::invalid_argument);
  const auto s1 = a_spec(1, 0.05);
  CHECK(s1.p == Catch::Approx(2.95));
  CHECK(s1.r == 4.0);
  const auto s8 = a_spec(8, 0.05);
  CHECK(s8.pref == 5);
}

TEST_CASE("A-integral Monte-Carlo vs deterministic quadrature", "[estimates]") {
  AOptions opts;
  opts.v_samples = 20000;
  for (int k : {1, 3, 8}) {
    auto mc = A_integral(k, 2.0, Vec3{0, 0, 0}, 0.05, opts);
    const double q = A_integral_quadrature(k, 2.0, Vec3{0, 0, 0}, 0.05, 12, 24);
    CHECK(std::abs(mc.value - q) < 5 * mc.sigma + 0.02 * std::abs(q));
  }
}

TEST_CASE("A-integral determinism and error guard", "[estimates]") {
  AOptions opts;
  auto a = A_integral(2, 4.0, Vec3{1, 0, 0}, 0.05, opts);
  auto b = A_integral(2, 4.0, Vec3{1, 0, 0}, 0.05, opts);
  CHECK(a.value == b.value);
  CHECK(a.sigma == b.sigma);
  CHECK(A_integral(2, 0.0, Vec3{}, 0.05, opts).value == 0.0);
  AOptions strict = opts;
  strict.v_samples = 50;
  strict.rel_sigma_max = 1e-12;
  CHECK_THROWS_AS(A_integral(2, 4.0, Vec3{1, 0, 0}, 0.05, strict), QuadratureError);
}

TEST_CASE("A-integral sweep shape", "[estimates]") {
  AOptions opts;
  opts.v_samples = 2000;
  std::vector<SpaceTimeSample> s = {{1.0, Vec3{0, 0, 0}}, {4.0, Vec3{2, 0, 0}}};
  auto rep = lemma_42_check(s, 0.05, opts);
  REQUIRE(rep.low.rows.size() == 2);
  REQUIRE(rep.high.rows.size() == 2);
  CHECK(rep.low.rows[0].lhs > 0);
  CHECK(rep.high.rows[0].lhs > 0);
  CHECK_THROWS_AS(lemma_42_check({{0.5, Vec3{}}}, 0.05, opts), std::invalid_argument);
}

TEST_CASE("singular-part decay sweep", "[estimates]") {
  Config cfg;
  cfg.T_horizon = 6.0;
  cfg.dt = 0.1;
  cfg.xi_levels = 10;
  auto data = make_initial_data("gaussian-odd", 1e-3);
  auto ts = solve_linear(*data, cfg);
  auto dec = decompose_rho(ts, *data);
  const double f0b = f0_norm(*data);
  std::vector<SpaceTimeSample> samples = {{0.0, Vec3{0, 0, 0}}, {3.0, Vec3{1, 0, 0}},
                                          {6.0, Vec3{4, 0, 0}}};
  auto rep = singular_decay_check(dec.sing1, f0b, samples, 0, 0);
  REQUIRE(rep.rows.size() == 3);
  CHECK(std::isfinite(rep.max_ratio()));
  CHECK_THROWS_AS(singular_decay_check(dec.sing1, f0b, samples, 3, 2), std::invalid_argument);
}
