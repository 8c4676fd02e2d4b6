#include <catch2/catch_amalgamated.hpp>

#include "landau/nonlinear.hpp"
#include "landau/sources.hpp"

using namespace landau;

TEST_CASE("zero-field integrands reduce to free streaming", "[nonlinear]") {
  GaussianOdd data(1e-3);
  auto zero = zero_field();
  PathOpts opts;
  const double t = 3.0;
  const Vec3 x{0.7, -0.2, 0.4}, v{0.5, 0.1, -0.3};
  auto pair = moment_integrands(data, zero, t, x, v, opts);
  CHECK(pair.I == Catch::Approx(data.f0(x - t * v, v)).epsilon(1e-14));
  CHECK(pair.R == 0.0);
  CHECK(moment_integrand_I(data, zero, t, x, v, opts) == pair.I);
  CHECK(moment_integrand_R(data, zero, t, x, v, opts) == 0.0);
}

TEST_CASE("zero-field moments at t = 0 match the closed moments", "[nonlinear]") {
  GaussianOdd data(1e-2);
  auto zero = zero_field();
  PathOpts opts;
  const Vec3 x{0.6, 0.1, -0.3};
  auto e = compute_moment_entry(data, zero, 0.0, x, 32, opts);
  // 32 tan-rule nodes per axis resolve the Gaussian moments to ~1e-6 relative
  CHECK(e.R0() == Catch::Approx(data.moment0(x)).epsilon(1e-4));
  CHECK(max_abs(e.R1()) < 1e-10);
  CHECK(max_abs(e.R2()) == Catch::Approx(max_abs(data.moment2(x))).epsilon(1e-4));
  CHECK(e.C0 == 0.0);
}

TEST_CASE("free-transport conservation residual shrinks at second order", "[nonlinear]") {
  GaussianOdd data(1e-2);
  auto zero = zero_field();
  PathOpts opts{0.25, 1e-11, 30};
  auto grid_at = [&](double h) {
    std::vector<double> times = {1.0 - h, 1.0, 1.0 + h};
    return compute_moment_grid(data, zero, times, Vec3{0.4, 0, 0}, 3, h, 28, opts);
  };
  auto r1 = conservation_residual(grid_at(0.4), zero);
  auto r2 = conservation_residual(grid_at(0.2), zero);
  CHECK(r1.max1 > 0);
  const double order = std::log2(r1.max1 / r2.max1);
  CHECK(order > 1.5);
  CHECK(order < 2.6);
  CHECK_THROWS_AS(
      conservation_residual(compute_moment_grid(data, zero, {1.0, 1.2}, Vec3{}, 3, 0.2, 8, opts),
                            zero),
      std::invalid_argument);
}

TEST_CASE("mc sample set is deterministic with finite weights", "[nonlinear]") {
  auto a = McSampleSet::draw(500, 123);
  auto b = McSampleSet::draw(500, 123);
  auto c = McSampleSet::draw(500, 124);
  REQUIRE(a.a.size() == 500);
  CHECK(a.a == b.a);
  CHECK(a.inv_p == b.inv_p);
  CHECK(a.a != c.a);
  for (double w : a.inv_p) {
    CHECK(std::isfinite(w));
    CHECK(w > 0);
  }
}

TEST_CASE("mc sources at zero field estimate the free density", "[nonlinear]") {
  GaussianOdd data(1e-2);
  auto mc = McSampleSet::draw(20000, 42);
  TimeGrid grid = TimeGrid::make(2.0, 0.5);
  ModeGrid modes = ModeGrid::make(0.3, 1.0, 3);
  PathOpts opts;
  auto src = detail::mc_sources(data, zero_field(), mc, grid, modes, opts, 1);
  REQUIRE(src.size() == modes.modes.size());
  // spot check a few (mode, time) pairs against the closed form
  for (std::size_t m : {std::size_t(0), src.size() / 2, src.size() - 1}) {
    for (int k : {0, grid.size() - 1}) {
      const Complex closed = data.rho_free_hat(grid.time(k), modes.modes[m].xi);
      CHECK(std::abs(src[m][k] - closed) < 6e-3);  // 20k samples, eps = 1e-2, few-sigma slack
    }
  }
}

TEST_CASE("mc sources are independent of thread count", "[nonlinear]") {
  GaussianOdd data(1e-3);
  auto mc = McSampleSet::draw(200, 5);
  TimeGrid grid = TimeGrid::make(1.0, 0.25);
  ModeGrid modes = ModeGrid::make(0.3, 1.0, 3);
  PathOpts opts;
  auto s1 = detail::mc_sources(data, zero_field(), mc, grid, modes, opts, 1);
  auto s8 = detail::mc_sources(data, zero_field(), mc, grid, modes, opts, 8);
  CHECK(s1 == s8);
}

TEST_CASE("small nonlinear solve converges", "[nonlinear]") {
  Config cfg;
  cfg.T_horizon = 4.0;
  cfg.dt = 0.25;
  cfg.xi_levels = 6;
  cfg.mc_samples = 200;
  cfg.epsilon = 1e-3;
  auto data = make_initial_data(cfg.family, cfg.epsilon);
  auto res = solve_nonlinear(*data, cfg);
  CHECK(res.trace.converged);
  CHECK(res.trace.iterations <= cfg.max_outer);
  REQUIRE(!res.trace.norm1T.empty());
  CHECK(res.trace.norm1T.back() > 0);
  for (double r : res.trace.ratios()) CHECK(r < 1.0);
}

TEST_CASE("scatter profile: zero field is exactly free transport", "[nonlinear]") {
  GaussianOdd data(1e-3);
  auto zero = zero_field(40.0);
  PathOpts opts{0.25, 1e-11, 30};
  CHECK(scatter_g(data, zero, 3.0, Vec3{1, 0, 0}, Vec3{0.5, 0, 0}, opts) ==
        Catch::Approx(data.f0(Vec3{1, 0, 0}, Vec3{0.5, 0, 0})).epsilon(1e-14));
  auto samples = builtin_scatter_samples();
  auto prof = scattering_profile(data, zero, {2.0, 4.0}, samples, opts);
  for (const auto& r : prof.rows) CHECK(r.sup_diff == 0.0);
  CHECK_THROWS_AS(scattering_profile(data, zero, {30.0}, samples, opts), std::invalid_argument);
}

TEST_CASE("builtin scatter samples are deduplicated", "[nonlinear]") {
  auto s = builtin_scatter_samples();
  CHECK(s.size() > 50);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      CHECK((max_abs(s[i].x - s[j].x) > 1e-12 || max_abs(s[i].v - s[j].v) > 1e-12));
}
