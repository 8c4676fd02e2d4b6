#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "landau/sources.hpp"
#include "landau/volterra.hpp"

using namespace landau;

TEST_CASE("time grid rounding", "[volterra]") {
  auto g = TimeGrid::make(20.0, 0.1);
  CHECK(g.n_steps == 200);
  CHECK(g.size() == 201);
  CHECK(g.T() == Catch::Approx(20.0));
  CHECK(g.time(3) == Catch::Approx(0.3));
}

TEST_CASE("closed-form anchor: lambda 0, source t gives sin t", "[volterra]") {
  const double dt = 0.01;
  auto g = TimeGrid::make(20.0, dt);
  std::vector<double> src(g.size());
  for (int i = 0; i < g.size(); ++i) src[i] = g.time(i);
  auto rho = apply_resolvent<double>(src, 0.0, dt);
  double err = 0;
  for (int i = 0; i < g.size(); ++i) err = std::max(err, std::abs(rho[i] - std::sin(g.time(i))));
  CHECK(err <= 5 * dt * dt);
}

TEST_CASE("resolvent route agrees with direct time marching", "[volterra]") {
  const double dt = 0.005;
  auto g = TimeGrid::make(10.0, dt);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double lambda : {0.0, 0.5, 2.0}) {
    std::vector<Complex> src(g.size());
    double a1 = u(rng), a2 = u(rng), w1 = 2 * u(rng), w2 = 2 * u(rng);
    for (int i = 0; i < g.size(); ++i) {
      const double t = g.time(i);
      src[i] = Complex(a1 * std::cos(w1 * t), a2 * std::sin(w2 * t));
    }
    auto r1 = apply_resolvent<Complex>(src, lambda, dt);
    auto r2 = volterra_step<Complex>(src, lambda, dt);
    double d = 0;
    for (int i = 0; i < g.size(); ++i) d = std::max(d, std::abs(r1[i] - r2[i]));
    CHECK(d < 1e-5);
  }
}

TEST_CASE("batched routes match the single-track ones bitwise", "[volterra]") {
  const double dt = 0.02;
  const int n = 301, n_src = 7;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::vector<double>> single(n_src, std::vector<double>(n));
  std::vector<double> batched(std::size_t(n) * n_src);
  for (int s = 0; s < n_src; ++s)
    for (int i = 0; i < n; ++i) {
      single[s][i] = u(rng);
      batched[std::size_t(i) * n_src + s] = single[s][i];
    }
  for (double lambda : {0.0, 1.3}) {
    auto bres = apply_resolvent_many(batched, n_src, lambda, dt);
    auto bmar = volterra_step_many(batched, n_src, lambda, dt);
    for (int s = 0; s < n_src; ++s) {
      auto sres = apply_resolvent<double>(single[s], lambda, dt);
      auto smar = volterra_step<double>(single[s], lambda, dt);
      for (int i = 0; i < n; ++i) {
        CHECK(bres[std::size_t(i) * n_src + s] == sres[i]);
        CHECK(bmar[std::size_t(i) * n_src + s] == smar[i]);
      }
    }
  }
}

TEST_CASE("mode grid measure and representatives", "[volterra]") {
  auto g = ModeGrid::make(0.1, 4.0, 24);
  CHECK(g.modes.size() == 24u * 13u);  // one of each +-xi pair
  double vol = 0;
  for (const auto& m : g.modes) vol += 2 * m.weight;  // both pair members
  const double exact = 4 * M_PI / 3 * (std::pow(4.0, 3.0) - std::pow(0.1, 3.0));
  CHECK(vol == Catch::Approx(exact).epsilon(0.01));
  for (const auto& m : g.modes) CHECK(m.lambda == Catch::Approx(norm(m.xi)));
}

TEST_CASE("linear solve and field reconstruction basics", "[volterra]") {
  Config cfg;
  cfg.T_horizon = 5.0;
  cfg.dt = 0.05;
  cfg.xi_levels = 12;
  cfg.epsilon = 1e-3;
  auto data = make_initial_data(cfg.family, cfg.epsilon);
  auto ts = solve_linear(*data, cfg);
  REQUIRE(ts.rho.size() == ts.xi.modes.size());
  FieldEvaluator ev(ts);
  CHECK(ev.T() == Catch::Approx(5.0));

  // rho is real and odd in x1 for this family
  const Vec3 x{0.8, 0.2, -0.1};
  const Vec3 xm{-0.8, 0.2, -0.1};
  CHECK(ev.rho(1.0, x) == Catch::Approx(-ev.rho(1.0, xm)).margin(1e-15));

  // E equals the finite-difference gradient of the potential via gradE symmetry
  const Mat3 gE = ev.gradE(1.0, x);
  CHECK(gE[1] == Catch::Approx(gE[3]).margin(1e-12));
  const double h = 1e-4;
  Vec3 xp = x, xmm = x;
  xp[0] += h;
  xmm[0] -= h;
  const double fd = (ev.E(1.0, xp)[0] - ev.E(1.0, xmm)[0]) / (2 * h);
  CHECK(gE[0] == Catch::Approx(fd).margin(1e-6 * std::max(1.0, std::abs(fd))));

  // tensor entries: m = 1 reproduces |E| components
  const double g1 = ev.grad_pot_maxabs(1, 1.0, x);
  CHECK(g1 == Catch::Approx(max_abs(ev.E(1.0, x))).epsilon(1e-12));

  CHECK_THROWS_AS(ev.rho(6.0, x), std::out_of_range);
}

TEST_CASE("singular decomposition reconstructs the solved track", "[volterra]") {
  Config cfg;
  cfg.T_horizon = 4.0;
  cfg.dt = 0.1;
  cfg.xi_levels = 8;
  auto data = make_initial_data("gaussian-odd", 1e-3);
  auto ts = solve_linear(*data, cfg);
  auto dec = decompose_rho(ts, *data);
  const std::size_t m = 3;
  const Mode& md = ts.xi.modes[m];
  for (int i = 0; i < ts.grid.size(); ++i) {
    const double t = ts.grid.time(i);
    const Complex rec = std::cos(t) * dec.sing1.rho[m][i] + std::sin(t) * dec.sing2.rho[m][i] +
                        dec.resid.rho[m][i];
    CHECK(std::abs(rec - ts.rho[m][i]) < 1e-15);
  }
  // t = 0 slice of the first singular part is the cut-off initial density
  const Complex expect = cutoff::chi(md.xi) * data->moment0_hat(md.xi);
  CHECK(std::abs(dec.sing1.rho[m][0] - expect) < 1e-15);
}
