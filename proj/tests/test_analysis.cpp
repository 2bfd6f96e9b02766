#include <doctest.h>

#include "edgewall/analysis.hpp"
#include "edgewall/dynamics.hpp"
#include "edgewall/errors.hpp"
#include "edgewall/grid.hpp"

#include <cmath>
#include <numbers>

using namespace edgewall;

namespace {
const double pi = std::numbers::pi;

Profile synthetic(const Grid& g, double beta, double (*f)(double)) {
  Eigen::VectorXd t = g.nodes().unaryExpr(f);
  t(0) = beta;
  return Profile(g, t, beta);
}
}  // namespace

TEST_CASE("power-law tail is recovered") {
  const Grid g = make_stretched_grid(0.125, 20.0, 1000.0);
  const auto p = synthetic(g, 3.0, [](double x) { return 3 / std::max(x, 1.0); });
  const auto f = fit_decay(p, 50, 500);
  CHECK(f.power.exponent_or_rate == doctest::Approx(-1).epsilon(1e-4));
  CHECK(f.power.prefactor == doctest::Approx(3).epsilon(1e-4));
  CHECK(f.power.r_squared == doctest::Approx(1).epsilon(1e-10));
  CHECK(f.best().model == DecayModel::power);
  CHECK(f.power.x_lo >= 50);
  CHECK(f.power.x_hi <= 500);
}

TEST_CASE("exponential tail is recovered") {
  const Grid g = make_uniform_grid(0.1, 60.0);
  const auto p = synthetic(g, 2.0, [](double x) { return 2 * std::exp(-0.7 * x); });
  const auto f = fit_decay(p, 10, 40);
  CHECK(f.exponential.exponent_or_rate == doctest::Approx(0.7).epsilon(1e-4));
  CHECK(f.exponential.prefactor == doctest::Approx(2).epsilon(1e-4));
  CHECK(f.best().model == DecayModel::exponential);
  CHECK(to_string(DecayModel::exponential) == "exponential");
  CHECK(to_string(DecayModel::power) == "power");
}

TEST_CASE("tail offset") {
  const Grid g = make_stretched_grid(0.125, 20.0, 1000.0);
  const auto p = synthetic(g, pi + 2.0, [](double x) { return pi + 2 / std::max(x, 1.0); });
  CHECK(fit_decay(p, 50, 500, pi).power.exponent_or_rate == doctest::Approx(-1).epsilon(1e-4));
}

TEST_CASE("window errors") {
  const Grid g = make_stretched_grid(0.125, 20.0, 1000.0);
  const auto p = synthetic(g, 1.0, [](double x) { return 1 / (1 + x); });
  CHECK_THROWS_AS(fit_decay(p, 50, 52), WindowError);
  CHECK_THROWS_AS(fit_decay(p, 500, 50), WindowError);
  CHECK_THROWS_AS(fit_decay(p, 2000, 3000), WindowError);
  const auto flat = synthetic(g, 0.0, [](double) { return 0.0; });
  CHECK_THROWS_AS(fit_decay(flat, 50, 500), WindowError);
  const auto wavy = synthetic(g, 0.0, [](double x) { return std::sin(x / 30) / x; });
  CHECK_THROWS_AS(fit_decay(wavy, 50, 500), WindowError);
}

TEST_CASE("diagnostics of simple profiles") {
  const Grid g = make_stretched_grid(0.125, 20.0, 1000.0);
  const auto d = diagnostics(initial_profile(pi / 4, g));
  CHECK(d.theta_infinity == 0);
  CHECK(d.monotone_flag);
  CHECK_FALSE(d.winding_flag);
  CHECK_FALSE(d.overshoot_flag);
  CHECK(d.total_variation == doctest::Approx(pi / 4).epsilon(1e-6));
  CHECK(d.max_abs_theta == pi / 4);
  CHECK(d.boundary_slope == doctest::Approx(-pi / 16).epsilon(1e-2));

  const auto w = diagnostics(synthetic(g, 3 * pi / 2, [](double x) { return 3 * pi / 2 * std::exp(-x); }));
  CHECK(w.winding_flag);

  const auto o = diagnostics(synthetic(g, 1.0, [](double x) { return (1 - x) * std::exp(-x); }));
  CHECK(o.overshoot_flag);
  CHECK_FALSE(o.monotone_flag);

  const auto pi_tail = diagnostics(synthetic(g, 3.0, [](double x) { return pi + (3 - pi) * std::exp(-x); }));
  CHECK(pi_tail.theta_infinity == doctest::Approx(pi));
}

TEST_CASE("boundary slope is exact on the edge expansion") {
  const Grid g = make_stretched_grid(0.01, 20.0, 100.0);
  const auto p = synthetic(g, 0.5, [](double x) {
    return 0.5 - 0.3 * x + 0.2 * x * x + (x > 0 ? 0.7 * x * x * std::log(x) : 0.0);
  });
  CHECK(boundary_slope(p) == doctest::Approx(-0.3).epsilon(1e-9));
}

TEST_CASE("diagnostics are invariant under reflection") {
  const Grid g = make_stretched_grid(0.125, 20.0, 1000.0);
  const auto p = relax({pi / 3, 3}, g, initial_profile(pi / 3, g), {}).profile;
  const auto a = diagnostics(p), b = diagnostics(p.negated());
  CHECK(b.theta_infinity == -a.theta_infinity);
  CHECK(b.total_variation == doctest::Approx(a.total_variation));
  CHECK(b.winding_flag == a.winding_flag);
  CHECK(b.overshoot_flag == a.overshoot_flag);
  CHECK(b.monotone_flag == a.monotone_flag);
  CHECK(b.boundary_slope == doctest::Approx(-a.boundary_slope));
  const auto fa = fit_decay(p, 50, 500), fb = fit_decay(p.negated(), 50, 500);
  CHECK(fb.power.exponent_or_rate == doctest::Approx(fa.power.exponent_or_rate));
}
