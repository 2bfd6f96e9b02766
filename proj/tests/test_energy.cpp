#include <doctest.h>

#include "edgewall/dynamics.hpp"
#include "edgewall/energy.hpp"
#include "edgewall/errors.hpp"
#include "edgewall/grid.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace edgewall;

namespace {

const double pi = std::numbers::pi;

Profile random_profile(const Grid& g, double beta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-1.5, 1.5), width(0.5, 4.0), centre(0.0, 10.0);
  const double a = amp(rng), w = width(rng), c = centre(rng);
  Eigen::VectorXd t = g.nodes().unaryExpr([&](double x) {
    return beta * std::exp(-x / w) + a * x * std::exp(-(x - c) * (x - c) / (w * w));
  });
  t(0) = beta;
  return Profile(g, t, beta);
}

}  // namespace

TEST_CASE("cutoff shape") {
  for (auto shape : {CutoffShape::quintic, CutoffShape::cosine}) {
    const Cutoff eta{pi / 3, shape};
    CHECK(eta(-1.0) == pi / 3);
    CHECK(eta(0.0) == doctest::Approx(pi / 3));
    CHECK(eta(1.0) == doctest::Approx(0).epsilon(1e-15));
    CHECK(eta(5.0) == 0);
    double prev = eta(0.0), slope = 0;
    for (int k = 1; k <= 1000; ++k) {
      const double v = eta(k / 1000.0);
      CHECK(v <= prev);
      slope = std::max(slope, (prev - v) * 1000);
      prev = v;
    }
    CHECK(slope <= eta.max_slope() * (1 + 1e-6));
    CHECK(slope >= eta.max_slope() * (1 - 1e-3));
  }
  // Quintic is C^2 at both ends: the centred second difference there is O(h).
  const Cutoff q{1.0};
  for (double h : {1e-2, 1e-3, 1e-4}) {
    CHECK(std::abs(q(h) - 2 * q(0) + q(-h)) / (h * h) < 11 * h);
    CHECK(std::abs(q(1 + h) - 2 * q(1) + q(1 - h)) / (h * h) < 11 * h);
  }
  CHECK(cutoff_eval(2.0, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("local energy reference values") {
  const Grid g = make_uniform_grid(0.01, 40.0);
  CHECK(local_energy(Profile(g, Eigen::VectorXd::Zero(g.size()), 0.0)) == 0);
  const auto wall = analytic_zero_nu_profile(pi / 2, g);
  CHECK(local_energy(wall) == doctest::Approx(1.0).epsilon(1e-3));
  // Linear ramp theta = beta max(0, 1 - x), beta = pi/4.
  const double beta = pi / 4;
  const Profile ramp(g, g.nodes().unaryExpr([beta](double x) { return beta * std::max(0.0, 1 - x); }), beta);
  CHECK(std::abs(local_energy(ramp) - 0.399270194442147) < 1e-5);
}

TEST_CASE("local energy respects the lower bound") {
  std::mt19937_64 rng(7);
  const Grid g = make_uniform_grid(0.02, 40.0);
  for (int k = 0; k < 30; ++k) {
    const double beta = std::uniform_real_distribution<double>(-pi / 2, pi / 2)(rng);
    const Profile p = random_profile(g, beta, rng);
    CHECK(local_energy(p) >= energy_lower_bound(beta) - 1e-3);
  }
}

TEST_CASE("Gagliardo seminorm") {
  const Grid g = make_stretched_grid(0.01, 20.0, 500.0);
  CHECK(gagliardo_J(Profile(g, Eigen::VectorXd::Constant(g.size(), 0.3), 0.3)) == 0);
  // J of the quintic cutoff itself, beta = pi/4.
  const Cutoff eta{pi / 4};
  const Grid fine = make_stretched_grid(0.001, 200.0, 2000.0, 1.0);
  const Profile pe(fine, eta.sample(fine), pi / 4);
  CHECK(gagliardo_J(pe) == doctest::Approx(1.375417493908921765).epsilon(1e-4));
}

TEST_CASE("Gagliardo seminorm is scale invariant") {
  const Grid g = make_stretched_grid(0.02, 20.0, 400.0);
  const double beta = 0.6;
  const auto shape = [beta](double x) { return beta / (1 + x * x); };
  const Profile p(g, g.nodes().unaryExpr(shape), beta);
  const Grid g2(3 * g.nodes());
  const Profile p2(g2, g2.nodes().unaryExpr([&](double x) { return shape(x / 3); }), beta);
  CHECK(gagliardo_J(p2) == doctest::Approx(gagliardo_J(p)).epsilon(1e-12));
}

TEST_CASE("renormalized energy structure") {
  const Grid g = make_stretched_grid(0.02, 20.0, 1000.0);
  const double beta = pi / 4;
  const auto p = initial_profile(beta, g);
  const auto e0 = renormalized_energy(p, 0.0, Cutoff{beta});
  CHECK(e0.total_renormalized == doctest::Approx(local_energy(p)).epsilon(1e-14));
  // theta = eta: the nonlocal part cancels exactly.
  const Cutoff eta{beta};
  const Profile pe(g, eta.sample(g), beta);
  const auto ee = renormalized_energy(pe, 3.0, eta);
  CHECK(ee.total_renormalized == doctest::Approx(local_energy(pe)).epsilon(1e-12));
  CHECK(ee.gagliardo_J_theta == doctest::Approx(ee.gagliardo_J_eta).epsilon(1e-12));
  // Reflection theta -> -theta, beta -> -beta.
  const auto e1 = renormalized_energy(p, 2.0, Cutoff{beta});
  const auto e2 = renormalized_energy(p.negated(), 2.0, Cutoff{-beta});
  CHECK(e2.total_renormalized == doctest::Approx(e1.total_renormalized).epsilon(1e-13));
  CHECK(e1.exchange + e1.anisotropy == doctest::Approx(local_energy(p)).epsilon(1e-14));
  CHECK_THROWS_AS(EnergyModel(g, beta, -1.0), DomainError);
  CHECK_THROWS_AS(EnergyModel(g, beta, 1.0, Cutoff{0.1}), DomainError);
}

TEST_CASE("renormalized energy is bounded below") {
  std::mt19937_64 rng(20240601);
  const Grid g = make_stretched_grid(0.02, 20.0, 2000.0);
  for (int k = 0; k < 20; ++k) {
    const double beta = std::uniform_real_distribution<double>(-pi / 2, pi / 2)(rng);
    const double nu = std::uniform_real_distribution<double>(0.0, 10.0)(rng);
    const Profile p = random_profile(g, beta, rng);
    const Cutoff eta{beta};
    const double c = edge_integrand_bound_constant(nu, eta);
    CHECK(renormalized_energy(p, nu, eta).total_renormalized >= -pi * c);
  }
}

TEST_CASE("edge integrand pointwise bound") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(-2 * pi, 2 * pi), bet(-pi, pi), nus(0.0, 40.0);
  std::exponential_distribution<double> xs(0.3);
  for (auto shape : {CutoffShape::quintic, CutoffShape::cosine}) {
    for (int k = 0; k < 20000; ++k) {
      const double beta = bet(rng), nu = nus(rng), x = xs(rng) + 1e-9, theta = ang(rng);
      const Cutoff eta{beta, shape};
      const double c = edge_integrand_bound_constant(nu, eta);
      CHECK(edge_integrand(theta, beta, eta(x), nu, x) >= -c / (1 + x * x) - 1e-12);
    }
  }
}

TEST_CASE("differences of renormalized energies do not depend on the cutoff") {
  const Grid g = make_stretched_grid(0.02, 20.0, 1000.0);
  const double beta = 0.7, nu = 2.5;
  const auto p = initial_profile(beta, g);
  const auto q = analytic_zero_nu_profile(beta, g);
  const double d1 = renormalized_energy(p, nu, Cutoff{beta}).total_renormalized -
                    renormalized_energy(q, nu, Cutoff{beta}).total_renormalized;
  const double d2 = renormalized_energy(p, nu, Cutoff{beta, CutoffShape::cosine}).total_renormalized -
                    renormalized_energy(q, nu, Cutoff{beta, CutoffShape::cosine}).total_renormalized;
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));
}

TEST_CASE("residual is the scaled energy gradient") {
  const Grid g = make_stretched_grid(0.05, 20.0, 200.0);
  const double beta = pi / 4, nu = 3;
  const EnergyModel model(g, beta, nu);
  const auto p = initial_profile(beta, g);
  const Eigen::VectorXd r = model.residual(p.theta);
  const Eigen::VectorXd w = g.trapezoid_weights();
  CHECK(r(0) == 0);
  for (Index i : {Index(1), Index(5), Index(40), g.last()}) {
    const double h = 1e-6;
    Eigen::VectorXd tp = p.theta, tm = p.theta;
    tp(i) += h;
    tm(i) -= h;
    const double grad = (model.evaluate(tp).total_renormalized - model.evaluate(tm).total_renormalized) / (2 * h);
    CHECK(-grad / w(i) == doctest::Approx(r(i)).epsilon(1e-5).scale(1e-6));
  }
}

TEST_CASE("nonlocal energy three ways") {
  const Grid g = make_uniform_grid(0.02, 40.0);
  const auto z = nonlocal_three_ways(Field(g, Eigen::VectorXd::Zero(g.size())));
  CHECK(z.log_kernel == 0);
  CHECK(z.spectral == 0);
  CHECK(z.gagliardo == 0);
  const Eigen::VectorXd bump = g.nodes().unaryExpr([](double x) {
    const double t = (x - 20) / 3;
    return std::abs(t) < 1 ? std::exp(-1 / (1 - t * t)) : 0.0;
  });
  const auto b = nonlocal_three_ways(Field(g, bump));
  CHECK(b.gagliardo > 0);
  CHECK(std::abs(b.log_kernel - b.gagliardo) <= 1e-4 * b.gagliardo);
  CHECK(std::abs(b.spectral - b.gagliardo) <= 1e-4 * b.gagliardo);
  Eigen::VectorXd bad = bump;
  bad(0) = 0.1;
  CHECK_THROWS_AS(nonlocal_three_ways(Field(g, bad)), DomainError);
  const Grid s = make_stretched_grid(0.02, 20.0, 40.0);
  CHECK_THROWS_AS(nonlocal_three_ways(Field(s, Eigen::VectorXd::Zero(s.size()))), DomainError);
}
