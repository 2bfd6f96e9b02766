#include <doctest.h>

#include "edgewall/errors.hpp"
#include "edgewall/grid.hpp"
#include "edgewall/operators.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace edgewall;

namespace {

const double pi = std::numbers::pi;

Eigen::VectorXd gaussian(const Grid& g, double c, double s = 1) {
  return g.nodes().unaryExpr([c, s](double x) { return std::exp(-(x - c) * (x - c) / (s * s)); });
}

double interior_sup(const Eigen::VectorXd& v) { return v.segment(1, v.size() - 2).cwiseAbs().maxCoeff(); }

/// Nodes fine around c, stretched towards 0 and 2c.
Grid centred_grid(double c, double h0, double growth, double hcap) {
  std::vector<double> right{0.0};
  double h = h0;
  while (right.back() < c) {
    right.push_back(std::min(right.back() + h, c));
    h = std::min(h * growth, hcap);
  }
  Eigen::VectorXd x(2 * right.size() - 1);
  const Index m = static_cast<Index>(right.size()) - 1;
  for (Index k = 0; k <= m; ++k) {
    x(m + k) = c + right[k];
    x(m - k) = c - right[k];
  }
  x(0) = 0;
  return Grid(x);
}

}  // namespace

TEST_CASE("constant operand with matching extensions") {
  const Grid g = make_stretched_grid(0.1, 20.0, 200.0);
  const Field u(g, Eigen::VectorXd::Constant(g.size(), 0.7));
  const auto r = half_laplacian_pv(u, Extension{0.7, RightRule::constant_tail});
  CHECK(std::isnan(r.values(0)));
  CHECK(std::isnan(r.values(g.last())));
  CHECK(interior_sup(r.values) < 1e-12);
  CHECK(interior_sup(hilbert_of_derivative(u, Extension{0.7, RightRule::constant_tail}).values) < 1e-12);
}

TEST_CASE("Lorentzian against its closed-form half-Laplacian") {
  // u = 1/(1+t^2) has (-d^2/dt^2)^{1/2} u = (1-t^2)/(1+t^2)^2.
  const double c = 200;
  const Grid g = centred_grid(c, 0.05, 1.05, 2.0);
  const Eigen::VectorXd u = g.nodes().unaryExpr([c](double x) { return 1 / (1 + (x - c) * (x - c)); });
  const auto r = half_laplacian_pv(Field(g, u), Extension{0, RightRule::zero});
  double err = 0;
  for (Index i = 1; i < g.last(); ++i) {
    const double t = g[i] - c;
    if (std::abs(t) > 20) continue;
    err = std::max(err, std::abs(r.values(i) - (1 - t * t) / ((1 + t * t) * (1 + t * t))));
  }
  CHECK(err < 2e-4);
}

TEST_CASE("periodic operators reproduce the |k| multiplier") {
  for (int mode : {1, 3, 7}) {
    const double period = 10;
    const Index n = 200;
    const double k = 2 * pi * mode / period;
    const Grid g = make_uniform_grid(period / n, period * (n - 1) / n);
    REQUIRE(g.size() == n);
    const Eigen::VectorXd u = g.nodes().unaryExpr([k](double x) { return std::cos(k * x); });
    const auto s = half_laplacian_spectral(Field(g, u), period);
    CHECK((s.values - k * u).cwiseAbs().maxCoeff() < 1e-11);
    const auto p = half_laplacian_pv_periodic(Field(g, u), period);
    CHECK((p.values - k * u).cwiseAbs().maxCoeff() / k < 1e-4 * mode * mode);
  }
}

TEST_CASE("spectral operator edge cases") {
  const Grid g = make_uniform_grid(0.1, 9.9);
  CHECK(half_laplacian_spectral(Field(g, Eigen::VectorXd::Zero(g.size())), 10.0).values.cwiseAbs().maxCoeff() == 0);
  // Duplicated endpoint: the grid closes the period.
  const Grid closed = make_uniform_grid(0.1, 10.0);
  const Eigen::VectorXd u = closed.nodes().unaryExpr([](double x) { return std::cos(2 * pi * x / 10); });
  const auto r = half_laplacian_spectral(Field(closed, u), 10.0);
  CHECK((r.values - 2 * pi / 10 * u).cwiseAbs().maxCoeff() < 1e-11);
  CHECK_THROWS_AS(half_laplacian_spectral(Field(make_stretched_grid(0.1, 20.0, 10.0), Eigen::VectorXd::Zero(
                                                     make_stretched_grid(0.1, 20.0, 10.0).size())),
                                          10.0),
                  DomainError);
  CHECK_THROWS_AS(half_laplacian_spectral(Field(g, Eigen::VectorXd::Zero(g.size())), 7.0), DomainError);
}

TEST_CASE("Hilbert transform of the derivative equals pi times the half-Laplacian") {
  const Grid g = make_uniform_grid(0.05, 40.0);
  const Field u(g, gaussian(g, 20));
  const Extension ext{0, RightRule::zero};
  const auto hl = half_laplacian_pv(u, ext);
  const auto hd = hilbert_of_derivative(u, ext);
  CHECK(interior_sup(hd.values - pi * hl.values) / interior_sup(pi * hl.values) <= 1e-3);
  // The reconstruction is shared, so the identity is in fact exact up to quadrature.
  CHECK(interior_sup(hd.values - pi * hl.values) < 1e-9);

  // Same on a stretched grid, with a jump at the edge and a constant tail.
  const Grid s = make_stretched_grid(0.05, 20.0, 300.0);
  const Field w(s, s.nodes().unaryExpr([](double x) { return 0.3 + std::exp(-(x - 3) * (x - 3)); }));
  const Extension jump{-0.2, RightRule::constant_tail};
  CHECK(interior_sup(hilbert_of_derivative(w, jump).values - pi * half_laplacian_pv(w, jump).values) < 1e-9);
}

TEST_CASE("triangle hat against the closed-form log expression") {
  // u = max(0, 1 - |x - 2|): PV int u'(y)/(x - y) dy = ln|x-1| + ln|x-3| - 2 ln|x-2|.
  const auto exact = [](double x) {
    return std::log(std::abs(x - 1)) + std::log(std::abs(x - 3)) - 2 * std::log(std::abs(x - 2));
  };
  double prev = INFINITY;
  for (double dx : {0.02, 0.01, 0.005}) {
    const Grid g = make_uniform_grid(dx, 12.0);
    const Field u(g, g.nodes().unaryExpr([](double x) { return std::max(0.0, 1 - std::abs(x - 2)); }));
    const auto hd = hilbert_of_derivative(u, Extension{0, RightRule::zero});
    double err = 0;
    for (Index i = 1; i < g.last(); ++i) {
      const double x = g[i];
      if (std::abs(x - 1) < 0.25 || std::abs(x - 2) < 0.25 || std::abs(x - 3) < 0.25) continue;
      err = std::max(err, std::abs(hd.values(i) - exact(x)));
    }
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("PV operator converges to the spectral oracle under refinement") {
  std::vector<double> errs;
  for (double dx : {0.2, 0.1, 0.05}) {
    const Grid g = make_uniform_grid(dx, 40.0);
    const Eigen::VectorXd u = gaussian(g, 20);
    const auto pv = half_laplacian_pv(Field(g, u), Extension{0, RightRule::zero});
    // Period 8x the domain: the periodic images sit at distance >= 300.
    const Index n = g.size() - 1, padded = 8 * n;
    const Grid gp = make_uniform_grid(dx, dx * static_cast<double>(padded - 1));
    Eigen::VectorXd up = Eigen::VectorXd::Zero(padded);
    up.head(n + 1) = u;
    const auto sp = half_laplacian_spectral(Field(gp, up), dx * static_cast<double>(padded));
    errs.push_back(interior_sup(pv.values - sp.values.head(n + 1)) / interior_sup(sp.values.head(n + 1)));
  }
  CHECK(errs[2] <= 1e-3);
  CHECK(errs[0] / errs[1] >= 2);
  CHECK(errs[1] / errs[2] >= 2);
}

TEST_CASE("linearity") {
  const Grid g = make_stretched_grid(0.05, 20.0, 100.0);
  const Eigen::VectorXd u = gaussian(g, 3), v = g.nodes().unaryExpr([](double x) { return std::sin(x) * std::exp(-x); });
  const PvHalfLaplacian<double> op(g, RightRule::constant_tail);
  const Eigen::VectorXd lhs = op.apply(2 * u - 3 * v, 2 * 0.4 - 3 * 0.1);
  const Eigen::VectorXd rhs = 2 * op.apply(u, 0.4) - 3 * op.apply(v, 0.1);
  CHECK(interior_sup(lhs - rhs) < 1e-12 * interior_sup(lhs));
}

TEST_CASE("discrete self-adjointness and positivity with trapezoid weights") {
  const Grid g = make_uniform_grid(0.05, 40.0);
  const Eigen::VectorXd u = gaussian(g, 18), v = gaussian(g, 22, 1.5);
  const Eigen::VectorXd w = g.trapezoid_weights();
  const PvHalfLaplacian<double> op(g, RightRule::zero);
  const Eigen::VectorXd ou = op.apply(u, 0), ov = op.apply(v, 0);
  const Index m = g.size() - 2;
  const double a = (w.segment(1, m).array() * v.segment(1, m).array() * ou.segment(1, m).array()).sum();
  const double b = (w.segment(1, m).array() * u.segment(1, m).array() * ov.segment(1, m).array()).sum();
  CHECK(std::abs(a - b) <= 1e-6 * std::abs(a));
  CHECK((w.segment(1, m).array() * u.segment(1, m).array() * ou.segment(1, m).array()).sum() >= 0);

  // The energy-consistent operator is exactly W-symmetric and positive on any grid.
  const Grid s = make_stretched_grid(0.05, 20.0, 300.0);
  const VariationalHalfLaplacian<double> var(s);
  const Eigen::VectorXd ws = s.trapezoid_weights();
  const Eigen::VectorXd us = gaussian(s, 2).array() - std::exp(-4.0), vs = gaussian(s, 5).array() - std::exp(-25.0);
  const double c = ws.dot(vs.cwiseProduct(var.apply(us))), d = ws.dot(us.cwiseProduct(var.apply(vs)));
  CHECK(std::abs(c - d) <= 1e-12 * std::abs(c));
  CHECK(ws.dot(us.cwiseProduct(var.apply(us))) > 0);
  CHECK((var.matrix() - var.matrix().transpose()).cwiseAbs().maxCoeff() < 1e-12 * var.matrix().cwiseAbs().maxCoeff());
}

TEST_CASE("left extension enters through the explicit 1/x term") {
  const Grid g = make_stretched_grid(0.05, 20.0, 100.0);
  const Eigen::VectorXd u = gaussian(g, 0.0).array() * g.nodes().array();
  const PvHalfLaplacian<double> op(g, RightRule::constant_tail);
  const double s = 0.35;
  const Eigen::VectorXd diff = pi * (op.apply(u, 0) - op.apply(u, s));
  for (Index i = 1; i < g.last(); ++i) CHECK(diff(i) == doctest::Approx(s / g[i]).epsilon(1e-12));
}

TEST_CASE("full-line and half-line groupings agree when u(0) = 0") {
  // With zero left extension the full-line PV equals u(x)/x plus the half-line
  // PV, and the latter can be written as the Hilbert transform of u' on (0, inf).
  const Grid g = make_stretched_grid(0.02, 20.0, 200.0);
  const Field u(g, g.nodes().unaryExpr([](double x) { return x * std::exp(-x); }));
  const Extension ext{0, RightRule::constant_tail};
  const Eigen::VectorXd full = pi * half_laplacian_pv(u, ext).values;
  const Eigen::VectorXd half_line = full.array() - u.values.array() / g.nodes().array();
  const Eigen::VectorXd hilbert = hilbert_of_derivative(u, ext).values.array() - u.values.array() / g.nodes().array();
  CHECK(interior_sup(half_line - hilbert) < 1e-9);
}

TEST_CASE("edge evaluation") {
  const Grid g = make_uniform_grid(0.05, 20.0);
  const Field u(g, gaussian(g, 10));
  CHECK_THROWS_AS(half_laplacian_pv_at_edge(u, Extension{0.5, RightRule::zero}), SingularEndpointError);
  const Field flat(g, Eigen::VectorXd::Constant(g.size(), 0.5));
  CHECK(std::abs(half_laplacian_pv_at_edge(flat, Extension{0.5, RightRule::constant_tail})) < 1e-14);
  // Zero edge slope: the value is finite.
  const Field even(g, g.nodes().unaryExpr([](double x) { return std::max(0.0, 1 - x * x); }));
  const double at0 = half_laplacian_pv_at_edge(even, Extension{1.0, RightRule::zero});
  // Full-line value: (1/pi)(int_0^1 dy + int_1^inf y^-2 dy) = 2/pi.
  CHECK(at0 == doctest::Approx(2 / pi).epsilon(1e-3));
  const Field sloped(g, g.nodes().unaryExpr([](double x) { return 1 - x; }));
  CHECK_THROWS_AS(half_laplacian_pv_at_edge(sloped, Extension{1.0, RightRule::zero}), SingularEndpointError);
}

TEST_CASE("exact piecewise-linear forms") {
  // Hat function on a uniform grid: the box form against direct summation of the
  // closed-form pieces is covered by the three-way test; here check invariances.
  const Grid g = make_stretched_grid(0.1, 10.0, 50.0);
  const auto f = NonlocalForms<double>::build(g);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(g.size());
  CHECK((f.box * one).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((f.box - f.box.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  // Linear v = x on [0, X]: box = X^2, left = X^2/2, and right on v = X - x gives X^2/2.
  const Eigen::VectorXd x = g.nodes();
  const double X = g.x_end();
  CHECK(x.dot(f.box * x) == doctest::Approx(X * X).epsilon(1e-12));
  CHECK(x.dot(f.left * x) == doctest::Approx(X * X / 2).epsilon(1e-12));
  const Eigen::VectorXd r = X - x.array();
  CHECK(r.dot(f.right * r) == doctest::Approx(X * X / 2).epsilon(1e-12));
  // Scale invariance of the Gagliardo form: stretching the grid leaves it unchanged.
  const Grid g2(2 * g.nodes());
  const auto f2 = NonlocalForms<double>::build(g2);
  const Eigen::VectorXd v = gaussian(g, 5, 2).array() - std::exp(-45.0 / 4);
  Eigen::VectorXd vz = gaussian(g, 20, 3);
  vz(0) = vz(g.last()) = 0;
  CHECK(f2.gagliardo(v) == doctest::Approx(f.gagliardo(v)).epsilon(1e-12));
  CHECK(f2.zero_extended(vz) == doctest::Approx(f.zero_extended(vz)).epsilon(1e-12));
}

TEST_CASE("energy-consistent operator approximates the half-Laplacian") {
  std::vector<double> errs;
  for (double dx : {0.1, 0.05}) {
    const Grid g = make_uniform_grid(dx, 40.0);
    const Eigen::VectorXd u = gaussian(g, 20);
    const VariationalHalfLaplacian<double> var(g);
    const Eigen::VectorXd pv = half_laplacian_pv(Field(g, u), Extension{0, RightRule::constant_tail}).values;
    errs.push_back(interior_sup(var.apply(u) - pv) / interior_sup(pv));
  }
  CHECK(errs[1] < 2e-3);
  CHECK(errs[0] / errs[1] > 3);
}

TEST_CASE("single precision instantiation") {
  const auto g = make_uniform_grid<float>(0.1f, 10.0f);
  const Eigen::VectorXf u = g.nodes().unaryExpr([](float x) { return std::exp(-(x - 5) * (x - 5)); });
  const auto r = half_laplacian_pv(BasicField<float>(g, u), BasicExtension<float>{0.0f, RightRule::zero});
  CHECK(std::abs(r.values(50) - 2 / std::sqrt(static_cast<float>(pi))) < 1e-3f);
}
