#include "edgewall/analysis.hpp"

#include "edgewall/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

namespace edgewall {

std::string to_string(DecayModel m) { return m == DecayModel::power ? "power" : "exponential"; }

namespace {

DecayFit line_fit(const std::vector<double>& s, const std::vector<double>& y) {
  const double n = static_cast<double>(s.size());
  double ms = 0, my = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    ms += s[i];
    my += y[i];
  }
  ms /= n;
  my /= n;
  double sss = 0, ssy = 0, syy = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sss += (s[i] - ms) * (s[i] - ms);
    ssy += (s[i] - ms) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  DecayFit f;
  const double slope = ssy / sss;
  f.exponent_or_rate = slope;
  f.prefactor = std::exp(my - slope * ms);
  double res = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double e = y[i] - (my + slope * (s[i] - ms));
    res += e * e;
  }
  f.r_squared = syy > 0 ? std::max(0.0, 1 - res / syy) : 1.0;
  f.nodes = static_cast<long>(s.size());
  return f;
}

}  // namespace

DecayFits fit_decay(const Profile& p, double x_lo, double x_hi, double theta_inf) {
  if (!(x_lo > 0) || !(x_hi > x_lo)) throw WindowError("fit window must satisfy 0 < x_lo < x_hi");
  if (x_hi > p.grid.x_end()) throw WindowError("fit window extends past the grid");
  std::vector<double> xs, lx, ly;
  int sign = 0;
  for (Index i = 0; i < p.grid.size(); ++i) {
    const double x = p.grid[i];
    if (x < x_lo || x > x_hi) continue;
    const double v = p.theta(i) - theta_inf;
    if (v == 0) throw WindowError("profile vanishes inside the fit window");
    const int s = v > 0 ? 1 : -1;
    if (sign != 0 && s != sign) throw WindowError("profile changes sign inside the fit window");
    sign = s;
    xs.push_back(x);
    lx.push_back(std::log(x));
    ly.push_back(std::log(std::abs(v)));
  }
  if (xs.size() < 8) throw WindowError("fit window holds fewer than 8 nodes");
  DecayFits out;
  out.power = line_fit(lx, ly);
  out.power.model = DecayModel::power;
  out.exponential = line_fit(xs, ly);
  out.exponential.model = DecayModel::exponential;
  out.exponential.exponent_or_rate = -out.exponential.exponent_or_rate;
  for (DecayFit* f : {&out.power, &out.exponential}) {
    f->x_lo = x_lo;
    f->x_hi = x_hi;
    if (sign < 0) f->prefactor = -f->prefactor;
  }
  return out;
}

double boundary_slope(const Profile& p) {
  const auto& x = p.grid.nodes();
  const auto& t = p.theta;
  const Index n = p.grid.size();
  if (n >= 4) {
    Eigen::Matrix4d m;
    Eigen::Vector4d b;
    for (int k = 0; k < 4; ++k) {
      const double xk = x(k);
      m(k, 0) = 1;
      m(k, 1) = xk;
      m(k, 2) = xk * xk;
      m(k, 3) = xk > 0 ? xk * xk * std::log(xk) : 0.0;
      b(k) = t(k);
    }
    // Scale columns so the solve is well conditioned for small spacings.
    const double h = x(3);
    Eigen::Vector4d scale(1, h, h * h, h * h * std::max(1.0, std::abs(std::log(h))));
    m = m * scale.cwiseInverse().asDiagonal();
    return m.colPivHouseholderQr().solve(b)(1) / h;
  }
  if (n == 3) {
    const double h0 = x(1), h1 = x(2) - x(1);
    const double s0 = (t(1) - t(0)) / h0, s1 = (t(2) - t(1)) / h1;
    return s0 - (s1 - s0) / (h0 + h1) * h0;
  }
  return (t(1) - t(0)) / x(1);
}

ProfileDiagnostics diagnostics(const Profile& p) {
  const auto& x = p.grid.nodes();
  const auto& t = p.theta;
  const Index n = p.grid.size();
  const double pi = std::numbers::pi;
  ProfileDiagnostics d;

  const double cut = p.grid.x_end() / 10;
  double sum = 0;
  long count = 0;
  for (Index i = 0; i < n; ++i) {
    if (x(i) >= cut) {
      sum += t(i);
      ++count;
    }
  }
  d.theta_infinity = pi * std::round(sum / count / pi);
  if (d.theta_infinity == 0) d.theta_infinity = 0;  // no -0

  const Eigen::VectorXd diff = t.tail(n - 1) - t.head(n - 1);
  d.total_variation = diff.cwiseAbs().sum();
  d.max_abs_theta = t.cwiseAbs().maxCoeff();
  const double lo = std::min(0.0, p.beta), hi = std::max(0.0, p.beta);
  const double excursion = std::max(lo - t.minCoeff(), t.maxCoeff() - hi);
  d.winding_flag = d.total_variation > pi / 2 + 0.1 || d.max_abs_theta > std::max(std::abs(p.beta), pi / 2) + 0.1 ||
                   excursion > 0.1;

  const double flat = 1e-12 * std::max(1.0, d.max_abs_theta);
  bool up = false, down = false;
  for (Index i = 0; i < diff.size(); ++i) {
    if (diff(i) > flat) up = true;
    if (diff(i) < -flat) down = true;
  }
  d.monotone_flag = !(up && down);

  const double floor = 1e-8;
  bool pos = false, neg = false;
  for (Index i = 1; i < n; ++i) {
    const double v = t(i) - d.theta_infinity;
    if (v > floor) pos = true;
    if (v < -floor) neg = true;
  }
  d.overshoot_flag = pos && neg;
  d.boundary_slope = boundary_slope(p);
  return d;
}

}  // namespace edgewall
