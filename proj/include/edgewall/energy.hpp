#pragma once

#include "edgewall/errors.hpp"
#include "edgewall/grid.hpp"
#include "edgewall/operators.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace edgewall {

/// Angle profile theta on a grid with edge value beta; theta(0) == beta.
template <typename Scalar>
struct BasicProfile {
  BasicGrid<Scalar> grid;
  VectorX<Scalar> theta;
  Scalar beta = 0;

  BasicProfile() = default;
  BasicProfile(BasicGrid<Scalar> g, VectorX<Scalar> t, Scalar b) : grid(std::move(g)), theta(std::move(t)), beta(b) {
    if (theta.size() != grid.size()) throw DomainError("profile size does not match grid");
    if (!theta.allFinite() || !std::isfinite(static_cast<double>(beta))) throw DomainError("profile values must be finite");
    if (theta(0) != beta) throw DomainError("profile must satisfy theta(0) = beta");
  }

  /// u = sin(theta - beta).
  VectorX<Scalar> charge() const { return (theta.array() - beta).sin().matrix(); }

  BasicProfile negated() const { return BasicProfile(grid, -theta, -beta); }
};
using Profile = BasicProfile<double>;

enum class CutoffShape { quintic, cosine };

/// Comparison profile eta: beta for x <= 0, 0 for x >= 1, smooth and monotone between.
template <typename Scalar>
struct BasicCutoff {
  Scalar beta = 0;
  CutoffShape shape = CutoffShape::quintic;

  Scalar operator()(Scalar x) const {
    const Scalar t = std::clamp<Scalar>(x, 0, 1);
    if (shape == CutoffShape::cosine) return beta * (1 + std::cos(std::numbers::pi_v<Scalar> * t)) / 2;
    const Scalar t3 = t * t * t;
    return beta * (1 - 10 * t3 + 15 * t3 * t - 6 * t3 * t * t);
  }

  VectorX<Scalar> sample(const BasicGrid<Scalar>& grid) const {
    return grid.nodes().unaryExpr([this](Scalar x) { return (*this)(x); });
  }

  /// sup |eta'|.
  Scalar max_slope() const {
    return shape == CutoffShape::cosine ? std::numbers::pi_v<Scalar> * std::abs(beta) / 2
                                        : Scalar(15) * std::abs(beta) / 8;
  }
};
using Cutoff = BasicCutoff<double>;

/// Quintic smoothstep cutoff value.
inline double cutoff_eval(double beta, double x) { return Cutoff{beta}(x); }

struct EnergyBreakdown {
  double exchange = 0;
  double anisotropy = 0;
  double edge_charge_term = 0;
  double gagliardo_J_theta = 0;
  double gagliardo_J_eta = 0;
  double total_renormalized = 0;
};

/// 1/2 int (theta'^2 + sin^2 theta): exact exchange of the linear interpolant, trapezoid anisotropy.
template <typename Scalar>
Scalar exchange_energy(const BasicGrid<Scalar>& grid, const VectorX<Scalar>& theta) {
  const Index c = grid.cells();
  const VectorX<Scalar> d = theta.tail(c) - theta.head(c);
  return (d.array().square() / grid.spacings().array()).sum() / 2;
}

template <typename Scalar>
Scalar anisotropy_energy(const BasicGrid<Scalar>& grid, const VectorX<Scalar>& theta) {
  return grid.trapezoid_weights().dot(theta.array().sin().square().matrix()) / 2;
}

template <typename Scalar>
Scalar local_energy(const BasicProfile<Scalar>& p) {
  return exchange_energy(p.grid, p.theta) + anisotropy_energy(p.grid, p.theta);
}

/// Modica-Mortola bound 1 - cos(beta) on the local energy.
inline double energy_lower_bound(double beta) { return 1 - std::cos(beta); }

/// int int_{(0,inf)^2} (u(x) - u(y))^2 / (x - y)^2 for u = sin(theta - beta), constant tail.
template <typename Scalar>
Scalar gagliardo_J(const BasicProfile<Scalar>& p) {
  return NonlocalForms<Scalar>::build(p.grid).gagliardo(p.charge());
}

/// Renormalized energy on a fixed grid, with everything that depends only on the
/// grid, nu and the cutoff precomputed.
template <typename Scalar>
class BasicEnergyModel {
 public:
  BasicEnergyModel(const BasicGrid<Scalar>& grid, Scalar beta, Scalar nu, BasicCutoff<Scalar> cutoff)
      : op_(grid), beta_(beta), nu_(nu), cutoff_(cutoff) {
    if (!(nu >= 0)) throw DomainError("nu must be non-negative");
    if (cutoff.beta != beta) throw DomainError("cutoff angle must equal beta");
    const VectorX<Scalar> ue = (cutoff.sample(grid).array() - beta).sin().matrix();
    j_eta_ = op_.forms().gagliardo(ue);
    edge_eta_ = op_.forms().edge(ue);
  }
  BasicEnergyModel(const BasicGrid<Scalar>& grid, Scalar beta, Scalar nu)
      : BasicEnergyModel(grid, beta, nu, BasicCutoff<Scalar>{beta}) {}

  const VariationalHalfLaplacian<Scalar>& op() const { return op_; }
  const BasicGrid<Scalar>& grid() const { return op_.grid(); }
  Scalar beta() const { return beta_; }
  Scalar nu() const { return nu_; }
  const BasicCutoff<Scalar>& cutoff() const { return cutoff_; }

  EnergyBreakdown evaluate(const VectorX<Scalar>& theta) const {
    const VectorX<Scalar> u = (theta.array() - beta_).sin().matrix();
    EnergyBreakdown e;
    e.exchange = static_cast<double>(exchange_energy(grid(), theta));
    e.anisotropy = static_cast<double>(anisotropy_energy(grid(), theta));
    const Scalar pi = std::numbers::pi_v<Scalar>;
    e.edge_charge_term = static_cast<double>(nu_ / (4 * pi) * (op_.forms().edge(u) - edge_eta_));
    e.gagliardo_J_theta = static_cast<double>(op_.forms().gagliardo(u));
    e.gagliardo_J_eta = static_cast<double>(j_eta_);
    e.total_renormalized = e.exchange + e.anisotropy + e.edge_charge_term +
                           static_cast<double>(nu_ / (8 * pi)) * (e.gagliardo_J_theta - e.gagliardo_J_eta);
    return e;
  }

  EnergyBreakdown evaluate(const BasicProfile<Scalar>& p) const {
    if (!(p.grid == grid())) throw DomainError("profile grid differs from the model grid");
    return evaluate(p.theta);
  }

  /// Total from a precomputed A u (saves one matrix-vector product in the time loop).
  Scalar total(const VectorX<Scalar>& theta, const VectorX<Scalar>& u, const VectorX<Scalar>& au) const {
    const Scalar pi = std::numbers::pi_v<Scalar>;
    return exchange_energy(grid(), theta) + anisotropy_energy(grid(), theta) +
           nu_ / (8 * pi) * (u.dot(au) - 2 * edge_eta_ - j_eta_);
  }

  /// Euler-Lagrange residual theta'' - sin cos - (nu/2) cos(theta - beta) H u, which
  /// equals -(1/w_i) dE/dtheta_i of the discrete energy. Entry 0 is zero; entry N
  /// carries the natural (zero-slope) boundary condition.
  VectorX<Scalar> residual(const VectorX<Scalar>& theta) const {
    const VectorX<Scalar> u = (theta.array() - beta_).sin().matrix();
    return residual(theta, op_.matrix() * u);
  }

  VectorX<Scalar> residual(const VectorX<Scalar>& theta, const VectorX<Scalar>& au) const {
    const auto& w = op_.weights();
    const auto& g = grid();
    const Index last = g.last();
    VectorX<Scalar> r(g.size());
    r(0) = 0;
    for (Index i = 1; i <= last; ++i) {
      const Scalar right = i < last ? (theta(i + 1) - theta(i)) / g.spacing(i) : Scalar(0);
      const Scalar left = (theta(i) - theta(i - 1)) / g.spacing(i - 1);
      r(i) = (right - left) / w(i);
    }
    const Scalar pi = std::numbers::pi_v<Scalar>;
    r.tail(last) -= (theta.tail(last).array().sin() * theta.tail(last).array().cos() +
                     nu_ / 2 * (theta.tail(last).array() - beta_).cos() * au.tail(last).array() /
                         (2 * pi * w.tail(last).array()))
                        .matrix();
    return r;
  }

 private:
  VariationalHalfLaplacian<Scalar> op_;
  Scalar beta_;
  Scalar nu_;
  BasicCutoff<Scalar> cutoff_;
  Scalar j_eta_ = 0;
  Scalar edge_eta_ = 0;
};
using EnergyModel = BasicEnergyModel<double>;

/// Renormalized energy with the default (quintic) or given cutoff.
template <typename Scalar>
EnergyBreakdown renormalized_energy(const BasicProfile<Scalar>& p, Scalar nu, const BasicCutoff<Scalar>& cutoff) {
  return BasicEnergyModel<Scalar>(p.grid, p.beta, nu, cutoff).evaluate(p.theta);
}

/// Constant C with 1/2 sin^2 theta + (nu/4pi)(sin^2(theta-beta) - sin^2(eta-beta))/x >= -C/(1+x^2)
/// for every theta and x > 0. For x < 1 the cutoff term is at most |eta - beta|/x <= sup|eta'|;
/// for x >= 1, |sin^2(theta-beta) - sin^2 beta| <= |sin theta| and Young's inequality absorbs it
/// into 1/2 sin^2 theta, leaving nu^2/(32 pi^2 x^2).
inline double edge_integrand_bound_constant(double nu, const Cutoff& cutoff) {
  const double pi = std::numbers::pi;
  return std::max(nu * cutoff.max_slope() / (2 * pi), nu * nu / (16 * pi * pi));
}

inline double edge_integrand(double theta, double beta, double eta, double nu, double x) {
  const double pi = std::numbers::pi;
  const double a = std::sin(theta - beta), b = std::sin(eta - beta);
  return 0.5 * std::sin(theta) * std::sin(theta) + nu / (4 * pi) * (a * a - b * b) / x;
}

/// The nonlocal energy (1/8pi) int int (m(x)-m(y))^2/(x-y)^2 of the piecewise-linear
/// interpolant of m, computed three independent ways.
struct NonlocalThreeWays {
  double log_kernel = 0;  ///< (1/4pi) int int ln(1/|x-y|) m'(x) m'(y)
  double spectral = 0;    ///< (1/8pi) int |k| |m^(k)|^2 dk
  double gagliardo = 0;   ///< (1/8pi) Gagliardo double integral over the real line
};

template <typename Scalar>
NonlocalThreeWays nonlocal_three_ways(const BasicField<Scalar>& m) {
  const auto& g = m.grid;
  const auto& v = m.values;
  const Index last = g.last();
  if (!g.is_uniform()) throw DomainError("three-way comparison needs a uniform grid");
  if (v(0) != Scalar(0) || v(last) != Scalar(0))
    throw DomainError("field must vanish at both ends of the grid (compact support)");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar h = g.spacing(0);
  const Index cells = g.cells();
  NonlocalThreeWays out;

  // Log kernel: slopes are piecewise constant, cell-pair integrals of ln|x-y| are closed form.
  {
    const auto phi = [](Scalar t) {
      if (t == Scalar(0)) return Scalar(0);
      return t * t * std::log(std::abs(t)) / 2 - 3 * t * t / 4;
    };
    // Uniform grid: the pair integral depends on the cell offset only.
    VectorX<Scalar> lk(cells);
    for (Index d = 0; d < cells; ++d) {
      const Scalar o = h * static_cast<Scalar>(d);
      lk(d) = -(phi(o + h) - phi(o) - phi(o) + phi(o - h));
    }
    const VectorX<Scalar> s = (v.tail(cells) - v.head(cells)) / h;
    Scalar total = 0;
    for (Index c = 0; c < cells; ++c) {
      if (s(c) == Scalar(0)) continue;
      Scalar row = lk(0) * s(c);
      for (Index d = c + 1; d < cells; ++d) row += 2 * lk(d - c) * s(d);
      total += s(c) * row;
    }
    out.log_kernel = static_cast<double>(total / (4 * pi));
  }

  // Spectral: |m^(k)|^2 = |M(k)|^2 (16/h^2) sin^4(kh/2) / k^4 with M the periodic node sum;
  // fold the |k|-weighted integral onto one period of M.
  {
    const Index pad = 16 * (cells + 1);
    std::vector<Scalar> in(static_cast<std::size_t>(pad), Scalar(0));
    for (Index i = 0; i <= last; ++i) in[static_cast<std::size_t>(i)] = v(i);
    Eigen::FFT<Scalar> fft;
    std::vector<std::complex<Scalar>> spec;
    fft.fwd(spec, in);
    const Scalar omega = 2 * pi / h;
    const Scalar dk = omega / static_cast<Scalar>(pad);
    constexpr int kImages = 64;
    Scalar sum = 0;
    for (Index n = 1; n < pad; ++n) {
      const Scalar t = static_cast<Scalar>(n) / static_cast<Scalar>(pad);
      const Scalar k = dk * static_cast<Scalar>(n);
      Scalar images = 0;
      for (int a = -kImages; a <= kImages; ++a) {
        const Scalar z = std::abs(t + a);
        images += 1 / (z * z * z);
      }
      images += 1 / (2 * (kImages + t + Scalar(0.5)) * (kImages + t + Scalar(0.5))) +
                1 / (2 * (kImages - t + Scalar(0.5)) * (kImages - t + Scalar(0.5)));
      images /= omega * omega * omega;
      const Scalar sn = std::sin(k * h / 2);
      const Scalar w = 16 / (h * h) * sn * sn * sn * sn * images;
      sum += std::norm(spec[static_cast<std::size_t>(n)]) * w;
    }
    const Scalar mass = v.sum();
    // |k| kink of the integrand at k = 0 (Euler-Maclaurin end correction).
    const Scalar kink = dk * dk / 6 * h * h * mass * mass;
    out.spectral = static_cast<double>((dk * sum + kink) / (8 * pi));
  }

  out.gagliardo = static_cast<double>(NonlocalForms<Scalar>::build(g).zero_extended(v) / (8 * pi));
  return out;
}

}  // namespace edgewall
