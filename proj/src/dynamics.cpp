#include "edgewall/dynamics.hpp"

#include "edgewall/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace edgewall {

Profile initial_profile(double beta, const Grid& grid) {
  Eigen::VectorXd t = grid.nodes().unaryExpr([beta](double x) { return 2 * beta / (1 + std::exp(x / 2)); });
  t(0) = beta;
  return Profile(grid, t, beta);
}

Profile analytic_zero_nu_profile(double beta, const Grid& grid) {
  if (!(std::abs(beta) < std::numbers::pi)) throw DomainError("analytic profile needs |beta| < pi");
  const double tb = std::tan(beta / 2);
  Eigen::VectorXd t = grid.nodes().unaryExpr([tb](double x) { return 2 * std::atan(std::exp(-x) * tb); });
  t(0) = beta;
  return Profile(grid, t, beta);
}

double sup_norm(const Eigen::VectorXd& v) {
  double m = 0;
  for (Index i = 0; i < v.size(); ++i)
    if (std::isfinite(v(i))) m = std::max(m, std::abs(v(i)));
  return m;
}

Field el_residual(const Profile& p, const ModelParams& params) {
  params.validate();
  if (params.beta != p.beta) throw DomainError("profile beta differs from the model beta");
  const EnergyModel model(p.grid, p.beta, params.nu);
  Eigen::VectorXd r = model.residual(p.theta);
  r(0) = r(p.grid.last()) = std::numeric_limits<double>::quiet_NaN();
  return Field(p.grid, r);
}

void RelaxationConfig::validate() const {
  if (!(dt >= 0) || !std::isfinite(dt)) throw DomainError("dt must be positive (or 0 for the default)");
  if (!(tol > 0)) throw DomainError("tol must be positive");
  if (max_steps < 1) throw DomainError("max_steps must be at least 1");
  if (report_every < 1) throw DomainError("report_every must be at least 1");
}

double default_time_step(const Grid& grid, double nu) { return std::min(0.05, grid.min_spacing() / (1 + nu)); }

namespace {

/// Prefactored (I - dt D) on nodes 1..N, D the weighted three-point Laplacian
/// with theta_0 fixed and natural boundary at node N.
class ImplicitDiffusion {
 public:
  ImplicitDiffusion(const Grid& g, double dt) : n_(g.last()) {
    const Eigen::VectorXd w = g.trapezoid_weights();
    lower_.setZero(n_);
    diag_.setZero(n_);
    upper_.setZero(n_);
    for (Index k = 0; k < n_; ++k) {
      const Index i = k + 1;
      const double cl = 1 / (g.spacing(i - 1) * w(i));
      const double cr = i < g.last() ? 1 / (g.spacing(i) * w(i)) : 0.0;
      lower_(k) = -dt * cl;
      upper_(k) = -dt * cr;
      diag_(k) = 1 + dt * (cl + cr);
    }
    edge_coupling_ = -lower_(0);
    // Thomas forward sweep on the matrix only.
    cprime_.resize(n_);
    denom_.resize(n_);
    denom_(0) = diag_(0);
    cprime_(0) = upper_(0) / denom_(0);
    for (Index k = 1; k < n_; ++k) {
      denom_(k) = diag_(k) - lower_(k) * cprime_(k - 1);
      cprime_(k) = upper_(k) / denom_(k);
    }
  }

  /// Solves for nodes 1..N in place; `rhs` excludes the Dirichlet coupling.
  void solve(Eigen::Ref<Eigen::VectorXd> rhs, double theta0) const {
    rhs(0) += edge_coupling_ * theta0;
    rhs(0) /= denom_(0);
    for (Index k = 1; k < n_; ++k) rhs(k) = (rhs(k) - lower_(k) * rhs(k - 1)) / denom_(k);
    for (Index k = n_ - 2; k >= 0; --k) rhs(k) -= cprime_(k) * rhs(k + 1);
  }

 private:
  Index n_;
  Eigen::VectorXd lower_, diag_, upper_, cprime_, denom_;
  double edge_coupling_ = 0;
};

}  // namespace

RelaxationResult relax(const EnergyModel& model, const Profile& initial, const RelaxationConfig& cfg,
                       const ProgressCallback& progress) {
  cfg.validate();
  const Grid& g = model.grid();
  const double beta = model.beta(), nu = model.nu();
  if (!(initial.grid == g)) throw DomainError("initial profile grid differs from the model grid");
  if (initial.beta != beta) throw DomainError("initial profile beta differs from the model beta");
  const double dt = cfg.dt > 0 ? cfg.dt : default_time_step(g, nu);
  const ImplicitDiffusion diffusion(g, dt);
  const Eigen::MatrixXd& a = model.op().matrix();
  const Eigen::VectorXd& w = model.op().weights();
  const Index last = g.last();
  const double two_pi = 2 * std::numbers::pi;

  RelaxationResult res;
  res.dt = dt;
  Eigen::VectorXd theta = initial.theta;
  Eigen::VectorXd u(g.size()), au(g.size()), f(last);
  // Increases are measured against the lowest energy sampled so far, so a
  // period-two oscillation counts as well as a monotone blow-up.
  double best_energy = std::numeric_limits<double>::infinity();
  int increases = 0;
  const double increase_tol = 1e-10;

  for (long step = 0;; ++step) {
    u = (theta.array() - beta).sin().matrix();
    au.noalias() = a * u;
    const Eigen::VectorXd r = model.residual(theta, au);
    const double rsup = r.tail(last).cwiseAbs().maxCoeff();
    if (!std::isfinite(rsup)) throw DivergenceError("non-finite values at step " + std::to_string(step), step);
    const bool done = rsup <= cfg.tol || step >= cfg.max_steps;
    if (step % cfg.report_every == 0 || done) {
      const double e = model.total(theta, u, au);
      res.energy_history.push_back({step, e});
      if (progress) progress({step, rsup, e});
      if (e > best_energy + increase_tol * std::max(1.0, std::abs(best_energy))) {
        if (++increases >= 10)
          throw StabilityError("energy increased over 10 consecutive samples; reduce dt (now " +
                                   std::to_string(dt) + ")",
                               step);
      } else {
        increases = 0;
      }
      best_energy = std::min(best_energy, e);
    }
    if (done) {
      res.steps_taken = step;
      res.final_residual = rsup;
      res.converged = rsup <= cfg.tol;
      break;
    }
    const auto th = theta.tail(last).array();
    f = (th.sin() * th.cos() +
         nu / 2 * (th - beta).cos() * au.tail(last).array() / (two_pi * w.tail(last).array()))
            .matrix();
    Eigen::VectorXd rhs = theta.tail(last) - dt * f;
    diffusion.solve(rhs, beta);
    theta.tail(last) = rhs;
    theta(0) = beta;
  }
  res.profile = Profile(g, theta, beta);
  return res;
}

RelaxationResult relax(const ModelParams& params, const Grid& grid, const Profile& initial,
                       const RelaxationConfig& cfg, const ProgressCallback& progress) {
  params.validate();
  const EnergyModel model(grid, params.beta, params.nu);
  return relax(model, initial, cfg, progress);
}

}  // namespace edgewall
