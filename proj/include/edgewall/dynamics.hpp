#pragma once

#include "edgewall/energy.hpp"
#include "edgewall/grid.hpp"
#include "edgewall/operators.hpp"
#include "edgewall/params.hpp"

#include <functional>
#include <vector>

namespace edgewall {

/// theta(x, 0) = 2 beta / (1 + e^{x/2}).
Profile initial_profile(double beta, const Grid& grid);

/// Exact nu = 0 wall theta(x) = 2 atan(e^{-x} tan(beta/2)); needs |beta| < pi.
Profile analytic_zero_nu_profile(double beta, const Grid& grid);

/// Euler-Lagrange residual theta'' - sin cos - (nu/2) cos(theta - beta) H[sin(theta - beta)]
/// with the energy-consistent half-Laplacian. Interior nodes only; both endpoints are NaN.
Field el_residual(const Profile& p, const ModelParams& params);

/// Largest |entry| over finite entries.
double sup_norm(const Eigen::VectorXd& v);

struct RelaxationConfig {
  double dt = 0;  ///< 0 selects min(0.05, h_min / (1 + nu))
  double tol = 1e-7;
  long max_steps = 2000000;
  long report_every = 100;

  void validate() const;
};

double default_time_step(const Grid& grid, double nu);

struct EnergySample {
  long step = 0;
  double energy = 0;
};

struct RelaxationResult {
  Profile profile;
  long steps_taken = 0;
  double final_residual = 0;
  std::vector<EnergySample> energy_history;
  bool converged = false;
  double dt = 0;
};

struct RelaxationProgress {
  long step = 0;
  double residual = 0;
  double energy = 0;
};

using ProgressCallback = std::function<void(const RelaxationProgress&)>;

/// Semi-implicit gradient flow: implicit three-point diffusion, explicit anisotropy and
/// stray-field terms, theta(0) = beta, zero slope at the last node. Stops when the
/// residual sup over nodes 1..N is <= tol. Throws DivergenceError on non-finite values
/// and StabilityError after 10 consecutive energy samples above the lowest one so far.
RelaxationResult relax(const ModelParams& params, const Grid& grid, const Profile& initial,
                       const RelaxationConfig& cfg, const ProgressCallback& progress = {});

/// Same, reusing a prebuilt energy model (its grid, beta and nu are used).
RelaxationResult relax(const EnergyModel& model, const Profile& initial, const RelaxationConfig& cfg,
                       const ProgressCallback& progress = {});

}  // namespace edgewall
