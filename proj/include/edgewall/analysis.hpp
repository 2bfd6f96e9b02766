#pragma once

#include "edgewall/energy.hpp"

#include <string>

namespace edgewall {

enum class DecayModel { power, exponential };

std::string to_string(DecayModel m);

/// Least-squares tail fit: power |theta| = A x^p (exponent_or_rate = p) or
/// exponential |theta| = A e^{-r x} (exponent_or_rate = r).
struct DecayFit {
  DecayModel model = DecayModel::power;
  double exponent_or_rate = 0;
  double prefactor = 0;
  double x_lo = 0;
  double x_hi = 0;
  double r_squared = 0;
  long nodes = 0;
};

struct DecayFits {
  DecayFit power;
  DecayFit exponential;
  const DecayFit& best() const { return exponential.r_squared > power.r_squared ? exponential : power; }
};

/// Fits theta - theta_inf on the nodes inside [x_lo, x_hi] (theta_inf = 0 by default).
/// Throws WindowError for fewer than 8 nodes, a zero sample or a sign change.
DecayFits fit_decay(const Profile& p, double x_lo, double x_hi, double theta_inf = 0);

struct ProfileDiagnostics {
  double theta_infinity = 0;
  double total_variation = 0;
  double max_abs_theta = 0;
  bool winding_flag = false;
  bool monotone_flag = false;
  bool overshoot_flag = false;
  double boundary_slope = 0;
};

/// theta'(0+) from the first four nodes, exact for a + b x + c x^2 + d x^2 ln x
/// (the edge expansion of stray-field walls); falls back to fewer nodes on tiny grids.
double boundary_slope(const Profile& p);

/// Tail limit, winding/monotonicity/overshoot flags and edge slope.
///
/// theta_infinity: mean over nodes with x >= x_N/10, rounded to a multiple of pi.
/// winding: the profile turns by more than pi/2 + 0.1 in total, or max|theta| exceeds
///   max(|beta|, pi/2) + 0.1, or theta leaves the interval between 0 and beta by more than 0.1.
/// overshoot: theta - theta_inf takes both signs with magnitude above 1e-8.
ProfileDiagnostics diagnostics(const Profile& p);

}  // namespace edgewall
