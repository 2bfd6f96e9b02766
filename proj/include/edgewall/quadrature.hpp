#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <numbers>

namespace edgewall {

/// Gauss–Legendre rule on [-1, 1].
template <typename Scalar>
struct GaussRule {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
};

namespace detail {

template <typename Scalar>
GaussRule<Scalar> compute_gauss_legendre(int n) {
  GaussRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    long double z = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double dp = 0;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (z * p1 - p0) / (z * z - 1);
      long double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-19L) break;
    }
    long double w = 2 / ((1 - z * z) * dp * dp);
    rule.nodes(i) = static_cast<Scalar>(-z);
    rule.nodes(n - 1 - i) = static_cast<Scalar>(z);
    rule.weights(i) = rule.weights(n - 1 - i) = static_cast<Scalar>(w);
  }
  return rule;
}

}  // namespace detail

inline constexpr int kMaxGaussPoints = 24;

/// Cached rule with n points, 1 <= n <= kMaxGaussPoints.
template <typename Scalar>
const GaussRule<Scalar>& gauss_legendre(int n) {
  static const auto table = [] {
    std::array<GaussRule<Scalar>, kMaxGaussPoints + 1> t;
    for (int k = 1; k <= kMaxGaussPoints; ++k) t[k] = detail::compute_gauss_legendre<Scalar>(k);
    return t;
  }();
  return table[n];
}

/// Point count for a smooth integrand on a cell of length `h` whose nearest
/// singularity sits `distance` away; keeps the rule error near 1e-13.
inline int gauss_points_for_separation(double distance, double h) {
  const double r = distance / h;
  if (r < 2.0) return 12;
  if (r < 6.0) return 7;
  if (r < 20.0) return 5;
  if (r < 80.0) return 4;
  return 3;
}

}  // namespace edgewall
