#pragma once

#include "edgewall/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace edgewall {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

/// Ordered node set on [0, x_end] (lengths in units of the Bloch width L).
///
/// Invariants: nodes(0) == 0, strictly increasing, at least two nodes.
template <typename Scalar>
class BasicGrid {
 public:
  using Vector = VectorX<Scalar>;

  BasicGrid() = default;

  explicit BasicGrid(Vector nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw DomainError("grid needs at least two nodes");
    if (nodes_(0) != Scalar(0)) throw DomainError("grid must start at x = 0");
    for (Index i = 1; i < nodes_.size(); ++i) {
      if (!(nodes_(i) > nodes_(i - 1)) || !std::isfinite(static_cast<double>(nodes_(i))))
        throw DomainError("grid nodes must be finite and strictly increasing (node " +
                          std::to_string(i) + ")");
    }
  }

  Index size() const { return nodes_.size(); }
  Index cells() const { return nodes_.size() - 1; }
  Index last() const { return nodes_.size() - 1; }

  const Vector& nodes() const { return nodes_; }
  Scalar operator[](Index i) const { return nodes_(i); }
  Scalar x_end() const { return nodes_(last()); }

  Scalar spacing(Index cell) const { return nodes_(cell + 1) - nodes_(cell); }

  Vector spacings() const { return nodes_.tail(cells()) - nodes_.head(cells()); }

  Scalar min_spacing() const { return spacings().minCoeff(); }
  Scalar max_spacing() const { return spacings().maxCoeff(); }

  /// Trapezoid weights: w_i = (h_{i-1} + h_i) / 2 with half cells at both ends.
  Vector trapezoid_weights() const {
    Vector w = Vector::Zero(size());
    for (Index c = 0; c < cells(); ++c) {
      const Scalar h = spacing(c);
      w(c) += h / 2;
      w(c + 1) += h / 2;
    }
    return w;
  }

  bool is_uniform(Scalar rel_tol = Scalar(1e-9)) const {
    const Vector h = spacings();
    return (h.array() - h(0)).abs().maxCoeff() <= rel_tol * h(0);
  }

  /// Index of the cell containing x (clamped to the grid).
  Index locate(Scalar x) const {
    const auto* begin = nodes_.data();
    const auto* end = begin + nodes_.size();
    const auto* it = std::upper_bound(begin, end, x);
    Index c = static_cast<Index>(it - begin) - 1;
    if (c < 0) c = 0;
    if (c > cells() - 1) c = cells() - 1;
    return c;
  }

  friend bool operator==(const BasicGrid& a, const BasicGrid& b) {
    return a.nodes_.size() == b.nodes_.size() && a.nodes_ == b.nodes_;
  }

 private:
  Vector nodes_;
};

using Grid = BasicGrid<double>;

/// Nodes i*dx for i = 0..ceil(x_max/dx).
template <typename Scalar>
BasicGrid<Scalar> make_uniform_grid(Scalar dx, Scalar x_max) {
  if (!(dx > 0) || !std::isfinite(static_cast<double>(dx))) throw DomainError("dx must be positive");
  if (!(x_max > 0)) throw DomainError("x_max must be positive");
  // Guard against x_max/dx landing a rounding error above an integer.
  const auto cells = static_cast<Index>(std::ceil(static_cast<double>(x_max / dx) - 1e-9));
  const Index n = std::max<Index>(cells, 1) + 1;
  VectorX<Scalar> nodes(n);
  for (Index i = 0; i < n; ++i) nodes(i) = dx * static_cast<Scalar>(i);
  return BasicGrid<Scalar>(std::move(nodes));
}

/// Geometrically stretched grid: h_1 = dx0, h_{i+1} = min(h_i (1 + 1/b), h_max),
/// accumulated until the last node reaches x_max. b = +inf gives a uniform grid.
template <typename Scalar>
BasicGrid<Scalar> make_stretched_grid(Scalar dx0, Scalar stretch_b, Scalar x_max,
                                      Scalar h_max = Scalar(16)) {
  if (!(dx0 > 0)) throw DomainError("dx0 must be positive");
  if (!(stretch_b > 0)) throw DomainError("stretch factor must be positive");
  if (!(x_max > 0)) throw DomainError("x_max must be positive");
  if (!(h_max >= dx0)) throw DomainError("h_max must be at least dx0");
  const Scalar growth = Scalar(1) + Scalar(1) / stretch_b;
  std::vector<Scalar> nodes{Scalar(0)};
  Scalar x = 0;
  Scalar h = dx0;
  const Scalar target = x_max * (Scalar(1) - Scalar(16) * std::numeric_limits<Scalar>::epsilon());
  while (x < target) {
    x += h;
    nodes.push_back(x);
    h = std::min(h * growth, h_max);
  }
  return BasicGrid<Scalar>(Eigen::Map<VectorX<Scalar>>(nodes.data(), static_cast<Index>(nodes.size())));
}

}  // namespace edgewall
