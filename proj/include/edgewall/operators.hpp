#pragma once

#include "edgewall/errors.hpp"
#include "edgewall/grid.hpp"
#include "edgewall/quadrature.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

namespace edgewall {

/// How the operand continues past the last grid node.
enum class RightRule { constant_tail, zero };

/// Half-line extensions of an operand sampled on [0, x_N].
template <typename Scalar>
struct BasicExtension {
  Scalar left_value = 0;
  RightRule right_rule = RightRule::constant_tail;
};
using Extension = BasicExtension<double>;

/// Samples of a scalar function on a grid.
template <typename Scalar>
struct BasicField {
  BasicGrid<Scalar> grid;
  VectorX<Scalar> values;

  BasicField() = default;
  BasicField(BasicGrid<Scalar> g, VectorX<Scalar> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) throw DomainError("field size does not match grid");
  }
};
using Field = BasicField<double>;

namespace detail {

/// Up to four (index, weight) pairs describing U(y) on one cell as a combination of node values.
template <typename Scalar>
struct CellStencil {
  std::array<Index, 4> index{};
  std::array<Scalar, 4> value{};
  std::array<Scalar, 4> slope{};
  int count = 0;

  void add(Index i, Scalar v, Scalar d) {
    for (int k = 0; k < count; ++k) {
      if (index[k] == i) {
        value[k] += v;
        slope[k] += d;
        return;
      }
    }
    index[count] = i;
    value[count] = v;
    slope[count] = d;
    ++count;
  }
};

/// Lagrange basis of the quadratic through (xa, xb, xc), value and derivative at y, scaled by s.
template <typename Scalar>
void add_quadratic(CellStencil<Scalar>& st, const VectorX<Scalar>& x, Index a, Scalar y, Scalar s) {
  const Index ids[3] = {a, a + 1, a + 2};
  for (int k = 0; k < 3; ++k) {
    const Scalar xk = x(ids[k]);
    Scalar num = 1, den = 1, dnum = 0;
    for (int m = 0; m < 3; ++m) {
      if (m == k) continue;
      const Scalar xm = x(ids[m]);
      dnum = dnum * (y - xm) + num;
      num *= (y - xm);
      den *= (xk - xm);
    }
    st.add(ids[k], s * num / den, s * dnum / den);
  }
}

/// Reconstruction on cell c: mean of the quadratics through (c-1, c, c+1) and
/// (c, c+1, c+2), whichever exist; linear when the grid has a single cell.
template <typename Scalar>
CellStencil<Scalar> cell_stencil(const VectorX<Scalar>& x, Index c, Scalar y) {
  CellStencil<Scalar> st;
  const Index last = x.size() - 1;
  const bool lower = c >= 1 && c + 1 <= last;
  const bool upper = c + 2 <= last;
  if (lower && upper) {
    add_quadratic(st, x, c - 1, y, Scalar(0.5));
    add_quadratic(st, x, c, y, Scalar(0.5));
  } else if (lower) {
    add_quadratic(st, x, c - 1, y, Scalar(1));
  } else if (upper) {
    add_quadratic(st, x, c, y, Scalar(1));
  } else {
    const Scalar h = x(c + 1) - x(c);
    const Scalar xi = (y - x(c)) / h;
    st.add(c, 1 - xi, -1 / h);
    st.add(c + 1, xi, 1 / h);
  }
  return st;
}

/// Calls f(y, weight) on Gauss points covering [a0, a1], splitting the interval
/// so that no piece is longer than its distance to the singular point `pole`.
template <typename Scalar, typename F>
void integrate_away_from(Scalar a0, Scalar a1, Scalar pole, F&& f) {
  const Scalar dist = a0 > pole ? a0 - pole : pole - a1;
  const Scalar len = a1 - a0;
  const int pieces = dist >= len ? 1 : static_cast<int>(std::ceil(static_cast<double>(len / dist)));
  const Scalar step = len / pieces;
  for (int p = 0; p < pieces; ++p) {
    const Scalar b0 = a0 + step * p;
    const Scalar b1 = p + 1 == pieces ? a1 : b0 + step;
    const Scalar d = b0 > pole ? b0 - pole : pole - b1;
    const auto& rule = gauss_legendre<Scalar>(
        gauss_points_for_separation(static_cast<double>(d), static_cast<double>(b1 - b0)));
    const Scalar mid = (b0 + b1) / 2, half = (b1 - b0) / 2;
    for (Index g = 0; g < rule.nodes.size(); ++g) f(mid + half * rule.nodes(g), half * rule.weights(g));
  }
}

/// Node-centred quadratic at node i: u(x_i + t) ~ u_i + d1 t + d2 t^2, as
/// coefficient rows over (u_{i-1}, u_i, u_{i+1}).
template <typename Scalar>
void local_quadratic(Scalar hl, Scalar hr, std::array<Scalar, 3>& d1, std::array<Scalar, 3>& d2) {
  const std::array<Scalar, 3> a{-1 / hl, 1 / hl, 0};
  const std::array<Scalar, 3> b{0, -1 / hr, 1 / hr};
  for (int k = 0; k < 3; ++k) {
    d2[k] = (b[k] - a[k]) / (hl + hr);
    d1[k] = a[k] + d2[k] * hl;
  }
}

}  // namespace detail

/// Collocation half-Laplacian (1/pi) PV int (u(x_i) - u(y)) / (x_i - y)^2 dy at
/// the interior nodes, assembled once per grid and right rule.
///
/// Row i of matrix() holds the node coefficients; left_coefficients()(i) multiplies
/// the left extension value. Rows 0 and N are zero: the integral is singular there.
template <typename Scalar>
class PvHalfLaplacian {
 public:
  PvHalfLaplacian(const BasicGrid<Scalar>& grid, RightRule rule) : grid_(grid), rule_(rule) { assemble(); }

  const BasicGrid<Scalar>& grid() const { return grid_; }
  RightRule right_rule() const { return rule_; }
  const MatrixX<Scalar>& matrix() const { return m_; }
  const VectorX<Scalar>& left_coefficients() const { return left_; }

  /// Interior values; both endpoints are NaN.
  VectorX<Scalar> apply(const VectorX<Scalar>& u, Scalar left_value) const {
    if (u.size() != grid_.size()) throw DomainError("operand size does not match grid");
    VectorX<Scalar> out = m_ * u + left_ * left_value;
    out(0) = out(grid_.last()) = std::numeric_limits<Scalar>::quiet_NaN();
    return out;
  }

 private:
  void assemble() {
    const auto& x = grid_.nodes();
    const Index n = grid_.size(), last = grid_.last();
    const Scalar pi = std::numbers::pi_v<Scalar>;
    m_ = MatrixX<Scalar>::Zero(n, n);
    left_ = VectorX<Scalar>::Zero(n);
    if (last < 2) return;
    for (Index i = 1; i < last; ++i) {
      auto row = m_.row(i);
      const Scalar xi = x(i);
      row(i) += 1 / xi;
      left_(i) = -1 / xi;
      const Scalar tail = 1 / (x(last) - xi);
      row(i) += tail;
      if (rule_ == RightRule::constant_tail) row(last) -= tail;

      const Scalar hl = xi - x(i - 1), hr = x(i + 1) - xi;
      std::array<Scalar, 3> d1, d2;
      detail::local_quadratic(hl, hr, d1, d2);
      const Scalar lg = std::log(hr / hl);
      for (int k = 0; k < 3; ++k) row(i - 1 + k) += -d1[k] * lg - d2[k] * (hl + hr);

      for (Index c = 0; c < last; ++c) {
        if (c == i - 1 || c == i) continue;
        const Scalar a0 = x(c), a1 = x(c + 1);
        row(i) += 1 / (xi - a1) - 1 / (xi - a0);
        detail::integrate_away_from(a0, a1, xi, [&](Scalar y, Scalar w) {
          const auto st = detail::cell_stencil(x, c, y);
          const Scalar kw = w / ((xi - y) * (xi - y));
          for (int k = 0; k < st.count; ++k) row(st.index[k]) -= kw * st.value[k];
        });
      }
    }
    m_ /= pi;
    left_ /= pi;
  }

  BasicGrid<Scalar> grid_;
  RightRule rule_;
  MatrixX<Scalar> m_;
  VectorX<Scalar> left_;
};

/// Collocation half-Laplacian of a field; interior nodes only, endpoints NaN.
template <typename Scalar>
BasicField<Scalar> half_laplacian_pv(const BasicField<Scalar>& u, const BasicExtension<Scalar>& ext) {
  if (!u.values.allFinite() || !std::isfinite(static_cast<double>(ext.left_value)))
    throw DomainError("operand must be finite");
  const PvHalfLaplacian<Scalar> op(u.grid, ext.right_rule);
  return BasicField<Scalar>(u.grid, op.apply(u.values, ext.left_value));
}

/// The same integral evaluated at x = 0. Finite only when u(0) equals the left
/// value and the one-sided slope vanishes; otherwise SingularEndpointError.
template <typename Scalar>
Scalar half_laplacian_pv_at_edge(const BasicField<Scalar>& u, const BasicExtension<Scalar>& ext) {
  const auto& x = u.grid.nodes();
  const auto& v = u.values;
  const Index last = u.grid.last();
  if (v(0) != ext.left_value)
    throw SingularEndpointError("half-Laplacian at x = 0 is singular: u(0) differs from the left extension");
  if (last < 2) throw DomainError("edge evaluation needs at least three nodes");
  // Quadratic through the first three nodes: u = u0 + c1 y + c2 y^2.
  const Scalar h0 = x(1), h1 = x(2) - x(1);
  const Scalar s0 = (v(1) - v(0)) / h0, s1 = (v(2) - v(1)) / h1;
  const Scalar c2 = (s1 - s0) / (h0 + h1);
  const Scalar c1 = s0 - c2 * h0;
  const Scalar scale = std::max<Scalar>(v.cwiseAbs().maxCoeff(), Scalar(1)) / h0;
  if (std::abs(c1) > Scalar(1e-8) * scale)
    throw SingularEndpointError("half-Laplacian at x = 0 diverges logarithmically for nonzero edge slope");
  Scalar total = -c2 * h0;
  const Scalar tail = 1 / x(last);
  total += (ext.right_rule == RightRule::constant_tail ? v(0) - v(last) : v(0)) * tail;
  for (Index c = 1; c < last; ++c) {
    detail::integrate_away_from(x(c), x(c + 1), Scalar(0), [&](Scalar y, Scalar w) {
      const auto st = detail::cell_stencil(x, c, y);
      Scalar uy = 0;
      for (int k = 0; k < st.count; ++k) uy += st.value[k] * v(st.index[k]);
      total += w * (v(0) - uy) / (y * y);
    });
  }
  return total / std::numbers::pi_v<Scalar>;
}

/// PV int u'(y) / (x_i - y) dy over the real line, with the jumps of the extended
/// operand at 0 and x_N included. Interior nodes only, endpoints NaN.
template <typename Scalar>
BasicField<Scalar> hilbert_of_derivative(const BasicField<Scalar>& u, const BasicExtension<Scalar>& ext) {
  const auto& x = u.grid.nodes();
  const auto& v = u.values;
  const Index last = u.grid.last();
  VectorX<Scalar> out = VectorX<Scalar>::Constant(u.grid.size(), std::numeric_limits<Scalar>::quiet_NaN());
  if (last < 2) return BasicField<Scalar>(u.grid, out);
  for (Index i = 1; i < last; ++i) {
    const Scalar xi = x(i);
    Scalar total = (v(0) - ext.left_value) / xi;
    if (ext.right_rule == RightRule::zero) total += v(last) / (x(last) - xi);
    const Scalar hl = xi - x(i - 1), hr = x(i + 1) - xi;
    std::array<Scalar, 3> d1, d2;
    detail::local_quadratic(hl, hr, d1, d2);
    Scalar a1 = 0, a2 = 0;
    for (int k = 0; k < 3; ++k) {
      a1 += d1[k] * v(i - 1 + k);
      a2 += d2[k] * v(i - 1 + k);
    }
    total += -a1 * std::log(hr / hl) - 2 * a2 * (hl + hr);
    for (Index c = 0; c < last; ++c) {
      if (c == i - 1 || c == i) continue;
      detail::integrate_away_from(x(c), x(c + 1), xi, [&](Scalar y, Scalar w) {
        const auto st = detail::cell_stencil(x, c, y);
        Scalar du = 0;
        for (int k = 0; k < st.count; ++k) du += st.slope[k] * v(st.index[k]);
        total += w * du / (xi - y);
      });
    }
    out(i) = total;
  }
  return BasicField<Scalar>(u.grid, out);
}

namespace detail {

/// Samples of one period from a uniform field: all nodes, or all but a duplicated last node.
template <typename Scalar>
VectorX<Scalar> periodic_samples(const BasicField<Scalar>& u, Scalar period, bool& dropped_last) {
  if (!u.grid.is_uniform()) throw DomainError("periodic operator needs a uniform grid");
  const Scalar dx = u.grid.spacing(0);
  const Index n = u.grid.size();
  const auto close = [&](Scalar a, Scalar b) { return std::abs(a - b) <= Scalar(1e-9) * std::abs(b); };
  if (close(dx * static_cast<Scalar>(n), period)) {
    dropped_last = false;
    return u.values;
  }
  if (close(dx * static_cast<Scalar>(n - 1), period)) {
    dropped_last = true;
    return u.values.head(n - 1);
  }
  throw DomainError("period must equal the number of samples times the spacing");
}

template <typename Scalar>
BasicField<Scalar> periodic_result(const BasicField<Scalar>& u, const VectorX<Scalar>& r, bool dropped_last) {
  VectorX<Scalar> out(u.grid.size());
  out.head(r.size()) = r;
  if (dropped_last) out(u.grid.last()) = r(0);
  return BasicField<Scalar>(u.grid, out);
}

}  // namespace detail

/// Spectral half-Laplacian: multiply every Fourier mode by |k|. The field is one
/// period of a periodic function on a uniform grid (a duplicated endpoint is allowed).
template <typename Scalar>
BasicField<Scalar> half_laplacian_spectral(const BasicField<Scalar>& u, Scalar period) {
  bool dropped = false;
  const VectorX<Scalar> s = detail::periodic_samples(u, period, dropped);
  const Index n = s.size();
  Eigen::FFT<Scalar> fft;
  std::vector<Scalar> in(s.data(), s.data() + n);
  std::vector<std::complex<Scalar>> spec;
  fft.fwd(spec, in);
  const Scalar k0 = 2 * std::numbers::pi_v<Scalar> / period;
  for (Index m = 0; m < n; ++m) {
    const Index f = m <= n / 2 ? m : m - n;
    Scalar k = std::abs(static_cast<Scalar>(f)) * k0;
    // The Nyquist mode of an even-length transform is real; |k| keeps it so.
    spec[m] *= k;
  }
  std::vector<Scalar> back;
  fft.inv(back, spec);
  const VectorX<Scalar> r = Eigen::Map<const VectorX<Scalar>>(back.data(), n);
  return detail::periodic_result(u, r, dropped);
}

/// Collocation half-Laplacian of a periodic field: the real-line PV integral with
/// the periodized kernel (pi/P)^2 / sin^2(pi t / P) over one period around x_i.
template <typename Scalar>
BasicField<Scalar> half_laplacian_pv_periodic(const BasicField<Scalar>& u, Scalar period) {
  bool dropped = false;
  const VectorX<Scalar> s = detail::periodic_samples(u, period, dropped);
  const Index n = s.size();
  if (n < 4) throw DomainError("periodic operator needs at least four samples per period");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar dx = period / static_cast<Scalar>(n);
  const Scalar q = pi / period;
  const auto at = [&](Index j) { return s(((j % n) + n) % n); };
  // Smooth remainder of the periodized kernel after removing 1/t^2.
  const auto remainder = [&](Scalar t) {
    const Scalar z = q * t;
    if (std::abs(z) < Scalar(0.02)) return q * q * (Scalar(1) / 3 + z * z / 15 + 2 * z * z * z * z / 189);
    const Scalar sz = std::sin(z);
    return q * q / (sz * sz) - 1 / (t * t);
  };
  const auto kernel = [&](Scalar t) {
    const Scalar sz = std::sin(q * t);
    return q * q / (sz * sz);
  };
  // Reference cell [0, 1] with nodes at -1, 0, 1, 2 (uniform): averaged quadratic.
  const BasicGrid<Scalar> ref(VectorX<Scalar>::LinSpaced(4, 0, 3));
  const Index m = n / 2;
  VectorX<Scalar> r(n);
  for (Index i = 0; i < n; ++i) {
    const Scalar ui = s(i);
    const Scalar a = (ui - at(i - 1)) / dx, b = (at(i + 1) - ui) / dx;
    const Scalar d2 = (b - a) / (2 * dx), d1 = a + d2 * dx;
    Scalar total = -d2 * 2 * dx;
    for (Index k = -m; k < n - m; ++k) {
      const Scalar t0 = dx * static_cast<Scalar>(k), t1 = t0 + dx;
      if (k == -1 || k == 0) {
        const auto& rule = gauss_legendre<Scalar>(12);
        for (Index g = 0; g < rule.nodes.size(); ++g) {
          const Scalar t = (t0 + t1) / 2 + dx / 2 * rule.nodes(g);
          total += dx / 2 * rule.weights(g) * (-(d1 * t + d2 * t * t)) * remainder(t);
        }
        continue;
      }
      const Scalar dist = std::min(std::min(std::abs(t0), std::abs(t1)),
                                   std::min(period - std::abs(t0), period - std::abs(t1)));
      const auto& rule = gauss_legendre<Scalar>(
          gauss_points_for_separation(static_cast<double>(dist), static_cast<double>(dx)));
      for (Index g = 0; g < rule.nodes.size(); ++g) {
        const Scalar xi = (1 + rule.nodes(g)) / 2;
        const auto st = detail::cell_stencil(ref.nodes(), Index(1), Scalar(1) + xi);
        Scalar uy = 0;
        for (int p = 0; p < st.count; ++p) uy += st.value[p] * at(i + k + st.index[p] - 1);
        const Scalar t = t0 + dx * xi;
        total += dx / 2 * rule.weights(g) * (ui - uy) * kernel(t);
      }
    }
    r(i) = total / pi;
  }
  return detail::periodic_result(u, r, dropped);
}

/// Exact quadratic forms of piecewise-linear v on a grid over [0, X]:
///   box:    v^T K v  = int int_{[0,X]^2} (v(x) - v(y))^2 / (x - y)^2
///   left:   v^T TL v = int_0^X v^2 / x        (assumes v_0 = 0)
///   right:  v^T TR v = int_0^X v^2 / (X - x)  (assumes v_N = 0)
template <typename Scalar>
struct NonlocalForms {
  MatrixX<Scalar> box;
  MatrixX<Scalar> left;
  MatrixX<Scalar> right;

  static NonlocalForms build(const BasicGrid<Scalar>& grid);

  /// Gagliardo double integral over (0, inf)^2 of u continued by its last value.
  Scalar gagliardo(const VectorX<Scalar>& u) const {
    const VectorX<Scalar> v = u.array() - u(u.size() - 1);
    return u.dot(box * u) + 2 * v.dot(right * v);
  }
  /// int_0^inf u^2 / x for u with u(0) = 0 continued by its last value.
  Scalar edge(const VectorX<Scalar>& u) const { return u.dot(left * u); }
  /// int int_{R^2} (v(x) - v(y))^2 / (x - y)^2 for v vanishing outside [0, X].
  Scalar zero_extended(const VectorX<Scalar>& v) const {
    return v.dot(box * v) + 2 * v.dot(left * v) + 2 * v.dot(right * v);
  }
};

template <typename Scalar>
NonlocalForms<Scalar> NonlocalForms<Scalar>::build(const BasicGrid<Scalar>& grid) {
  const auto& x = grid.nodes();
  const Index n = grid.size(), cells = grid.cells();
  NonlocalForms f;
  f.box = MatrixX<Scalar>::Zero(n, n);
  f.left = MatrixX<Scalar>::Zero(n, n);
  f.right = MatrixX<Scalar>::Zero(n, n);
  auto& K = f.box;

  for (Index c = 0; c < cells; ++c) {
    K(c, c) += 1;
    K(c + 1, c + 1) += 1;
    K(c, c + 1) -= 1;
    K(c + 1, c) -= 1;
  }
  for (Index c = 0; c + 1 < cells; ++c) {
    const Scalar a = grid.spacing(c), b = grid.spacing(c + 1);
    const Scalar la = std::log1p(a / b), lb = std::log1p(b / a);
    const Scalar P = a * b - b * b * la;
    const Scalar Q = a * b - a * a * lb;
    const Scalar R = -a * b + b * b * la + a * a * lb;
    // Slopes as rows over (v_c, v_{c+1}, v_{c+2}).
    const Scalar sa[3] = {-1 / a, 1 / a, 0};
    const Scalar sb[3] = {0, -1 / b, 1 / b};
    for (int p = 0; p < 3; ++p)
      for (int r = 0; r < 3; ++r)
        K(c + p, c + r) += 2 * (P * sa[p] * sa[r] + R * (sa[p] * sb[r] + sb[p] * sa[r]) / 2 + Q * sb[p] * sb[r]);
  }
  // Separated cells: smooth kernel, tensor Gauss on pieces no longer than the gap.
  std::vector<std::pair<Scalar, Scalar>> outer;  // (point, weight)
  for (Index c = 0; c + 2 < cells; ++c) {
    const Scalar c0 = x(c), c1 = x(c + 1), hc = c1 - c0;
    for (Index d = c + 2; d < cells; ++d) {
      const Scalar d0 = x(d), d1 = x(d + 1), hd = d1 - d0;
      const Scalar gap = d0 - c1;
      const int pc = hc > gap ? static_cast<int>(std::ceil(static_cast<double>(hc / gap))) : 1;
      const int pd = hd > gap ? static_cast<int>(std::ceil(static_cast<double>(hd / gap))) : 1;
      Scalar S[4][4] = {};
      for (int ip = 0; ip < pc; ++ip) {
        const Scalar a0 = c0 + hc * ip / pc, a1 = c0 + hc * (ip + 1) / pc;
        for (int jp = 0; jp < pd; ++jp) {
          const Scalar b0 = d0 + hd * jp / pd, b1 = d0 + hd * (jp + 1) / pd;
          const Scalar sep = b0 - a1;
          const int np = gauss_points_for_separation(static_cast<double>(sep),
                                                     static_cast<double>(std::max(a1 - a0, b1 - b0)));
          const auto& rule = gauss_legendre<Scalar>(np);
          for (Index g = 0; g < rule.nodes.size(); ++g) {
            const Scalar xa = (a0 + a1) / 2 + (a1 - a0) / 2 * rule.nodes(g);
            const Scalar wa = (a1 - a0) / 2 * rule.weights(g);
            const Scalar xi = (xa - c0) / hc;
            for (Index e = 0; e < rule.nodes.size(); ++e) {
              const Scalar yb = (b0 + b1) / 2 + (b1 - b0) / 2 * rule.nodes(e);
              const Scalar wb = (b1 - b0) / 2 * rule.weights(e);
              const Scalar eta = (yb - d0) / hd;
              const Scalar w = 2 * wa * wb / ((yb - xa) * (yb - xa));
              const Scalar al[4] = {1 - xi, xi, -(1 - eta), -eta};
              for (int p = 0; p < 4; ++p)
                for (int r = p; r < 4; ++r) S[p][r] += w * al[p] * al[r];
            }
          }
        }
      }
      const Index id[4] = {c, c + 1, d, d + 1};
      for (int p = 0; p < 4; ++p) {
        K(id[p], id[p]) += S[p][p];
        for (int r = p + 1; r < 4; ++r) {
          K(id[p], id[r]) += S[p][r];
          K(id[r], id[p]) += S[p][r];
        }
      }
    }
  }

  // Edge forms: the singular end cell is exact, the rest is Gauss.
  const auto add_cell = [&](MatrixX<Scalar>& T, Index c, Scalar pole, bool from_left) {
    const Scalar c0 = x(c), c1 = x(c + 1), h = c1 - c0;
    Scalar s00 = 0, s01 = 0, s11 = 0;
    detail::integrate_away_from(c0, c1, pole, [&](Scalar y, Scalar w) {
      const Scalar xi = (y - c0) / h;
      const Scalar k = w / (from_left ? y - pole : pole - y);
      s00 += k * (1 - xi) * (1 - xi);
      s01 += k * (1 - xi) * xi;
      s11 += k * xi * xi;
    });
    T(c, c) += s00;
    T(c, c + 1) += s01;
    T(c + 1, c) += s01;
    T(c + 1, c + 1) += s11;
  };
  f.left(1, 1) += Scalar(0.5);
  for (Index c = 1; c < cells; ++c) add_cell(f.left, c, Scalar(0), true);
  f.right(cells - 1, cells - 1) += Scalar(0.5);
  for (Index c = 0; c + 1 < cells; ++c) add_cell(f.right, c, x(cells), false);
  // The exact end cells assume v_0 = 0 and v_N = 0; zero those rows so the forms never see them.
  f.left.row(0).setZero();
  f.left.col(0).setZero();
  f.right.row(cells).setZero();
  f.right.col(cells).setZero();
  return f;
}

/// Energy-consistent half-Laplacian on a grid: H u = A u / (2 pi w), where
///   u^T A u = int int_{R^2} (u(x) - u(y))^2 / (x - y)^2
/// for piecewise-linear u with u = 0 left of the edge and a constant right tail,
/// and w are the trapezoid weights. Its weighted gradient structure makes the
/// relaxation a discrete gradient flow of the renormalized energy.
template <typename Scalar>
class VariationalHalfLaplacian {
 public:
  explicit VariationalHalfLaplacian(const BasicGrid<Scalar>& grid)
      : grid_(grid), forms_(NonlocalForms<Scalar>::build(grid)), w_(grid.trapezoid_weights()) {
    const Index last = grid.last();
    // P = I - 1 e_N^T maps u to u - u_N.
    MatrixX<Scalar> tp = forms_.right;
    tp.col(last) -= forms_.right.rowwise().sum();
    MatrixX<Scalar> ptp = tp;
    ptp.row(last) -= tp.colwise().sum();
    a_ = forms_.box + 2 * ptp + 2 * forms_.left;
    scale_ = (2 * std::numbers::pi_v<Scalar> * w_).cwiseInverse();
  }

  const BasicGrid<Scalar>& grid() const { return grid_; }
  const NonlocalForms<Scalar>& forms() const { return forms_; }
  /// The symmetric matrix A.
  const MatrixX<Scalar>& matrix() const { return a_; }
  const VectorX<Scalar>& weights() const { return w_; }

  /// H (u - s) for an operand with u(0) = s.
  VectorX<Scalar> apply(const VectorX<Scalar>& u, Scalar left_value = 0) const {
    if (u.size() != grid_.size()) throw DomainError("operand size does not match grid");
    if (left_value == Scalar(0)) return (a_ * u).cwiseProduct(scale_);
    const VectorX<Scalar> v = u.array() - left_value;
    return (a_ * v).cwiseProduct(scale_);
  }

  /// u^T A u.
  Scalar quadratic(const VectorX<Scalar>& u) const { return u.dot(a_ * u); }

 private:
  BasicGrid<Scalar> grid_;
  NonlocalForms<Scalar> forms_;
  VectorX<Scalar> w_;
  MatrixX<Scalar> a_;
  VectorX<Scalar> scale_;
};

}  // namespace edgewall
