#pragma once

// Exact metric point sets carrying finite measures. Every space exposes a
// Point type with a strict order, an exact rational distance, and optionally
// an action act(g, x) of invertible matrices.

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nonarch/linalg.hpp"
#include "nonarch/normspace.hpp"
#include "nonarch/padic.hpp"

namespace nonarch {

template <class S>
concept MetricSpace = requires(const S& s, const typename S::Point& a, const typename S::Point& b) {
  { s.distance(a, b) } -> std::convertible_to<Scalar>;
  { a < b } -> std::convertible_to<bool>;
  { s == s } -> std::convertible_to<bool>;
};

template <class S>
concept GroupSpace = MetricSpace<S> && requires(const S& s, const Matrix& g, const typename S::Point& a) {
  { s.act(g, a) } -> std::convertible_to<typename S::Point>;
};

/// Q_p^n with the sup norm: d(x, y) = p^{-min_i val(x_i - y_i)}.
struct QpVecSpace {
  using Point = Vector;

  FieldSpec field;
  std::size_t n = 1;

  QpVecSpace(FieldSpec f, std::size_t dim) : field(f), n(dim) { check_dim(dim); }

  Scalar distance(const Point& x, const Point& y) const {
    Valuation v = Valuation::infinity();
    for (std::size_t i = 0; i < n; ++i) v = std::min(v, val(field, x[i] - y[i]));
    return v.is_infinite() ? Scalar(0) : p_power(field, -v.value());
  }

  Point act(const Matrix& g, const Point& x) const {
    if (g.rows() != n || g.cols() != n) throw dimension_error("matrix does not act on this space");
    return g * x;
  }

  friend bool operator==(const QpVecSpace&, const QpVecSpace&) = default;
};

/// A point of P^1(Q_p): a finite value or infinity (ordered last).
struct ProjPoint {
  bool infinite = false;
  Scalar x;

  static ProjPoint finite(Scalar v) { return {false, std::move(v)}; }
  static ProjPoint infinity() { return {true, Scalar(0)}; }

  std::string str() const { return infinite ? "inf" : x.str(); }

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
    return a.infinite == b.infinite && (a.infinite || a.x == b.x);
  }
  friend bool operator<(const ProjPoint& a, const ProjPoint& b) {
    if (a.infinite != b.infinite) return b.infinite;
    return !a.infinite && a.x < b.x;
  }
};

/// P^1(Q_p) with the chordal metric
/// d(x, y) = |x - y| / (max(1,|x|) max(1,|y|)),  d(x, inf) = 1 / max(1,|x|).
struct ProjLineSpace {
  using Point = ProjPoint;

  FieldSpec field;

  explicit ProjLineSpace(FieldSpec f) : field(f) {}

  Scalar distance(const Point& a, const Point& b) const {
    if (a == b) return 0;
    if (a.infinite || b.infinite) {
      const Scalar& x = a.infinite ? b.x : a.x;
      return max(Scalar(1), abs_value(field, x)).inv();
    }
    return abs_value(field, a.x - b.x) / (max(Scalar(1), abs_value(field, a.x)) * max(Scalar(1), abs_value(field, b.x)));
  }

  /// Moebius action z -> (a z + b) / (c z + d).
  Point act(const Matrix& g, const Point& z) const {
    if (g.rows() != 2 || g.cols() != 2) throw dimension_error("projective line needs a 2x2 matrix");
    if (det(g).is_zero()) throw domain_error("singular matrix does not act on the projective line");
    const Scalar &a = g(0, 0), &b = g(0, 1), &c = g(1, 0), &d = g(1, 1);
    if (z.infinite) return c.is_zero() ? ProjPoint::infinity() : ProjPoint::finite(a / c);
    const Scalar den = c * z.x + d;
    if (den.is_zero()) return ProjPoint::infinity();
    return ProjPoint::finite((a * z.x + b) / den);
  }

  friend bool operator==(const ProjLineSpace&, const ProjLineSpace&) = default;
};

/// Homothety classes of split norms on Q_p^n with the Goldman-Iwahori
/// metric. Points are canonical representatives.
struct NormSpace {
  using Point = SplitNorm;

  FieldSpec field;
  std::size_t n = 1;

  NormSpace(FieldSpec f, std::size_t dim) : field(f), n(dim) { check_dim(dim); }

  Point canonical(const Point& x) const { return canonicalize(x).representative; }
  Scalar distance(const Point& x, const Point& y) const { return gi_distance(x, y); }
  Point act(const Matrix& g, const Point& x) const { return canonical(x.transformed(g)); }

  friend bool operator==(const NormSpace&, const NormSpace&) = default;
};

/// Points 0..m-1 with an explicit symmetric distance table.
struct FinitePointSpace {
  using Point = std::size_t;

  std::vector<std::vector<Scalar>> table;

  explicit FinitePointSpace(std::vector<std::vector<Scalar>> t) : table(std::move(t)) {
    const std::size_t m = table.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (table[i].size() != m) throw validation_error("distance table must be square");
      if (!table[i][i].is_zero()) throw validation_error("distance table must vanish on the diagonal");
      for (std::size_t j = 0; j < m; ++j) {
        if (table[i][j] != table[j][i]) throw validation_error("distance table must be symmetric");
        if (i != j && table[i][j].sign() <= 0) throw validation_error("distinct points need positive distance");
      }
    }
  }

  std::size_t size() const { return table.size(); }
  Scalar distance(Point a, Point b) const {
    if (a >= table.size() || b >= table.size()) throw validation_error("point outside the finite space");
    return table[a][b];
  }

  friend bool operator==(const FinitePointSpace&, const FinitePointSpace&) = default;
};

/// Any ordered set with the discrete metric.
template <class T>
struct DiscreteSpace {
  using Point = T;

  Scalar distance(const Point& a, const Point& b) const { return a == b ? Scalar(0) : Scalar(1); }

  friend bool operator==(const DiscreteSpace&, const DiscreteSpace&) = default;
};

/// Product with the max metric; matrices act diagonally.
template <MetricSpace A, MetricSpace B>
struct ProductSpace {
  using Point = std::pair<typename A::Point, typename B::Point>;

  A first;
  B second;

  ProductSpace(A a, B b) : first(std::move(a)), second(std::move(b)) {}

  Scalar distance(const Point& x, const Point& y) const {
    return max(first.distance(x.first, y.first), second.distance(x.second, y.second));
  }

  Point act(const Matrix& g, const Point& x) const
    requires GroupSpace<A> && GroupSpace<B>
  {
    return {first.act(g, x.first), second.act(g, x.second)};
  }

  friend bool operator==(const ProductSpace& a, const ProductSpace& b) {
    return a.first == b.first && a.second == b.second;
  }
};

/// Points of a space tagged by a label: max(discrete label metric, d).
/// The group acts on the space coordinate and fixes labels.
template <MetricSpace S, class L>
struct LabelledSpace {
  using Point = std::pair<L, typename S::Point>;

  S base;

  explicit LabelledSpace(S s) : base(std::move(s)) {}

  Scalar distance(const Point& x, const Point& y) const {
    const Scalar d = base.distance(x.second, y.second);
    return x.first == y.first ? d : max(Scalar(1), d);
  }

  Point act(const Matrix& g, const Point& x) const
    requires GroupSpace<S>
  {
    return {x.first, base.act(g, x.second)};
  }

  friend bool operator==(const LabelledSpace& a, const LabelledSpace& b) { return a.base == b.base; }
};

template <class S>
typename S::Point canonical_point(const S& s, const typename S::Point& x) {
  if constexpr (requires { s.canonical(x); }) {
    return s.canonical(x);
  } else {
    return x;
  }
}

}  // namespace nonarch
