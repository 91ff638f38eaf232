#pragma once

// Norms and seminorms on Q_p^n given by a splitting basis and weights:
// n(x) = p^{-min_i (w_i + val(c_i))} for x = sum_i c_i b_i. Values are
// carried as the exponent min_i (w_i + val(c_i)); a larger exponent is a
// smaller norm. Weights may be rational (denominator e), which models norms
// split over a ramified extension of degree e.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "nonarch/linalg.hpp"
#include "nonarch/padic.hpp"

namespace nonarch {

namespace detail {

inline long lcm_of_denominators(const std::vector<Scalar>& ws) {
  mpz_class l = 1;
  for (const auto& w : ws) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), w.den().get_mpz_t());
  return l.get_si();
}

inline Scalar frac(const Scalar& x) { return x - Scalar(x.floor()); }

inline void check_basis(const Matrix& basis, std::size_t weights) {
  if (!basis.is_square()) throw dimension_error("splitting basis must be square");
  check_dim(basis.rows());
  if (weights != basis.rows()) throw dimension_error("one weight per basis column required");
}

}  // namespace detail

class SplitNorm {
 public:
  SplitNorm(FieldSpec f, Matrix basis, std::vector<Scalar> weights)
      : field_(f), basis_(std::move(basis)), weights_(std::move(weights)) {
    detail::check_basis(basis_, weights_.size());
    inverse_ = inverse(basis_);  // throws rank_error on a singular basis
  }

  static SplitNorm standard(FieldSpec f, std::size_t n) {
    return SplitNorm(f, Matrix::identity(n), std::vector<Scalar>(n));
  }

  const FieldSpec& field() const { return field_; }
  const Matrix& basis() const { return basis_; }
  const Matrix& basis_inverse() const { return inverse_; }
  const std::vector<Scalar>& weights() const { return weights_; }
  std::size_t dim() const { return basis_.rows(); }
  long denominator() const { return detail::lcm_of_denominators(weights_); }

  /// Homothetic norm with every weight shifted by c, i.e. |p|^c * n.
  SplitNorm shifted(const Scalar& c) const {
    std::vector<Scalar> w = weights_;
    for (auto& x : w) x += c;
    return SplitNorm(field_, basis_, std::move(w));
  }

  /// (g.n)(x) = n(g^{-1} x).
  SplitNorm transformed(const Matrix& g) const { return SplitNorm(field_, g * basis_, weights_); }

  friend bool operator==(const SplitNorm& a, const SplitNorm& b) {
    return a.field_ == b.field_ && a.weights_ == b.weights_ && a.basis_ == b.basis_;
  }
  friend bool operator<(const SplitNorm& a, const SplitNorm& b) {
    if (a.weights_ != b.weights_) return a.weights_ < b.weights_;
    return a.basis_ < b.basis_;
  }

 private:
  FieldSpec field_;
  Matrix basis_;
  std::vector<Scalar> weights_;
  Matrix inverse_;
};

/// Norm whose unit ball is the Z_p-span of the lattice basis.
inline SplitNorm lattice_norm(const Lattice& l) {
  return SplitNorm(l.field(), l.basis(), std::vector<Scalar>(l.dim()));
}

/// Seminorm: a split norm where some weights are +inf. Those basis columns
/// span the kernel.
class Seminorm {
 public:
  Seminorm(FieldSpec f, Matrix basis, std::vector<ExtRational> weights)
      : field_(f), basis_(std::move(basis)), weights_(std::move(weights)) {
    detail::check_basis(basis_, weights_.size());
    bool any_finite = false;
    for (const auto& w : weights_) {
      if (w.is_neg_inf()) throw validation_error("seminorm weight cannot be -inf");
      any_finite = any_finite || w.is_finite();
    }
    if (!any_finite) throw validation_error("seminorm must have a finite weight");
    inverse_ = inverse(basis_);
  }
  explicit Seminorm(const SplitNorm& n)
      : Seminorm(n.field(), n.basis(), std::vector<ExtRational>(n.weights().begin(), n.weights().end())) {}

  const FieldSpec& field() const { return field_; }
  const Matrix& basis() const { return basis_; }
  const Matrix& basis_inverse() const { return inverse_; }
  const std::vector<ExtRational>& weights() const { return weights_; }
  std::size_t dim() const { return basis_.rows(); }

  bool is_norm() const {
    return std::all_of(weights_.begin(), weights_.end(), [](const ExtRational& w) { return w.is_finite(); });
  }
  std::optional<SplitNorm> as_norm() const {
    if (!is_norm()) return std::nullopt;
    std::vector<Scalar> w;
    for (const auto& x : weights_) w.push_back(x.value());
    return SplitNorm(field_, basis_, std::move(w));
  }

  Seminorm transformed(const Matrix& g) const { return Seminorm(field_, g * basis_, weights_); }

  friend bool operator==(const Seminorm& a, const Seminorm& b) {
    return a.field_ == b.field_ && a.weights_ == b.weights_ && a.basis_ == b.basis_;
  }
  friend bool operator<(const Seminorm& a, const Seminorm& b) {
    if (a.weights_ != b.weights_) return a.weights_ < b.weights_;
    return a.basis_ < b.basis_;
  }

 private:
  FieldSpec field_;
  Matrix basis_;
  std::vector<ExtRational> weights_;
  Matrix inverse_;
};

namespace detail {
inline void check_vector(std::size_t n, const Vector& x) {
  if (x.size() != n) throw dimension_error("vector dimension does not match the norm");
}
}  // namespace detail

/// Exponent q with n(x) = p^{-q}; +inf exactly for x = 0.
inline ExtRational evaluate(const SplitNorm& n, const Vector& x) {
  detail::check_vector(n.dim(), x);
  const Vector c = n.basis_inverse() * x;
  ExtRational best = ExtRational::pos_inf();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Valuation v = val(n.field(), c[i]);
    if (v.is_infinite()) continue;
    best = std::min(best, ExtRational(n.weights()[i] + Scalar(v.value())));
  }
  return best;
}

/// Exponent q with s(x) = p^{-q}; +inf exactly on the kernel.
inline ExtRational evaluate(const Seminorm& s, const Vector& x) {
  detail::check_vector(s.dim(), x);
  const Vector c = s.basis_inverse() * x;
  ExtRational best = ExtRational::pos_inf();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!s.weights()[i].is_finite()) continue;
    const Valuation v = val(s.field(), c[i]);
    if (v.is_infinite()) continue;
    best = std::min(best, ExtRational(s.weights()[i].value() + Scalar(v.value())));
  }
  return best;
}

/// log_p sup_x n1(x)/n2(x), read off the weighted change of basis: the sup is
/// attained on a basis vector of n2.
inline Scalar one_sided_exponent_entrywise(const SplitNorm& n1, const SplitNorm& n2) {
  const Matrix change = n1.basis_inverse() * n2.basis();
  std::optional<Scalar> best;
  for (std::size_t i = 0; i < change.rows(); ++i) {
    for (std::size_t j = 0; j < change.cols(); ++j) {
      const Valuation v = val(n1.field(), change(i, j));
      if (v.is_infinite()) continue;
      const Scalar cand = n2.weights()[j] - n1.weights()[i] - Scalar(v.value());
      if (!best || *best < cand) best = cand;
    }
  }
  return *best;
}

namespace detail {
inline void check_pair(const SplitNorm& a, const SplitNorm& b) {
  if (a.dim() != b.dim()) throw dimension_error("norms live on spaces of different dimension");
  if (!(a.field() == b.field())) throw validation_error("norms over different primes");
}
}  // namespace detail

/// (log_p sup n1/n2, log_p sup n2/n1). On the integer grid both come from the
/// Smith exponents of D1 B1^{-1} B2 D2^{-1} (D = diag(p^w)): (-a_1, a_n).
inline std::pair<Scalar, Scalar> equivalence_constant(const SplitNorm& n1, const SplitNorm& n2) {
  detail::check_pair(n1, n2);
  if (std::lcm(n1.denominator(), n2.denominator()) != 1) {
    return {one_sided_exponent_entrywise(n1, n2), one_sided_exponent_entrywise(n2, n1)};
  }
  const FieldSpec& f = n1.field();
  const std::size_t n = n1.dim();
  Matrix m = n1.basis_inverse() * n2.basis();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const long shift = (n1.weights()[i] - n2.weights()[j]).floor();
      if (shift != 0) m(i, j) *= p_power(f, shift);
    }
  }
  const SNFResult snf = snf_zp(f, m);
  return {Scalar(-snf.exponents.front()), Scalar(snf.exponents.back())};
}

/// Goldman-Iwahori distance d(n1, n2) in units of log p.
inline Scalar gi_distance(const SplitNorm& n1, const SplitNorm& n2) {
  const auto [a, b] = equivalence_constant(n1, n2);
  return a + b;
}

inline bool is_homothetic(const SplitNorm& n1, const SplitNorm& n2) { return gi_distance(n1, n2).is_zero(); }

/// Canonical representative of a homothety class.
template <class N>
struct HomothetyClass {
  N representative;

  friend bool operator==(const HomothetyClass& a, const HomothetyClass& b) {
    return a.representative == b.representative;
  }
  friend bool operator<(const HomothetyClass& a, const HomothetyClass& b) {
    return a.representative < b.representative;
  }
};

namespace detail {

/// Incremental linear independence test over F_p.
class ResidueBasis {
 public:
  explicit ResidueBasis(long p) : p_(p) {}

  /// Inserts v if it is independent of the stored vectors.
  bool insert(std::vector<long> v) {
    for (const auto& [pivot, row] : rows_) {
      const long c = v[pivot];
      if (c == 0) continue;
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = ((v[k] - c * row[k]) % p_ + p_) % p_;
    }
    auto it = std::find_if(v.begin(), v.end(), [](long x) { return x != 0; });
    if (it == v.end()) return false;
    const std::size_t pivot = static_cast<std::size_t>(it - v.begin());
    const long inv = mod_inverse(v[pivot]);
    for (auto& x : v) x = (x * inv) % p_;
    for (auto& [piv, row] : rows_) {
      const long c = row[pivot];
      if (c == 0) continue;
      for (std::size_t k = 0; k < row.size(); ++k) row[k] = ((row[k] - c * v[k]) % p_ + p_) % p_;
    }
    rows_.emplace_back(pivot, std::move(v));
    return true;
  }

 private:
  long mod_inverse(long a) const {
    long t = 0, nt = 1, r = p_, nr = a;
    while (nr != 0) {
      const long q = r / nr;
      t = std::exchange(nt, t - q * nt);
      r = std::exchange(nr, r - q * nr);
    }
    return (t % p_ + p_) % p_;
  }

  long p_;
  std::vector<std::pair<std::size_t, std::vector<long>>> rows_;
};

/// Splitting basis read off the lattice chain of the norm (basis, weights),
/// where 0 is one of the fractional weight classes. The chain lattices are
/// canonical, so the output depends only on the norm.
inline SplitNorm adapted_representative(const FieldSpec& f, const Matrix& basis, const std::vector<Scalar>& weights) {
  const std::size_t n = basis.rows();
  std::vector<Scalar> classes;
  for (const auto& w : weights) classes.push_back(frac(w));
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  // chain[k] = {x : exponent(x) >= classes[k]}
  std::vector<Matrix> chain;
  for (const auto& t : classes) {
    Matrix g = basis;
    for (std::size_t j = 0; j < n; ++j) g.scale_col(j, p_power(f, (t - weights[j]).ceil()));
    chain.push_back(hermite_zp(f, g));
  }
  const Matrix top_inverse = inverse(chain.front());

  ResidueBasis residues(f.p());
  std::vector<std::pair<Scalar, Vector>> picked;  // (weight, primitive column)
  for (std::size_t k = chain.size(); k-- > 0;) {
    for (std::size_t j = 0; j < n && picked.size() < n; ++j) {
      const Vector h = chain[k].column(j);
      const Vector coords = top_inverse * h;
      std::vector<long> image(n);
      for (std::size_t i = 0; i < n; ++i) image[i] = residue_rep(f, coords[i], 1).num().get_si();
      if (!residues.insert(std::move(image))) continue;
      const long shift = min_entry_valuation(f, Matrix::from_columns({h}, n)).value();
      Vector primitive = h;
      const Scalar scale = p_power(f, -shift);
      for (auto& x : primitive) x *= scale;
      picked.emplace_back(classes[k] - Scalar(shift), std::move(primitive));
    }
  }
  if (picked.size() != n) throw rank_error("adapted basis construction failed");
  std::sort(picked.begin(), picked.end());
  const Scalar lowest = picked.front().first;
  std::vector<Vector> cols;
  std::vector<Scalar> ws;
  for (auto& [w, c] : picked) {
    ws.push_back(w - lowest);
    cols.push_back(std::move(c));
  }
  return SplitNorm(f, Matrix::from_columns(cols, n), std::move(ws));
}

}  // namespace detail

/// Canonical form of the homothety class of n: the minimal finite weight is
/// 0, columns are primitive and sorted by (weight, entries), and the basis
/// is derived from the canonical Hermite forms of the norm's lattice chain.
inline HomothetyClass<SplitNorm> canonicalize(const SplitNorm& n) {
  std::vector<Scalar> classes;
  for (const auto& w : n.weights()) classes.push_back(detail::frac(w));
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  std::optional<SplitNorm> best;
  for (const auto& c : classes) {
    std::vector<Scalar> w = n.weights();
    for (auto& x : w) x -= c;
    SplitNorm cand = detail::adapted_representative(n.field(), n.basis(), w);
    if (!best || cand < *best) best = std::move(cand);
  }
  return {*std::move(best)};
}

inline Subspace kernel(const Seminorm& s) {
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < s.dim(); ++j)
    if (s.weights()[j].is_pos_inf()) cols.push_back(s.basis().column(j));
  return echelon_span(s.dim(), cols);
}

/// Kernel dimension d; s lies in the stratum S_d(E). Norms are S_0(E).
inline std::size_t stratum(const Seminorm& s) { return kernel(s).dim; }

namespace detail {

/// Coordinates of x on the complement of the kernel spanned by the standard
/// vectors at non-pivot rows, after projecting along the kernel.
inline Vector project_off_kernel(const Subspace& k, const Vector& x) {
  Vector y = x;
  for (std::size_t c = 0; c < k.dim; ++c) {
    const Scalar coeff = y[k.pivot_rows[c]];
    if (coeff.is_zero()) continue;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= coeff * k.basis(i, c);
  }
  Vector out;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (std::find(k.pivot_rows.begin(), k.pivot_rows.end(), i) == k.pivot_rows.end()) out.push_back(y[i]);
  return out;
}

inline Vector embed_from_complement(const Subspace& k, const Vector& z) {
  Vector x(k.ambient);
  std::size_t next = 0;
  for (std::size_t i = 0; i < k.ambient; ++i)
    if (std::find(k.pivot_rows.begin(), k.pivot_rows.end(), i) == k.pivot_rows.end()) x[i] = z[next++];
  return x;
}

}  // namespace detail

/// Canonical form of a seminorm class: canonical kernel columns (weight inf)
/// after the canonical form of the induced norm on the standard complement.
inline HomothetyClass<Seminorm> canonicalize(const Seminorm& s) {
  const Subspace k = kernel(s);
  const std::size_t rank = s.dim() - k.dim;
  std::vector<Vector> finite_cols;
  std::vector<Scalar> finite_weights;
  for (std::size_t j = 0; j < s.dim(); ++j) {
    if (!s.weights()[j].is_finite()) continue;
    finite_cols.push_back(detail::project_off_kernel(k, s.basis().column(j)));
    finite_weights.push_back(s.weights()[j].value());
  }
  const SplitNorm quotient(s.field(), Matrix::from_columns(finite_cols, rank), finite_weights);
  const SplitNorm canon = canonicalize(quotient).representative;
  std::vector<Vector> cols;
  std::vector<ExtRational> weights;
  for (std::size_t j = 0; j < rank; ++j) {
    cols.push_back(detail::embed_from_complement(k, canon.basis().column(j)));
    weights.emplace_back(canon.weights()[j]);
  }
  for (std::size_t c = 0; c < k.dim; ++c) {
    cols.push_back(k.basis.column(c));
    weights.push_back(ExtRational::pos_inf());
  }
  return {Seminorm(s.field(), Matrix::from_columns(cols, s.dim()), std::move(weights))};
}

inline bool is_homothetic(const Seminorm& a, const Seminorm& b) { return canonicalize(a) == canonicalize(b); }

/// Sup-norm distance from x to a subspace K of Q_p^n, as the exact value
/// p^{-v}. The quotient of the unit ball Z_p^n is a lattice on the complement.
inline Scalar distance_to_subspace(const FieldSpec& f, const Vector& x, const Subspace& k) {
  const std::size_t rank = k.ambient - k.dim;
  if (rank == 0) return 0;
  const Vector px = detail::project_off_kernel(k, x);
  if (std::all_of(px.begin(), px.end(), [](const Scalar& s) { return s.is_zero(); })) return 0;
  std::vector<Vector> gens;
  for (std::size_t i = 0; i < k.ambient; ++i) {
    Vector e(k.ambient);
    e[i] = 1;
    gens.push_back(detail::project_off_kernel(k, e));
  }
  const Matrix image = hermite_zp(f, Matrix::from_columns(gens, rank));
  const Vector c = inverse(image) * px;
  Valuation v = Valuation::infinity();
  for (const auto& s : c) v = std::min(v, val(f, s));
  return p_power(f, -v.value());
}

struct LipschitzProbe {
  bool pass = true;
  Scalar displacement;   // max over the sample of |d(x, ker s1) - d(x, ker s2)|
  Scalar seminorm_gap;   // max over the sample of |s1(x) - s2(x)|
};

/// Sampled check that the kernel map is C-Lipschitz between s1 and s2:
/// displacement <= C * seminorm_gap. Requires integer weights so that all
/// values are rational.
inline LipschitzProbe kernel_lipschitz_probe(const Seminorm& s1, const Seminorm& s2, const std::vector<Vector>& sample,
                                             const Scalar& lipschitz) {
  if (s1.dim() != s2.dim()) throw dimension_error("seminorms on spaces of different dimension");
  if (stratum(s1) != stratum(s2)) throw validation_error("seminorms lie in different strata");
  for (const auto* s : {&s1, &s2})
    for (const auto& w : s->weights())
      if (w.is_finite() && !w.value().is_integer())
        throw domain_error("kernel_lipschitz_probe requires integer weights");
  LipschitzProbe out;
  const Subspace k1 = kernel(s1);
  const Subspace k2 = kernel(s2);
  const FieldSpec& f = s1.field();
  auto value = [&](const Seminorm& s, const Vector& x) {
    const ExtRational e = evaluate(s, x);
    return e.is_pos_inf() ? Scalar(0) : p_power(f, -e.value().floor());
  };
  for (const auto& x : sample) {
    const Scalar gap = value(s1, x) - value(s2, x);
    out.seminorm_gap = max(out.seminorm_gap, gap.sign() < 0 ? -gap : gap);
    const Scalar disp = distance_to_subspace(f, x, k1) - distance_to_subspace(f, x, k2);
    out.displacement = max(out.displacement, disp.sign() < 0 ? -disp : disp);
  }
  out.pass = out.displacement <= lipschitz * out.seminorm_gap;
  return out;
}

}  // namespace nonarch
