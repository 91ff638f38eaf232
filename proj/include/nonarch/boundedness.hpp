#pragma once

// Boundedness of finitely generated subgroups of GL_n(Q_p): invariant
// lattices, Newton-polygon witnesses of unboundedness, bi-invariant metrics
// and entry/determinant bounds over word balls.

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nonarch/linalg.hpp"
#include "nonarch/normspace.hpp"
#include "nonarch/padic.hpp"
#include "nonarch/words.hpp"

namespace nonarch {

inline constexpr long kDefaultMaxIter = 64;
inline constexpr std::size_t kDefaultMaxWordLen = 4;
inline constexpr std::size_t kMaxGenerators = 4;  // enforced on external input

class MatGroup {
 public:
  MatGroup(FieldSpec f, std::vector<Matrix> generators) : field_(f), gens_(std::move(generators)) {
    if (gens_.empty()) throw validation_error("a group needs at least one generator");
    n_ = gens_.front().rows();
    check_dim(n_);
    for (const auto& g : gens_) {
      if (!g.is_square() || g.rows() != n_) throw dimension_error("generators must be square of equal size");
      if (det(g).is_zero()) throw validation_error("generators must be invertible");
      invs_.push_back(inverse(g));
    }
  }

  const FieldSpec& field() const { return field_; }
  std::size_t dim() const { return n_; }
  std::size_t size() const { return gens_.size(); }
  const std::vector<Matrix>& generators() const { return gens_; }
  const std::vector<Matrix>& inverses() const { return invs_; }

  const Matrix& letter(int l) const {
    const std::size_t k = static_cast<std::size_t>(std::abs(l));
    if (l == 0 || k > gens_.size()) throw validation_error("letter out of range: " + std::to_string(l));
    return l > 0 ? gens_[k - 1] : invs_[k - 1];
  }

  /// The product of the letters, left to right.
  Matrix evaluate(const Word& w) const {
    Matrix m = Matrix::identity(n_);
    for (int l : w) m = m * letter(l);
    return m;
  }

  MatGroup conjugated(const Matrix& h) const {
    const Matrix hi = inverse(h);
    std::vector<Matrix> out;
    for (const auto& g : gens_) out.push_back(h * g * hi);
    return MatGroup(field_, std::move(out));
  }

 private:
  FieldSpec field_;
  std::size_t n_ = 0;
  std::vector<Matrix> gens_;
  std::vector<Matrix> invs_;
};

enum class UnboundedReason { NewtonSlope, EntryBlowup };

inline std::string to_string(UnboundedReason r) {
  return r == UnboundedReason::NewtonSlope ? "newton-slope" : "entry-blowup";
}

struct Bounded {
  Lattice invariant_lattice;
  SplitNorm invariant_norm;
  long iterations = 0;
};

struct Unbounded {
  Word witness_word;
  UnboundedReason reason = UnboundedReason::NewtonSlope;
  Scalar slope;  // root valuation of the witness eigenvalue
  long iterations = 0;
};

struct Inconclusive {
  long iterations = 0;
};

using BoundednessCert = std::variant<Bounded, Unbounded, Inconclusive>;

inline std::string verdict_name(const BoundednessCert& c) {
  if (std::holds_alternative<Bounded>(c)) return "bounded";
  if (std::holds_alternative<Unbounded>(c)) return "unbounded";
  return "inconclusive";
}

struct NewtonSegment {
  Scalar root_valuation;  // negative of the hull slope
  long length = 0;        // number of roots with this valuation
};

/// Lower convex hull of (i, val(c_i)) for coefficients in ascending degree.
/// Segments run left to right; zero coefficients are skipped.
inline std::vector<NewtonSegment> newton_polygon(const FieldSpec& f, const std::vector<Scalar>& coeffs) {
  std::vector<std::pair<long, long>> pts;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Valuation v = val(f, coeffs[i]);
    if (!v.is_infinite()) pts.emplace_back(static_cast<long>(i), v.value());
  }
  std::vector<std::pair<long, long>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // drop b when it lies on or above the segment a -> pt
      const long cross = (b.first - a.first) * (pt.second - a.second) - (b.second - a.second) * (pt.first - a.first);
      if (cross <= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(pt);
  }
  std::vector<NewtonSegment> out;
  for (std::size_t k = 1; k < hull.size(); ++k) {
    const long dx = hull[k].first - hull[k - 1].first;
    const long dy = hull[k].second - hull[k - 1].second;
    out.push_back({Scalar(-dy, dx), dx});
  }
  return out;
}

struct NewtonWitness {
  Word word;
  Scalar slope;
};

/// First word (shortlex) whose characteristic polynomial has a root of
/// non-zero valuation, with the valuation of the first such root class.
inline std::optional<NewtonWitness> newton_witness(const MatGroup& g, std::size_t max_word_len = kDefaultMaxWordLen) {
  if (max_word_len < 1) throw validation_error("max_word_len must be at least 1");
  for (const auto& w : enumerate_words(g.size(), max_word_len, false)) {
    for (const auto& seg : newton_polygon(g.field(), char_poly(g.evaluate(w)))) {
      if (!seg.root_valuation.is_zero()) return NewtonWitness{w, seg.root_valuation};
    }
  }
  return std::nullopt;
}

/// Largest valuation gap between the non-zero entries of the generators.
inline long generator_spread(const MatGroup& g) {
  long spread = 0;
  for (const auto& m : g.generators()) {
    std::optional<long> lo, hi;
    for (const auto& x : m.entries()) {
      const Valuation v = val(g.field(), x);
      if (v.is_infinite()) continue;
      lo = lo ? std::min(*lo, v.value()) : v.value();
      hi = hi ? std::max(*hi, v.value()) : v.value();
    }
    if (lo) spread = std::max(spread, *hi - *lo);
  }
  return spread;
}

namespace detail {
inline constexpr std::size_t kBlowupWordLen = 6;
}

/// Iterates L_{k+1} = L_k + sum_i (g_i L_k + g_i^{-1} L_k) from the start
/// lattice (default Z_p^n). A fixed point is an invariant lattice. Entry
/// blow-up past the threshold is only reported once a word with an eigenvalue
/// of non-unit size confirms it; otherwise the verdict is Inconclusive.
inline BoundednessCert lattice_closure(const MatGroup& g, long max_iter = kDefaultMaxIter,
                                       std::optional<Lattice> start = std::nullopt) {
  if (max_iter < 1) throw validation_error("max_iter must be at least 1");
  Lattice l = start ? *start : Lattice::standard(g.field(), g.dim());
  if (l.dim() != g.dim()) throw dimension_error("start lattice dimension mismatch");
  const long threshold = -max_iter * std::max(1L, generator_spread(g));
  bool blowup_checked = false;
  for (long k = 0; k < max_iter; ++k) {
    Lattice next = l;
    for (std::size_t i = 0; i < g.size(); ++i) {
      next = next.sum(l.image(g.generators()[i]));
      next = next.sum(l.image(g.inverses()[i]));
    }
    if (next == l) return Bounded{l, lattice_norm(l), k};
    l = std::move(next);
    if (!blowup_checked && min_entry_valuation(g.field(), l.basis()).value() < threshold) {
      blowup_checked = true;
      if (auto w = newton_witness(g, detail::kBlowupWordLen)) {
        return Unbounded{w->word, UnboundedReason::EntryBlowup, w->slope, k + 1};
      }
    }
  }
  return Inconclusive{max_iter};
}

/// Newton witness first, then the lattice closure.
inline BoundednessCert certify(const MatGroup& g, long max_iter = kDefaultMaxIter,
                               std::size_t max_word_len = kDefaultMaxWordLen) {
  if (auto w = newton_witness(g, max_word_len)) return Unbounded{w->word, UnboundedReason::NewtonSlope, w->slope, 0};
  return lattice_closure(g, max_iter);
}

/// Lattice norm whose unit ball is the Z_p-span of the spanning set s.
inline SplitNorm invariant_norm_from_bounded_set(const FieldSpec& f, std::size_t n, const std::vector<Vector>& s) {
  check_dim(n);
  if (s.empty()) throw rank_error("empty set does not span");
  for (const auto& v : s)
    if (v.size() != n) throw dimension_error("vector dimension mismatch");
  return lattice_norm(Lattice(f, Matrix::from_columns(s, n)));
}

/// True when every generator and inverse maps the lattice into itself.
inline bool preserves_lattice(const MatGroup& g, const Lattice& l) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!l.contains(l.image(g.generators()[i])) || !l.contains(l.image(g.inverses()[i]))) return false;
  }
  return true;
}

/// log_p of the operator norm of a - b for the lattice norm of l:
/// -min val(L^{-1} (a - b) L); -inf when a = b.
inline ExtRational operator_norm_exponent(const Lattice& l, const Matrix& a, const Matrix& b) {
  const Valuation v = min_entry_valuation(l.field(), inverse(l.basis()) * (a - b) * l.basis());
  if (v.is_infinite()) return ExtRational::neg_inf();
  return ExtRational(Scalar(-v.value()));
}

/// Bi-invariant distance exponent on a group certified Bounded.
inline ExtRational bi_invariant_metric(const BoundednessCert& cert, const Matrix& a, const Matrix& b) {
  const auto* bounded = std::get_if<Bounded>(&cert);
  if (bounded == nullptr) throw validation_error("bi_invariant_metric requires a Bounded certificate");
  return operator_norm_exponent(bounded->invariant_lattice, a, b);
}

inline ExtRational bi_invariant_metric(const MatGroup& g, const BoundednessCert& cert, const Word& a, const Word& b) {
  return bi_invariant_metric(cert, g.evaluate(a), g.evaluate(b));
}

/// log_p max |entry| over a matrix; -inf for the zero matrix.
inline ExtRational entry_exponent(const FieldSpec& f, const Matrix& m) {
  const Valuation v = min_entry_valuation(f, m);
  if (v.is_infinite()) return ExtRational::neg_inf();
  return ExtRational(Scalar(-v.value()));
}

/// Entry-size bound (log_p) for every element preserving the lattice:
/// g = B U B^{-1} with U integral.
inline long lattice_entry_bound_exponent(const Lattice& l) {
  return -min_entry_valuation(l.field(), l.basis()).value() -
         min_entry_valuation(l.field(), inverse(l.basis())).value();
}

struct EmbedBoundReport {
  bool bounded = true;
  ExtRational entry_bound = ExtRational::neg_inf();          // log_p max |m_ij|
  ExtRational det_inverse_bound = ExtRational::neg_inf();    // log_p max |det(m)^{-1}|
  ExtRational inverse_entry_bound = ExtRational::neg_inf();  // log_p max |(m^{-1})_ij|
  bool cross_check = true;
};

/// Boundedness of a finite set in GL_n through M -> (M, det(M)^{-1}),
/// together with the direct check on entries of S and S^{-1}.
inline EmbedBoundReport gl_embed_bounded_check(const FieldSpec& f, const std::vector<Matrix>& s) {
  EmbedBoundReport r;
  for (const auto& m : s) {
    const Scalar d = det(m);
    if (d.is_zero()) throw validation_error("gl_embed_bounded_check requires invertible matrices");
    r.entry_bound = std::max(r.entry_bound, entry_exponent(f, m));
    r.det_inverse_bound = std::max(r.det_inverse_bound, ExtRational(Scalar(val(f, d).value())));
    r.inverse_entry_bound = std::max(r.inverse_entry_bound, entry_exponent(f, inverse(m)));
  }
  const bool via_det = !r.entry_bound.is_pos_inf() && !r.det_inverse_bound.is_pos_inf();
  const bool via_inverse = !r.entry_bound.is_pos_inf() && !r.inverse_entry_bound.is_pos_inf();
  r.bounded = via_det;
  r.cross_check = via_det == via_inverse;
  return r;
}

/// Distinct group elements of word length <= radius, in breadth-first order.
inline std::vector<Matrix> word_ball(const MatGroup& g, std::size_t radius) {
  std::vector<Matrix> out{Matrix::identity(g.dim())};
  std::set<Matrix> seen{out.front()};
  std::vector<Matrix> frontier = out;
  for (std::size_t r = 1; r <= radius; ++r) {
    std::vector<Matrix> next;
    for (const auto& m : frontier) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        for (const auto* step : {&g.generators()[i], &g.inverses()[i]}) {
          Matrix e = m * *step;
          if (seen.insert(e).second) next.push_back(std::move(e));
        }
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

struct BallProfileRow {
  std::size_t radius = 0;
  ExtRational entry_bound;
  ExtRational det_inverse_bound;
};

struct BallProfile {
  std::vector<BallProfileRow> rows;
  bool growing = false;  // the last radius raised one of the bounds
};

inline BallProfile word_ball_profile(const MatGroup& g, std::size_t radius) {
  BallProfile prof;
  std::vector<Matrix> frontier{Matrix::identity(g.dim())};
  std::set<Matrix> seen{frontier.front()};
  BallProfileRow row{0, ExtRational(0), ExtRational(0)};
  prof.rows.push_back(row);
  for (std::size_t r = 1; r <= radius; ++r) {
    std::vector<Matrix> next;
    for (const auto& m : frontier) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        for (const auto* step : {&g.generators()[i], &g.inverses()[i]}) {
          Matrix e = m * *step;
          if (seen.insert(e).second) next.push_back(std::move(e));
        }
      }
    }
    const auto rep = gl_embed_bounded_check(g.field(), next);
    row.radius = r;
    row.entry_bound = std::max(row.entry_bound, rep.entry_bound);
    row.det_inverse_bound = std::max(row.det_inverse_bound, rep.det_inverse_bound);
    prof.rows.push_back(row);
    frontier = std::move(next);
  }
  if (prof.rows.size() >= 2) {
    const auto& a = prof.rows[prof.rows.size() - 2];
    const auto& b = prof.rows.back();
    prof.growing = a.entry_bound < b.entry_bound || a.det_inverse_bound < b.det_inverse_bound;
  }
  return prof;
}

/// True when h maps the lattice onto a homothetic lattice p^k L.
inline bool normalizes_lattice_class(const Lattice& l, const Matrix& h) {
  const Lattice image = l.image(h);
  const Matrix ratio = inverse(l.basis()) * image.basis();
  const Scalar d = det(ratio);
  if (d.is_zero()) return false;
  const long v = val(l.field(), d).value();
  if (v % static_cast<long>(l.dim()) != 0) return false;
  return image == l.scaled(v / static_cast<long>(l.dim()));
}

}  // namespace nonarch
