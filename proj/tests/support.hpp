#pragma once

// Random instance generators and brute-force oracles shared by the tests.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "nonarch/nonarch.hpp"

namespace nonarch::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  long uniform(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin(int one_in = 2) { return uniform(0, one_in - 1) == 0; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<long>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 gen_;
};

/// u * p^v with u in {1..p-1} and v in [vlo, vhi], or 0 with probability 1/zero_one_in.
inline Scalar random_entry(Rng& rng, const FieldSpec& f, long vlo, long vhi, int zero_one_in = 4) {
  if (zero_one_in > 0 && rng.coin(zero_one_in)) return 0;
  const long u = rng.uniform(1, std::max(1L, f.p() - 1));
  const Scalar s = rng.coin() ? Scalar(u) : Scalar(-u);
  return s * p_power(f, rng.uniform(vlo, vhi));
}

/// Random element of Q_p with a unit part that is not a small digit.
inline Scalar random_scalar(Rng& rng, const FieldSpec& f, long vlo, long vhi) {
  if (rng.coin(5)) return 0;
  Scalar u(rng.uniform(1, 40), rng.uniform(1, 7));
  while (val(f, u).value() != 0) u = Scalar(rng.uniform(1, 40), rng.uniform(1, 7));
  return (rng.coin() ? u : -u) * p_power(f, rng.uniform(vlo, vhi));
}

inline Matrix random_invertible(Rng& rng, const FieldSpec& f, std::size_t n, long vlo, long vhi, bool digit_entries) {
  while (true) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m(i, j) = digit_entries ? random_entry(rng, f, vlo, vhi) : random_scalar(rng, f, vlo, vhi);
    if (!det(m).is_zero()) return m;
  }
}

/// Random element of GL_n(Z_p) with integer entries.
inline Matrix random_gl_zp(Rng& rng, const FieldSpec& f, std::size_t n) {
  while (true) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform(-2 * f.p(), 2 * f.p());
    if (in_gl_zp(f, m)) return m;
  }
}

/// Random split norm with weights on the 1/e grid.
inline SplitNorm random_norm(Rng& rng, const FieldSpec& f, std::size_t n, long e) {
  std::vector<Scalar> w;
  for (std::size_t i = 0; i < n; ++i) w.emplace_back(rng.uniform(-3 * e, 3 * e), e);
  return SplitNorm(f, random_invertible(rng, f, n, -2, 2, false), std::move(w));
}

/// Lattice norm with generator entries 0 or +-u p^v, u in {1..p-1}, v in [-2, 2].
inline SplitNorm random_lattice_norm(Rng& rng, const FieldSpec& f, std::size_t n) {
  return lattice_norm(Lattice(f, random_invertible(rng, f, n, -2, 2, true)));
}

/// Test vectors for the sup-ratio oracle: coordinates 0 or u p^v with v in
/// [-vmax, vmax] and u a unit residue modulo p^depth (with both signs).
inline std::vector<Vector> oracle_vectors(const FieldSpec& f, std::size_t n, long vmax, long depth) {
  std::vector<Scalar> coords{Scalar(0)};
  const long modulus = p_power(f, depth).num().get_si();
  for (long v = -vmax; v <= vmax; ++v) {
    for (long u = 1; u < modulus; ++u) {
      if (u % f.p() == 0) continue;
      coords.push_back(Scalar(u) * p_power(f, v));
      coords.push_back(Scalar(-u) * p_power(f, v));
    }
  }
  std::vector<Vector> out{Vector()};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vector> next;
    for (const auto& prefix : out) {
      for (const auto& c : coords) {
        Vector e = prefix;
        e.push_back(c);
        next.push_back(std::move(e));
      }
    }
    out = std::move(next);
  }
  std::erase_if(out, [](const Vector& v) { return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); }); });
  return out;
}

/// log_p sup n1(x)/n2(x) by direct evaluation over the vector set.
inline Scalar sup_ratio_oracle(const SplitNorm& n1, const SplitNorm& n2, const std::vector<Vector>& xs) {
  std::optional<Scalar> best;
  for (const auto& x : xs) {
    const Scalar r = evaluate(n2, x).value() - evaluate(n1, x).value();
    if (!best || *best < r) best = r;
  }
  return *best;
}

inline std::vector<ProjPoint> projline_pool(const FieldSpec& f) {
  const Scalar p(f.p());
  const std::set<ProjPoint> pts{ProjPoint::finite(0),       ProjPoint::finite(1),          ProjPoint::infinity(),
          ProjPoint::finite(-1),      ProjPoint::finite(2),          ProjPoint::finite(Scalar(1, 2)),
          ProjPoint::finite(p),       ProjPoint::finite(p.inv()),    ProjPoint::finite(p * p),
          ProjPoint::finite(1 + p),   ProjPoint::finite(Scalar(3, 7)), ProjPoint::finite(-p.inv() * p.inv()),
          ProjPoint::finite(5),       ProjPoint::finite(Scalar(1) + p * p)};
  return {pts.begin(), pts.end()};
}

inline std::vector<Vector> qpvec_pool(Rng& rng, const FieldSpec& f, std::size_t n, std::size_t count) {
  std::set<Vector> pts;
  while (pts.size() < count) {
    Vector v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(random_entry(rng, f, -2, 2, 3));
    pts.insert(v);
  }
  return {pts.begin(), pts.end()};
}

/// Random measure on k distinct points of the pool with small integer weights.
template <MetricSpace S>
FiniteMeasure<S> random_measure(Rng& rng, const S& space, const std::vector<typename S::Point>& pool, std::size_t k,
                                long max_weight = 3) {
  std::vector<typename S::Point> pts = pool;
  std::vector<typename S::Point> chosen;
  while (chosen.size() < k && !pts.empty()) {
    const std::size_t i = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(pts.size()) - 1));
    chosen.push_back(pts[i]);
    pts.erase(pts.begin() + static_cast<long>(i));
  }
  std::vector<long> w;
  long total = 0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    w.push_back(rng.uniform(1, max_weight));
    total += w.back();
  }
  std::vector<std::pair<typename S::Point, Scalar>> atoms;
  for (std::size_t i = 0; i < chosen.size(); ++i) atoms.emplace_back(chosen[i], Scalar(w[i], total));
  return FiniteMeasure<S>(space, atoms);
}

/// Random finite metric: shortest-path closure of random positive weights.
inline FinitePointSpace random_finite_space(Rng& rng, std::size_t m) {
  std::vector<std::vector<Scalar>> t(m, std::vector<Scalar>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) t[i][j] = t[j][i] = Scalar(rng.uniform(1, 6), rng.uniform(1, 4));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (t[i][k] + t[k][j] < t[i][j]) t[i][j] = t[i][k] + t[k][j];
  return FinitePointSpace(std::move(t));
}

inline std::vector<std::size_t> index_pool(std::size_t m) {
  std::vector<std::size_t> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = i;
  return out;
}

/// w^k or w^-k (whichever is larger) exceeds w^{+-1} by a factor >= p in
/// max entry size.
inline bool powers_grow(const FieldSpec& f, const Matrix& w, long k) {
  auto size = [&](const Matrix& m) { return entry_exponent(f, m).value(); };
  const Scalar base = max(size(w), size(inverse(w)));
  const Scalar high = max(size(mat_pow(w, k)), size(mat_pow(w, -k)));
  return base + Scalar(1) <= high;
}

}  // namespace nonarch::testing
