#pragma once

// Finite-support measures on exact metric spaces: Prokhorov and Wasserstein
// distances, pushforward and product, atomic decomposition, disintegration
// over finite fibrations and word searches for measure stabilizers.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "nonarch/boundedness.hpp"
#include "nonarch/flow.hpp"
#include "nonarch/padic.hpp"
#include "nonarch/spaces.hpp"
#include "nonarch/words.hpp"

namespace nonarch {

template <MetricSpace S>
class FiniteMeasure {
 public:
  using Point = typename S::Point;

  explicit FiniteMeasure(S space) : space_(std::move(space)) {}
  FiniteMeasure(S space, const std::vector<std::pair<Point, Scalar>>& atoms) : space_(std::move(space)) {
    for (const auto& [pt, mass] : atoms) {
      if (mass.sign() <= 0) throw validation_error("atom masses must be positive");
      if (!atoms_.emplace(canonical_point(space_, pt), mass).second) throw validation_error("duplicate atom point");
    }
  }

  static FiniteMeasure dirac(S space, const Point& x) { return FiniteMeasure(std::move(space), {{x, Scalar(1)}}); }
  static FiniteMeasure uniform(S space, const std::vector<Point>& pts) {
    std::vector<std::pair<Point, Scalar>> atoms;
    for (const auto& x : pts) atoms.emplace_back(x, Scalar(1, static_cast<long>(pts.size())));
    return FiniteMeasure(std::move(space), atoms);
  }

  const S& space() const { return space_; }
  const std::map<Point, Scalar>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  Scalar total() const {
    Scalar t;
    for (const auto& [pt, m] : atoms_) t += m;
    return t;
  }
  bool is_probability() const { return total() == Scalar(1); }

  Scalar mass(const Point& x) const {
    auto it = atoms_.find(x);
    return it == atoms_.end() ? Scalar(0) : it->second;
  }
  template <class Pred>
  Scalar mass_of(Pred&& in_set) const {
    Scalar t;
    for (const auto& [pt, m] : atoms_)
      if (in_set(pt)) t += m;
    return t;
  }

  std::vector<Point> support() const {
    std::vector<Point> out;
    for (const auto& [pt, m] : atoms_) out.push_back(pt);
    return out;
  }

  /// Adds mass at x, merging with an existing atom.
  void add(const Point& x, const Scalar& m) {
    if (m.is_zero()) return;
    if (m.sign() < 0) throw validation_error("atom masses must be positive");
    atoms_[canonical_point(space_, x)] += m;
  }

  template <class Pred>
  FiniteMeasure restricted(Pred&& keep) const {
    FiniteMeasure out(space_);
    for (const auto& [pt, m] : atoms_)
      if (keep(pt)) out.atoms_.emplace(pt, m);
    return out;
  }

  FiniteMeasure scaled(const Scalar& c) const {
    if (c.sign() <= 0) throw validation_error("scale factor must be positive");
    FiniteMeasure out(space_);
    for (const auto& [pt, m] : atoms_) out.atoms_.emplace(pt, m * c);
    return out;
  }

  FiniteMeasure normalized() const {
    if (empty()) throw domain_error("cannot normalize the zero measure");
    return scaled(total().inv());
  }

  friend FiniteMeasure operator+(FiniteMeasure a, const FiniteMeasure& b) {
    if (!(a.space_ == b.space_)) throw validation_error("measures live on different spaces");
    for (const auto& [pt, m] : b.atoms_) a.atoms_[pt] += m;
    return a;
  }

  friend bool operator==(const FiniteMeasure& a, const FiniteMeasure& b) {
    return a.space_ == b.space_ && a.atoms_ == b.atoms_;
  }

 private:
  S space_;
  std::map<Point, Scalar> atoms_;
};

namespace detail {
template <class S>
void check_same_space(const FiniteMeasure<S>& mu, const FiniteMeasure<S>& nu) {
  if (!(mu.space() == nu.space())) throw validation_error("measures live on different spaces");
}
}  // namespace detail

/// Image measure f_* mu on the target space; colliding images add up.
template <MetricSpace S, MetricSpace T, class F>
FiniteMeasure<T> pushforward(const FiniteMeasure<S>& mu, const T& target, F&& f) {
  FiniteMeasure<T> out(target);
  for (const auto& [pt, m] : mu.atoms()) out.add(f(pt), m);
  return out;
}

template <MetricSpace S, class F>
FiniteMeasure<S> pushforward(const FiniteMeasure<S>& mu, F&& f) {
  return pushforward(mu, mu.space(), std::forward<F>(f));
}

template <MetricSpace A, MetricSpace B>
FiniteMeasure<ProductSpace<A, B>> product(const FiniteMeasure<A>& mu, const FiniteMeasure<B>& nu) {
  FiniteMeasure<ProductSpace<A, B>> out(ProductSpace<A, B>(mu.space(), nu.space()));
  for (const auto& [x, a] : mu.atoms())
    for (const auto& [y, b] : nu.atoms()) out.add({x, y}, a * b);
  return out;
}

/// g_* mu for the action of g on the space.
template <GroupSpace S>
FiniteMeasure<S> apply_group(const FiniteMeasure<S>& mu, const Matrix& g) {
  return pushforward(mu, [&](const typename S::Point& x) { return mu.space().act(g, x); });
}

namespace detail {

template <class S>
struct Bipartite {
  std::vector<typename S::Point> left, right;
  std::vector<Scalar> left_mass, right_mass;
  std::vector<std::vector<Scalar>> dist;

  Bipartite(const FiniteMeasure<S>& mu, const FiniteMeasure<S>& nu) {
    for (const auto& [x, m] : mu.atoms()) {
      left.push_back(x);
      left_mass.push_back(m);
    }
    for (const auto& [y, m] : nu.atoms()) {
      right.push_back(y);
      right_mass.push_back(m);
    }
    for (const auto& x : left) {
      dist.emplace_back();
      for (const auto& y : right) dist.back().push_back(mu.space().distance(x, y));
    }
  }

  /// Max flow from left masses to right masses along pairs at distance <= r.
  Scalar matched_mass(const Scalar& r) const {
    const std::size_t a = left.size(), b = right.size();
    FlowNetwork net(a + b + 2);
    const std::size_t s = a + b, t = a + b + 1;
    Scalar big = Scalar(1);
    for (const auto& m : left_mass) big += m;
    for (std::size_t i = 0; i < a; ++i) net.add_edge(s, i, left_mass[i]);
    for (std::size_t j = 0; j < b; ++j) net.add_edge(a + j, t, right_mass[j]);
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j < b; ++j)
        if (dist[i][j] <= r) net.add_edge(i, a + j, big);
    return net.max_flow(s, t);
  }

  std::vector<Scalar> distance_levels() const {
    std::vector<Scalar> out{Scalar(0)};
    for (const auto& row : dist) out.insert(out.end(), row.begin(), row.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

}  // namespace detail

/// Exact Prokhorov distance inf{eps : mu(A) <= nu(A^eps) + eps and
/// nu(A) <= mu(A^eps) + eps for all A}, with closed neighbourhoods.
/// Between consecutive distance levels d_j the worst defect
/// max(|mu|, |nu|) - flow(d_j) is constant, so the infimum is
/// min_j max(d_j, defect_j).
template <MetricSpace S>
Scalar prokhorov(const FiniteMeasure<S>& mu, const FiniteMeasure<S>& nu) {
  detail::check_same_space(mu, nu);
  const detail::Bipartite<S> bp(mu, nu);
  const Scalar heavier = max(mu.total(), nu.total());
  std::optional<Scalar> best;
  for (const auto& d : bp.distance_levels()) {
    if (best && *best <= d) break;
    const Scalar defect = heavier - bp.matched_mass(d);
    const Scalar cand = max(d, defect);
    if (!best || cand < *best) best = cand;
  }
  return *best;
}

inline constexpr std::size_t kOracleMaxSupport = 12;

/// Prokhorov distance straight from the definition: every subset of each
/// support is tested against every candidate threshold.
template <MetricSpace S>
Scalar prokhorov_oracle(const FiniteMeasure<S>& mu, const FiniteMeasure<S>& nu) {
  detail::check_same_space(mu, nu);
  if (mu.size() > kOracleMaxSupport || nu.size() > kOracleMaxSupport)
    throw validation_error("subset oracle supports at most 12 atoms per measure");
  const detail::Bipartite<S> bp(mu, nu);
  const std::size_t a = bp.left.size(), b = bp.right.size();
  // Mass of the closed r-neighbourhood of a subset, from either side.
  auto left_excess = [&](unsigned mask, const Scalar& r) {
    Scalar inside, reach;
    for (std::size_t i = 0; i < a; ++i)
      if (mask & (1U << i)) inside += bp.left_mass[i];
    for (std::size_t j = 0; j < b; ++j) {
      for (std::size_t i = 0; i < a; ++i) {
        if ((mask & (1U << i)) && bp.dist[i][j] <= r) {
          reach += bp.right_mass[j];
          break;
        }
      }
    }
    return inside - reach;
  };
  auto right_excess = [&](unsigned mask, const Scalar& r) {
    Scalar inside, reach;
    for (std::size_t j = 0; j < b; ++j)
      if (mask & (1U << j)) inside += bp.right_mass[j];
    for (std::size_t i = 0; i < a; ++i) {
      for (std::size_t j = 0; j < b; ++j) {
        if ((mask & (1U << j)) && bp.dist[i][j] <= r) {
          reach += bp.left_mass[i];
          break;
        }
      }
    }
    return inside - reach;
  };
  auto feasible = [&](const Scalar& eps) {
    for (unsigned m = 0; m < (1U << a); ++m)
      if (eps < left_excess(m, eps)) return false;
    for (unsigned m = 0; m < (1U << b); ++m)
      if (eps < right_excess(m, eps)) return false;
    return true;
  };
  const std::vector<Scalar> levels = bp.distance_levels();
  std::vector<Scalar> cands = levels;
  for (const auto& r : levels) {
    for (unsigned m = 0; m < (1U << a); ++m) cands.push_back(left_excess(m, r));
    for (unsigned m = 0; m < (1U << b); ++m) cands.push_back(right_excess(m, r));
  }
  cands.push_back(max(mu.total(), nu.total()));
  std::erase_if(cands, [](const Scalar& c) { return c.sign() < 0; });
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  std::size_t lo = 0, hi = cands.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(cands[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return cands[lo];
}

/// Exact optimal-transport cost with ground metric min(d, 1).
template <MetricSpace S>
Scalar wasserstein(const FiniteMeasure<S>& mu, const FiniteMeasure<S>& nu) {
  detail::check_same_space(mu, nu);
  if (mu.total() != nu.total()) throw validation_error("wasserstein requires equal total masses");
  const detail::Bipartite<S> bp(mu, nu);
  const std::size_t a = bp.left.size(), b = bp.right.size();
  FlowNetwork net(a + b + 2);
  const std::size_t s = a + b, t = a + b + 1;
  for (std::size_t i = 0; i < a; ++i) net.add_edge(s, i, bp.left_mass[i]);
  for (std::size_t j = 0; j < b; ++j) net.add_edge(a + j, t, bp.right_mass[j]);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) net.add_edge(i, a + j, mu.total(), min(bp.dist[i][j], Scalar(1)));
  return net.min_cost_flow(s, t, mu.total()).second;
}

/// min over the family of mu(K); 1 for an empty family.
template <MetricSpace S>
Scalar tightness_check(const std::vector<FiniteMeasure<S>>& family, const std::set<typename S::Point>& k) {
  Scalar worst(1);
  for (const auto& mu : family) worst = min(worst, mu.mass_of([&](const auto& x) { return k.count(x) > 0; }));
  return worst;
}

template <MetricSpace S, class U>
struct AtomicDecomposition {
  struct Level {
    Scalar lambda;
    std::set<U> fiber_points;  // F_lambda = {u : nu({u}) = lambda}
    FiniteMeasure<S> measure;  // mu restricted to pi^{-1}(F_lambda)
  };

  FiniteMeasure<DiscreteSpace<U>> base;  // nu = pi_* mu
  std::vector<Level> levels;             // lambda decreasing
  FiniteMeasure<S> continuous_part;      // zero for finite supports

  FiniteMeasure<S> recombined() const {
    FiniteMeasure<S> out = continuous_part;
    for (const auto& l : levels) out = out + l.measure;
    return out;
  }
};

template <MetricSpace S, class F>
auto decompose_atoms(const FiniteMeasure<S>& mu, F&& pi) {
  using U = std::decay_t<decltype(pi(std::declval<typename S::Point>()))>;
  AtomicDecomposition<S, U> out{pushforward(mu, DiscreteSpace<U>{}, pi), {}, FiniteMeasure<S>(mu.space())};
  std::map<Scalar, std::set<U>, std::greater<>> by_mass;
  for (const auto& [u, m] : out.base.atoms()) by_mass[m].insert(u);
  for (auto& [lambda, fiber] : by_mass) {
    auto restricted = mu.restricted([&](const auto& x) { return fiber.count(pi(x)) > 0; });
    out.levels.push_back({lambda, fiber, std::move(restricted)});
  }
  return out;
}

/// Finite fibration p : V -> U given by a table.
template <class P, class U>
struct Fibration {
  std::vector<P> total;
  std::vector<U> base;
  std::map<P, U> map;

  Fibration(std::vector<P> v, std::vector<U> u, std::map<P, U> table)
      : total(std::move(v)), base(std::move(u)), map(std::move(table)) {
    std::set<U> hit;
    for (const auto& x : total) {
      auto it = map.find(x);
      if (it == map.end()) throw validation_error("fibration map is not total");
      hit.insert(it->second);
    }
    const std::set<U> listed(base.begin(), base.end());
    if (hit != listed) throw validation_error("fibration map is not onto the listed base");
  }

  const U& operator()(const P& x) const {
    auto it = map.find(x);
    if (it == map.end()) throw validation_error("point outside the fibration");
    return it->second;
  }
};

template <MetricSpace S, class U>
struct Disintegration {
  FiniteMeasure<DiscreteSpace<U>> base;  // nu = p_* mu
  std::map<U, FiniteMeasure<S>> fibers;  // mu_u for nu(u) > 0, normalized

  FiniteMeasure<S> reconstructed(const S& space) const {
    FiniteMeasure<S> out(space);
    for (const auto& [u, m] : fibers) out = out + m.scaled(base.mass(u));
    return out;
  }
};

template <MetricSpace S, class U>
Disintegration<S, U> disintegrate(const FiniteMeasure<S>& mu, const Fibration<typename S::Point, U>& fib) {
  Disintegration<S, U> out{pushforward(mu, DiscreteSpace<U>{}, fib), {}};
  for (const auto& [u, m] : out.base.atoms()) {
    auto piece = mu.restricted([&](const auto& x) { return fib(x) == u; });
    out.fibers.emplace(u, piece.normalized());
  }
  return out;
}

/// Words of length <= word_len (empty word included) fixing mu.
template <GroupSpace S>
std::vector<Word> stab_search(const FiniteMeasure<S>& mu, const MatGroup& g, std::size_t word_len) {
  if (word_len < 1) throw validation_error("word_len must be at least 1");
  std::vector<Word> out;
  for (const auto& w : enumerate_words(g.size(), word_len, true))
    if (apply_group(mu, g.evaluate(w)) == mu) out.push_back(w);
  return out;
}

inline std::vector<Word> intersect_words(const std::vector<Word>& a, const std::vector<Word>& b) {
  const std::set<Word> sb(b.begin(), b.end());
  std::vector<Word> out;
  for (const auto& w : a)
    if (sb.count(w) > 0) out.push_back(w);
  return out;
}

template <class U>
struct FamilyStabilizer {
  std::vector<Word> family;        // words fixing every mu_u at once
  std::vector<Word> intersection;  // intersection of per-fiber stabilizers
  bool agree = false;
};

/// Stabilizer of a measure family u -> mu_u, computed on the labelled space
/// U x V and compared against the intersection of fiberwise stabilizers.
template <GroupSpace S, class U>
FamilyStabilizer<U> family_stab_search(const std::map<U, FiniteMeasure<S>>& family, const S& space,
                                       const MatGroup& g, std::size_t word_len) {
  using L = LabelledSpace<S, U>;
  FiniteMeasure<L> joint{L(space)};
  for (const auto& [u, m] : family)
    for (const auto& [x, mass] : m.atoms()) joint.add({u, x}, mass);
  FamilyStabilizer<U> out;
  out.family = stab_search(joint, g, word_len);
  out.intersection = enumerate_words(g.size(), word_len, true);
  for (const auto& [u, m] : family) out.intersection = intersect_words(out.intersection, stab_search(m, g, word_len));
  out.agree = out.family == out.intersection;
  return out;
}

}  // namespace nonarch
