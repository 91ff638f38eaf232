#pragma once

// Named end-to-end experiments with exact assertions and JSON reports.

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nonarch/boundedness.hpp"
#include "nonarch/json_io.hpp"
#include "nonarch/measures.hpp"
#include "nonarch/spaces.hpp"

namespace nonarch {

struct Assertion {
  std::string description;
  std::string expected;
  std::string observed;
  bool pass = false;
};

struct ScenarioReport {
  explicit ScenarioReport(std::string n) : name(std::move(n)) {}

  std::string name;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<Assertion> assertions;
  nlohmann::json artifacts = nlohmann::json::object();

  bool pass() const {
    if (assertions.empty()) return false;
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }

  void expect(std::string description, std::string expected, std::string observed) {
    const bool ok = expected == observed;
    assertions.push_back({std::move(description), std::move(expected), std::move(observed), ok});
  }
  void expect(std::string description, const char* expected, const char* observed) {
    expect(std::move(description), std::string(expected), std::string(observed));
  }
  void expect(std::string description, bool expected, bool observed) {
    expect(std::move(description), std::string(expected ? "true" : "false"), std::string(observed ? "true" : "false"));
  }

  nlohmann::json to_json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& a : assertions)
      list.push_back({{"description", a.description}, {"expected", a.expected}, {"observed", a.observed}, {"pass", a.pass}});
    return {{"name", name}, {"parameters", parameters}, {"assertions", list}, {"artifacts", artifacts}, {"pass", pass()}};
  }
};

struct ScenarioOptions {
  long p = 3;
  long level = 2;             // zp_haar: residues modulo p^level
  long min_exponent = -2;     // zp_haar: translation exponent range
  long max_exponent = 3;
  std::size_t word_len = 3;   // pgl2_triple, unipotent_support
  std::size_t sample_size = 12;  // torus_orbits
  long n_max = 6;             // prob_convergence
  std::uint64_t seed = 0;
};

namespace detail {

inline std::string words_str(const std::vector<Word>& ws) {
  std::string s;
  for (const auto& w : ws) s += (s.empty() ? "" : ", ") + word_str(w);
  return "{" + s + "}";
}

/// Primitive integral representative of the projective class of m, with the
/// first non-zero entry a power of p.
inline Matrix primitive_lift(const FieldSpec& f, const Matrix& m) {
  Scalar lead;
  for (const auto& x : m.entries()) {
    if (!x.is_zero()) {
      lead = unit_part(f, x);
      break;
    }
  }
  Matrix out = lead.inv() * m;
  const long v = min_entry_valuation(f, out).value();
  return p_power(f, -v) * out;
}

}  // namespace detail

/// Haar measure on Z_p at level k: uniform on residues 0..p^k-1 in
/// Q_p / p^k Z_p. Translation by t preserves it iff val(t) >= 0.
inline ScenarioReport scenario_zp_haar(const ScenarioOptions& opt) {
  const FieldSpec f(opt.p);
  if (opt.level < 1) throw validation_error("level must be at least 1");
  ScenarioReport r("zp_haar");
  r.parameters = {{"p", opt.p}, {"level", opt.level}, {"min_exponent", opt.min_exponent}, {"max_exponent", opt.max_exponent}};
  const QpVecSpace line(f, 1);
  const long count = p_power(f, opt.level).num().get_si();
  std::vector<Vector> residues;
  for (long m = 0; m < count; ++m) residues.push_back({Scalar(m)});
  const auto haar = FiniteMeasure<QpVecSpace>::uniform(line, residues);
  auto translate = [&](const Scalar& t) {
    return pushforward(haar, [&](const Vector& x) { return Vector{residue_rep(f, x[0] + t, opt.level)}; });
  };

  std::vector<Scalar> grid{Scalar(0)};
  std::vector<long> units;
  for (long u = 1; u < opt.p; ++u) units.push_back(u);
  units.push_back(opt.p + 1);  // a unit off the digit range
  for (long j = opt.min_exponent; j <= opt.max_exponent; ++j)
    for (long u : units) grid.push_back(Scalar(u) * p_power(f, j));

  nlohmann::json table = nlohmann::json::array();
  std::size_t agree = 0;
  for (const auto& t : grid) {
    const Valuation v = val(f, t);
    const bool expected = v.is_infinite() || v.value() >= 0;
    const bool observed = translate(t) == haar;
    agree += expected == observed ? 1 : 0;
    table.push_back({{"t", t.str()}, {"val", v.str()}, {"preserved", observed}});
  }
  r.expect("translation by 1 preserves the measure", true, translate(Scalar(1)) == haar);
  r.expect("translation by 1/p does not preserve the measure", false, translate(Scalar(1, opt.p)) == haar);
  r.expect("translation by 0 preserves the measure", true, translate(Scalar(0)) == haar);
  r.expect("stabilizer grid matches val(t) >= 0", std::to_string(grid.size()), std::to_string(agree));
  r.artifacts["translations"] = table;
  return r;
}

/// mu = uniform{0, 1, inf} on P^1 under z -> 1/z, z -> 1 - z, z -> p z.
inline ScenarioReport scenario_pgl2_triple(const ScenarioOptions& opt) {
  const FieldSpec f(opt.p);
  ScenarioReport r("pgl2_triple");
  r.parameters = {{"p", opt.p}, {"word_len", opt.word_len}};
  const ProjLineSpace pl(f);
  const std::vector<ProjPoint> support{ProjPoint::finite(0), ProjPoint::finite(1), ProjPoint::infinity()};
  const auto mu = FiniteMeasure<ProjLineSpace>::uniform(pl, support);
  const MatGroup g(f, {Matrix::from_rows({{0, 1}, {1, 0}}), Matrix::from_rows({{-1, 1}, {0, 1}}),
                       Matrix::from_rows({{opt.p, 0}, {0, 1}})});
  const auto stab = stab_search(mu, g, opt.word_len);
  const std::set<Word> stab_set(stab.begin(), stab.end());

  std::vector<Word> permuting;
  std::size_t nonunit_rejected = 0, nonunit_total = 0;
  for (const auto& w : enumerate_words(g.size(), opt.word_len, true)) {
    const Matrix m = g.evaluate(w);
    std::set<ProjPoint> image;
    for (const auto& x : support) image.insert(pl.act(m, x));
    if (image == std::set<ProjPoint>(support.begin(), support.end())) permuting.push_back(w);
    if (val(f, det(detail::primitive_lift(f, m))).value() != 0) {
      ++nonunit_total;
      nonunit_rejected += stab_set.count(w) == 0 ? 1 : 0;
    }
  }
  r.expect("word g1 (z -> 1/z) is in the stabilizer", true, stab_set.count({1}) > 0);
  r.expect("word g3 (z -> pz) is not in the stabilizer", false, stab_set.count({3}) > 0);
  r.expect("stabilizer words are exactly the support permutations", detail::words_str(permuting),
           detail::words_str(stab));
  r.expect("words with non-unit determinant lift are rejected", std::to_string(nonunit_total),
           std::to_string(nonunit_rejected));

  std::set<Matrix> lifts;
  for (const auto& w : stab) {
    const Matrix l = detail::primitive_lift(f, g.evaluate(w));
    if (!(l == Matrix::identity(2))) lifts.insert(l);
  }
  nlohmann::json lift_json = nlohmann::json::array();
  for (const auto& l : lifts) lift_json.push_back(json_io::to_json(l));
  r.artifacts["stabilizer_lifts"] = lift_json;
  r.artifacts["stabilizer_words"] = stab.size();
  if (lifts.empty()) {
    r.expect("stabilizer lifts certify bounded", "bounded", "no lifts");
    return r;
  }
  const MatGroup h(f, std::vector<Matrix>(lifts.begin(), lifts.end()));
  const auto cert = certify(h);
  r.expect("stabilizer lifts certify bounded", "bounded", verdict_name(cert));
  if (const auto* b = std::get_if<Bounded>(&cert)) r.artifacts["invariant_lattice"] = json_io::to_json(b->invariant_lattice.basis());
  return r;
}

namespace detail {

/// Complete invariant of the orbit of (x, y) under diag(t, 1/t).
struct TorusInvariant {
  int axis = 0;  // 0 origin, 1 on the x-axis, 2 on the y-axis, 3 off the axes
  Scalar product;

  friend bool operator==(const TorusInvariant&, const TorusInvariant&) = default;
};

inline TorusInvariant torus_invariant(const Vector& v) {
  const bool x = !v[0].is_zero(), y = !v[1].is_zero();
  return {x && y ? 3 : x ? 1 : y ? 2 : 0, v[0] * v[1]};
}

/// The t with diag(t, 1/t) a = b, if any. Candidates are forced by a single
/// non-zero coordinate, so testing them decides the question.
inline std::optional<Scalar> torus_connect(const Vector& a, const Vector& b) {
  std::optional<Scalar> t;
  if (!a[0].is_zero()) {
    if (b[0].is_zero()) return std::nullopt;
    t = b[0] / a[0];
  } else if (!a[1].is_zero()) {
    if (b[1].is_zero()) return std::nullopt;
    t = a[1] / b[1];
  } else {
    t = Scalar(1);
  }
  if (t->is_zero()) return std::nullopt;
  if (*t * a[0] == b[0] && a[1] / *t == b[1]) return t;
  return std::nullopt;
}

}  // namespace detail

inline ScenarioReport scenario_torus_orbits(const ScenarioOptions& opt) {
  const FieldSpec f(opt.p);
  ScenarioReport r("torus_orbits");
  r.parameters = {{"p", opt.p}, {"sample_size", opt.sample_size}, {"seed", opt.seed}};
  const Scalar p(opt.p);
  r.expect("(1,1) and (1,p) are separated by xy", true,
           detail::torus_invariant({1, 1}).product != detail::torus_invariant({1, p}).product);
  const auto t = detail::torus_connect({1, 1}, {p, p.inv()});
  r.expect("(1,1) and (p,1/p) are joined by t = p", p.str(), t ? t->str() : "none");
  const auto ia = detail::torus_invariant({1, 0}), ib = detail::torus_invariant({0, 1});
  r.expect("(1,0) and (0,1) collide under xy", true, ia.product == ib.product);
  r.expect("(1,0) and (0,1) are separated by axis membership", true,
           ia.axis != ib.axis && !detail::torus_connect({1, 0}, {0, 1}));

  std::mt19937_64 rng(opt.seed);
  auto coord = [&]() -> Scalar {
    if (rng() % 4 == 0) return 0;
    const long u = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(opt.p - 1 > 0 ? opt.p - 1 : 1));
    const long v = static_cast<long>(rng() % 5) - 2;
    return Scalar(u) * p_power(f, v);
  };
  std::vector<Vector> pts;
  for (std::size_t i = 0; i < opt.sample_size; ++i) pts.push_back({coord(), coord()});
  for (std::size_t i = 0; i < opt.sample_size / 2; ++i) {
    const long v = static_cast<long>(rng() % 5) - 2;
    const Scalar s = p_power(f, v) * Scalar(1 + static_cast<long>(rng() % static_cast<std::uint64_t>(opt.p)));
    pts.push_back({s * pts[i][0], pts[i][1] / s});
  }
  std::size_t cross = 0, separated = 0, same = 0, joined = 0, xy_collisions = 0, collisions_on_axes = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const auto a = detail::torus_invariant(pts[i]), b = detail::torus_invariant(pts[j]);
      const auto conn = detail::torus_connect(pts[i], pts[j]);
      if (a == b) {
        ++same;
        if (conn) ++joined;
      } else {
        ++cross;
        if (!conn) ++separated;
        if (a.product == b.product) {
          ++xy_collisions;
          if (a.product.is_zero()) ++collisions_on_axes;
        }
      }
    }
  }
  r.expect("cross-orbit sample pairs separated by (xy, axis)", std::to_string(cross), std::to_string(separated));
  r.expect("same-orbit sample pairs joined by an explicit t", std::to_string(same), std::to_string(joined));
  r.expect("xy collisions across orbits happen only on the axes", std::to_string(xy_collisions),
           std::to_string(collisions_on_axes));
  nlohmann::json table = nlohmann::json::array();
  for (const auto& v : pts) {
    const auto inv = detail::torus_invariant(v);
    table.push_back({{"point", json_io::to_json(v)}, {"xy", inv.product.str()}, {"axis", inv.axis}});
  }
  r.artifacts["orbit_invariants"] = table;
  return r;
}

/// Finite measures on P^1 invariant under z -> z + 1 are exactly delta_inf.
inline ScenarioReport scenario_unipotent_support(const ScenarioOptions& opt) {
  const FieldSpec f(opt.p);
  ScenarioReport r("unipotent_support");
  r.parameters = {{"p", opt.p}, {"word_len", opt.word_len}};
  const ProjLineSpace pl(f);
  const MatGroup h(f, {Matrix::from_rows({{1, 1}, {0, 1}})});
  using M = FiniteMeasure<ProjLineSpace>;
  const auto inf = ProjPoint::infinity();
  auto fin = [](Scalar x) { return ProjPoint::finite(std::move(x)); };
  std::vector<ProjPoint> digits;
  for (long k = 0; k < opt.p; ++k) digits.push_back(fin(k));
  const std::vector<std::pair<std::string, M>> cases{
      {"delta_inf", M::dirac(pl, inf)},
      {"delta_0", M::dirac(pl, fin(0))},
      {"uniform{0..p-1}", M::uniform(pl, digits)},
      {"uniform{0,inf}", M::uniform(pl, {fin(0), inf})},
      {"uniform{1/p,inf}", M::uniform(pl, {fin(Scalar(1, opt.p)), inf})},
      {"(2/3)delta_inf + (1/3)delta_1", M(pl, {{inf, Scalar(2, 3)}, {fin(1), Scalar(1, 3)}})},
  };
  const auto all_words = enumerate_words(1, opt.word_len, true);
  nlohmann::json table = nlohmann::json::array();
  for (const auto& [label, mu] : cases) {
    const bool on_fixed_set = mu.support() == std::vector<ProjPoint>{inf};
    const bool invariant = apply_group(mu, h.generators()[0]) == mu;
    // An invariant atom x off inf forces equal mass on x, x+1, ..., which are
    // pairwise distinct; more of them than atoms cannot all be charged.
    bool orbit_allows = true;
    for (const auto& [x, m] : mu.atoms()) {
      if (x.infinite) continue;
      std::set<ProjPoint> orbit;
      for (std::size_t k = 0; k <= mu.size(); ++k) orbit.insert(fin(x.x + Scalar(static_cast<long>(k))));
      if (orbit.size() > mu.size()) orbit_allows = false;
    }
    const auto stab = stab_search(mu, h, opt.word_len);
    r.expect(label + ": invariant iff supported on {inf}", on_fixed_set, invariant);
    r.expect(label + ": orbit argument agrees", invariant, orbit_allows);
    r.expect(label + ": stabilizer words", detail::words_str(on_fixed_set ? all_words : std::vector<Word>{{}}),
             detail::words_str(stab));
    table.push_back({{"measure", label}, {"invariant", invariant}, {"stabilizer_words", stab.size()}});
  }
  r.artifacts["cases"] = table;
  return r;
}

/// Prokhorov distance of g_n mu to mu for g_n = diag(1 + p^n, 1).
inline ScenarioReport scenario_prob_convergence(const ScenarioOptions& opt) {
  const FieldSpec f(opt.p);
  if (opt.n_max < 1) throw validation_error("n_max must be at least 1");
  ScenarioReport r("prob_convergence");
  r.parameters = {{"p", opt.p}, {"n_max", opt.n_max}};
  const ProjLineSpace pl(f);
  const auto mu = FiniteMeasure<ProjLineSpace>::uniform(
      pl, {ProjPoint::finite(0), ProjPoint::finite(1), ProjPoint::infinity()});
  std::vector<Scalar> dists;
  nlohmann::json xs = nlohmann::json::array(), ys = nlohmann::json::array(), disp = nlohmann::json::array();
  std::size_t formula_ok = 0, zero_rows = 0, zero_rows_fixing = 0;
  auto record_zero = [&](const Matrix& g, const Scalar& d) {
    if (!d.is_zero()) return;
    ++zero_rows;
    zero_rows_fixing += apply_group(mu, g) == mu ? 1 : 0;
  };
  for (long n = 1; n <= opt.n_max; ++n) {
    const Matrix g = Matrix::diagonal({Scalar(1) + p_power(f, n), Scalar(1)});
    const Scalar d = prokhorov(apply_group(mu, g), mu);
    dists.push_back(d);
    record_zero(g, d);
    formula_ok += d == min(Scalar(1, 3), p_power(f, -n)) ? 1 : 0;
    xs.push_back(n);
    ys.push_back(d.str());
    disp.push_back(p_power(f, entry_exponent(f, g - Matrix::identity(2)).value().floor()).str());
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < dists.size(); ++i) decreasing = decreasing && dists[i] < dists[i - 1];
  const Scalar identity_row = prokhorov(apply_group(mu, Matrix::identity(2)), mu);
  record_zero(Matrix::identity(2), identity_row);
  r.expect("distance table strictly decreasing", true, decreasing);
  r.expect("distance equals min(1/3, p^-n) for every n", std::to_string(opt.n_max), std::to_string(formula_ok));
  r.expect("last distance at most p^-n_max", true, dists.back() <= p_power(f, -opt.n_max));
  r.expect("identity row distance", "0", identity_row.str());
  r.expect("zero-distance rows fix the measure", std::to_string(zero_rows), std::to_string(zero_rows_fixing));
  r.artifacts["decay"] = {{"x", xs}, {"y", ys}, {"displacement", disp}, {"identity", identity_row.str()}};
  return r;
}

using ScenarioFn = std::function<ScenarioReport(const ScenarioOptions&)>;

inline const std::vector<std::pair<std::string, ScenarioFn>>& scenario_registry() {
  static const std::vector<std::pair<std::string, ScenarioFn>> reg{
      {"zp_haar", scenario_zp_haar},
      {"pgl2_triple", scenario_pgl2_triple},
      {"torus_orbits", scenario_torus_orbits},
      {"unipotent_support", scenario_unipotent_support},
      {"prob_convergence", scenario_prob_convergence},
  };
  return reg;
}

inline ScenarioReport run_scenario(const std::string& name, const ScenarioOptions& opt) {
  for (const auto& [n, fn] : scenario_registry())
    if (n == name) return fn(opt);
  throw validation_error("unknown scenario: " + name);
}

}  // namespace nonarch
