#pragma once

// JSON encodings. Scalars are "num/den" strings (den omitted when 1);
// matrices are arrays of rows; "inf" marks infinite seminorm weights.

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

#include "nonarch/boundedness.hpp"
#include "nonarch/measures.hpp"
#include "nonarch/normspace.hpp"
#include "nonarch/spaces.hpp"

namespace nonarch::json_io {

using json = nlohmann::json;

inline json to_json(const Scalar& s) { return s.str(); }
inline json to_json(const ExtRational& e) { return e.str(); }

inline Scalar scalar_from(const json& j) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (!j.is_string()) throw validation_error("scalar must be a \"num/den\" string or an integer");
  return Scalar::parse(j.get<std::string>());
}

inline ExtRational ext_from(const json& j) {
  if (j.is_string()) return ExtRational::parse(j.get<std::string>());
  return ExtRational(scalar_from(j));
}

inline json to_json(const Vector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline Vector vector_from(const json& j) {
  if (!j.is_array()) throw validation_error("vector must be an array");
  Vector v;
  for (const auto& x : j) v.push_back(scalar_from(x));
  return v;
}

inline json to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline Matrix matrix_from(const json& j) {
  if (!j.is_array() || j.empty()) throw validation_error("matrix must be a non-empty array of rows");
  std::vector<Vector> rows;
  for (const auto& r : j) rows.push_back(vector_from(r));
  return Matrix::from_rows(rows);
}

inline json to_json(const SplitNorm& n) {
  json w = json::array();
  for (const auto& x : n.weights()) w.push_back(to_json(x));
  return {{"basis", to_json(n.basis())}, {"weights", w}, {"denominator", n.denominator()}};
}

inline json to_json(const Seminorm& s) {
  json w = json::array();
  mpz_class e = 1;
  for (const auto& x : s.weights()) {
    w.push_back(to_json(x));
    if (x.is_finite()) mpz_lcm(e.get_mpz_t(), e.get_mpz_t(), x.value().den().get_mpz_t());
  }
  return {{"basis", to_json(s.basis())}, {"weights", w}, {"denominator", e.get_si()}};
}

namespace detail {
inline void check_denominator(const json& j, const std::vector<ExtRational>& ws) {
  if (!j.contains("denominator")) return;
  const long e = j.at("denominator").get<long>();
  if (e < 1) throw validation_error("denominator must be positive");
  for (const auto& w : ws)
    if (w.is_finite() && !(w.value() * Scalar(e)).is_integer())
      throw validation_error("weight " + w.str() + " is off the 1/" + std::to_string(e) + " grid");
}
}  // namespace detail

inline Seminorm seminorm_from(const FieldSpec& f, const json& j) {
  std::vector<ExtRational> ws;
  for (const auto& x : j.at("weights")) ws.push_back(ext_from(x));
  detail::check_denominator(j, ws);
  return Seminorm(f, matrix_from(j.at("basis")), std::move(ws));
}

inline SplitNorm norm_from(const FieldSpec& f, const json& j) {
  auto n = seminorm_from(f, j).as_norm();
  if (!n) throw validation_error("norm weights must be finite");
  return *n;
}

inline json to_json(const Word& w) { return json(std::vector<int>(w.begin(), w.end())); }

inline json to_json(const BoundednessCert& c) {
  json out = {{"verdict", verdict_name(c)}};
  if (const auto* b = std::get_if<Bounded>(&c)) {
    out["lattice"] = to_json(b->invariant_lattice.basis());
    out["norm"] = to_json(b->invariant_norm);
    out["iterations"] = b->iterations;
  } else if (const auto* u = std::get_if<Unbounded>(&c)) {
    out["witness"] = to_json(u->witness_word);
    out["reason"] = to_string(u->reason);
    out["slope"] = to_json(u->slope);
    out["iterations"] = u->iterations;
  } else {
    out["iterations"] = std::get<Inconclusive>(c).iterations;
  }
  return out;
}

inline std::vector<Matrix> generators_from(const json& j) {
  const json& list = j.is_object() ? j.at("generators") : j;
  if (!list.is_array()) throw validation_error("generators must be an array of matrices");
  std::vector<Matrix> out;
  for (const auto& m : list) out.push_back(matrix_from(m));
  return out;
}

// Measures on the four runtime space kinds.

using AnyMeasure = std::variant<FiniteMeasure<QpVecSpace>, FiniteMeasure<ProjLineSpace>, FiniteMeasure<NormSpace>,
                                FiniteMeasure<FinitePointSpace>>;

inline json point_to_json(const QpVecSpace&, const Vector& x) { return to_json(x); }
inline json point_to_json(const ProjLineSpace&, const ProjPoint& x) { return x.str(); }
inline json point_to_json(const NormSpace&, const SplitNorm& x) { return to_json(x); }
inline json point_to_json(const FinitePointSpace&, std::size_t x) { return x; }

inline json space_to_json(const QpVecSpace& s) { return {{"kind", "qpvec"}, {"n", s.n}}; }
inline json space_to_json(const ProjLineSpace&) { return {{"kind", "projline"}}; }
inline json space_to_json(const NormSpace& s) { return {{"kind", "normspace"}, {"n", s.n}}; }
inline json space_to_json(const FinitePointSpace& s) {
  json t = json::array();
  for (const auto& row : s.table) {
    json r = json::array();
    for (const auto& x : row) r.push_back(to_json(x));
    t.push_back(std::move(r));
  }
  return {{"kind", "finite"}, {"distances", t}};
}

template <MetricSpace S>
json to_json(const FiniteMeasure<S>& mu) {
  json atoms = json::array();
  for (const auto& [pt, m] : mu.atoms()) atoms.push_back({{"point", point_to_json(mu.space(), pt)}, {"mass", to_json(m)}});
  return {{"space", space_to_json(mu.space())}, {"atoms", atoms}};
}

namespace detail {

inline ProjPoint projpoint_from(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return ProjPoint::infinity();
  return ProjPoint::finite(scalar_from(j));
}

template <class S, class F>
FiniteMeasure<S> atoms_from(S space, const json& j, F&& read_point) {
  std::vector<std::pair<typename S::Point, Scalar>> atoms;
  for (const auto& a : j.at("atoms")) atoms.emplace_back(read_point(a.at("point")), scalar_from(a.at("mass")));
  return FiniteMeasure<S>(std::move(space), atoms);
}

}  // namespace detail

inline AnyMeasure measure_from(const FieldSpec& f, const json& j) {
  const json& sp = j.at("space");
  const std::string kind = sp.at("kind").get<std::string>();
  if (kind == "qpvec") {
    const std::size_t n = sp.at("n").get<std::size_t>();
    return detail::atoms_from(QpVecSpace(f, n), j, [&](const json& p) {
      Vector v = vector_from(p);
      if (v.size() != n) throw validation_error("point dimension does not match the space");
      return v;
    });
  }
  if (kind == "projline") return detail::atoms_from(ProjLineSpace(f), j, detail::projpoint_from);
  if (kind == "normspace") {
    const std::size_t n = sp.at("n").get<std::size_t>();
    return detail::atoms_from(NormSpace(f, n), j, [&](const json& p) {
      SplitNorm x = norm_from(f, p);
      if (x.dim() != n) throw validation_error("norm dimension does not match the space");
      return x;
    });
  }
  if (kind == "finite") {
    std::vector<std::vector<Scalar>> table;
    for (const auto& row : sp.at("distances")) table.push_back(vector_from(row));
    FinitePointSpace space(std::move(table));
    const std::size_t m = space.size();
    return detail::atoms_from(std::move(space), j, [&](const json& p) {
      const auto i = p.get<std::size_t>();
      if (i >= m) throw validation_error("point index outside the finite space");
      return i;
    });
  }
  throw validation_error("unknown space kind: " + kind);
}

}  // namespace nonarch::json_io
