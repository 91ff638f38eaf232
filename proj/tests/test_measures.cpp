#include <gtest/gtest.h>

#include "nonarch/measures.hpp"
#include "support.hpp"

using namespace nonarch;
using nonarch::testing::Rng;
namespace tst = nonarch::testing;

namespace {

using LineMeasure = FiniteMeasure<ProjLineSpace>;

ProjPoint pt(const Scalar& x) { return ProjPoint::finite(x); }

LineMeasure three_points(const FieldSpec& f) {
  return LineMeasure::uniform(ProjLineSpace(f), {pt(0), pt(1), ProjPoint::infinity()});
}

}  // namespace

TEST(Spaces, ChordalMetric) {
  const ProjLineSpace line(FieldSpec(3));
  EXPECT_EQ(line.distance(pt(0), ProjPoint::infinity()), Scalar(1));
  EXPECT_EQ(line.distance(pt(Scalar(1, 9)), ProjPoint::infinity()), Scalar(1, 9));
  EXPECT_EQ(line.distance(pt(1), pt(10)), Scalar(1, 9));
  EXPECT_EQ(line.distance(pt(Scalar(1, 3)), pt(Scalar(1, 9))), Scalar(1, 3));
  EXPECT_EQ(line.act(Matrix::from_rows({{0, 1}, {1, 0}}), pt(0)), ProjPoint::infinity());
  EXPECT_EQ(line.act(Matrix::from_rows({{1, 1}, {0, 1}}), ProjPoint::infinity()), ProjPoint::infinity());
  EXPECT_THROW(line.act(Matrix(2, 2), pt(0)), nonarch::domain_error);
  EXPECT_THROW(FinitePointSpace({{0, 1}, {2, 0}}), validation_error);
}

TEST(Measures, ConstructionValidates) {
  const ProjLineSpace line(FieldSpec(3));
  EXPECT_THROW(LineMeasure(line, {{pt(0), Scalar(-1)}}), validation_error);
  EXPECT_THROW(LineMeasure(line, {{pt(0), Scalar(1)}, {pt(0), Scalar(1)}}), validation_error);
  EXPECT_TRUE(three_points(FieldSpec(3)).is_probability());
  EXPECT_THROW(LineMeasure(line).normalized(), nonarch::domain_error);
}

TEST(Measures, PushforwardAndProduct) {
  const FieldSpec f(3);
  const ProjLineSpace line(f);
  const auto mu = three_points(f);
  const auto collapsed = pushforward(mu, [](const ProjPoint&) { return ProjPoint::infinity(); });
  EXPECT_EQ(collapsed, LineMeasure::dirac(line, ProjPoint::infinity()));
  const FinitePointSpace two({{0, 1}, {1, 0}});
  const auto labels = pushforward(mu, two, [](const ProjPoint& x) -> std::size_t { return x.infinite ? 1 : 0; });
  EXPECT_EQ(labels.mass(0), Scalar(2, 3));
  EXPECT_EQ(labels.mass(1), Scalar(1, 3));
  const auto prod = product(LineMeasure::dirac(line, pt(0)), labels);
  EXPECT_EQ(prod.size(), 2u);
  EXPECT_EQ(prod.total(), Scalar(1));
  EXPECT_EQ(prod.mass({pt(0), 0}), Scalar(2, 3));
}

TEST(Prokhorov, Examples) {
  const FieldSpec f(3);
  const ProjLineSpace line(f);
  const auto mu = three_points(f);
  const auto delta = LineMeasure::dirac(line, pt(0));
  EXPECT_EQ(prokhorov(mu, delta), Scalar(2, 3));
  EXPECT_EQ(prokhorov_oracle(mu, delta), Scalar(2, 3));
  EXPECT_EQ(prokhorov(mu, mu), Scalar(0));
  const auto moved = apply_group(mu, Matrix::diagonal({10, 1}));
  EXPECT_EQ(moved.mass(pt(10)), Scalar(1, 3));
  EXPECT_EQ(prokhorov(moved, mu), Scalar(1, 9));
  EXPECT_EQ(prokhorov_oracle(moved, mu), Scalar(1, 9));
}

TEST(Prokhorov, SubProbabilityMeasures) {
  const FinitePointSpace s({{0, 2}, {2, 0}});
  const FiniteMeasure<FinitePointSpace> a(s, {{0, Scalar(1, 2)}});
  const FiniteMeasure<FinitePointSpace> b(s, {{1, Scalar(1, 4)}});
  EXPECT_EQ(prokhorov(a, b), prokhorov_oracle(a, b));
  EXPECT_EQ(prokhorov(a, b), Scalar(1, 2));
  EXPECT_EQ(prokhorov(a, FiniteMeasure<FinitePointSpace>(s)), Scalar(1, 2));
}

TEST(Prokhorov, OracleLimitAndSpaceMismatch) {
  const FieldSpec f(3);
  const QpVecSpace v2(f, 2), v3(f, 3);
  const auto a = FiniteMeasure<QpVecSpace>::dirac(v2, {0, 0});
  const auto b = FiniteMeasure<QpVecSpace>::dirac(v3, {0, 0, 0});
  EXPECT_THROW(prokhorov(a, b), validation_error);
  std::vector<std::size_t> pts(13);
  std::iota(pts.begin(), pts.end(), 0);
  Rng rng(1);
  const auto big = FiniteMeasure<FinitePointSpace>::uniform(tst::random_finite_space(rng, 13), pts);
  EXPECT_THROW(prokhorov_oracle(big, big), validation_error);
}

TEST(Prokhorov, AgreesWithOracle) {
  Rng rng(41);
  for (int i = 0; i < 40; ++i) {
    const std::size_t m = static_cast<std::size_t>(rng.uniform(2, 9));
    const auto space = tst::random_finite_space(rng, m);
    const auto pool = tst::index_pool(m);
    const auto mu = tst::random_measure(rng, space, pool, static_cast<std::size_t>(rng.uniform(1, static_cast<long>(m))));
    auto nu = tst::random_measure(rng, space, pool, static_cast<std::size_t>(rng.uniform(1, static_cast<long>(m))));
    if (rng.coin(3)) nu = nu.scaled(Scalar(1, 2));
    EXPECT_EQ(prokhorov(mu, nu), prokhorov_oracle(mu, nu));
  }
  for (long p : {2, 3, 5}) {
    const FieldSpec f(p);
    const ProjLineSpace line(f);
    const auto pool = tst::projline_pool(f);
    for (int i = 0; i < 15; ++i) {
      const auto mu = tst::random_measure(rng, line, pool, static_cast<std::size_t>(rng.uniform(1, 6)));
      const auto nu = tst::random_measure(rng, line, pool, static_cast<std::size_t>(rng.uniform(1, 6)));
      EXPECT_EQ(prokhorov(mu, nu), prokhorov_oracle(mu, nu));
    }
  }
}

TEST(Prokhorov, MetricAndIsometryInvariance) {
  Rng rng(42);
  for (long p : {2, 3, 5}) {
    const FieldSpec f(p);
    const ProjLineSpace line(f);
    const auto pool = tst::projline_pool(f);
    for (int i = 0; i < 25; ++i) {
      const auto a = tst::random_measure(rng, line, pool, static_cast<std::size_t>(rng.uniform(1, 5)));
      const auto b = tst::random_measure(rng, line, pool, static_cast<std::size_t>(rng.uniform(1, 5)));
      const auto c = tst::random_measure(rng, line, pool, static_cast<std::size_t>(rng.uniform(1, 5)));
      const Scalar ab = prokhorov(a, b);
      EXPECT_EQ(ab, prokhorov(b, a));
      EXPECT_LE(prokhorov(a, c), ab + prokhorov(b, c));
      EXPECT_EQ(ab.is_zero(), a == b);
      const Matrix g = tst::random_gl_zp(rng, f, 2);
      EXPECT_EQ(prokhorov(apply_group(a, g), apply_group(b, g)), ab);
      const Scalar w = wasserstein(a, b);
      EXPECT_EQ(wasserstein(apply_group(a, g), apply_group(b, g)), w);
      EXPECT_LE(ab * ab, w);
      EXPECT_LE(w, ab + ab);
    }
  }
}

TEST(Wasserstein, Examples) {
  const FieldSpec f(3);
  const ProjLineSpace line(f);
  const auto mu = three_points(f);
  EXPECT_EQ(wasserstein(mu, LineMeasure::dirac(line, pt(0))), Scalar(2, 3));
  EXPECT_EQ(wasserstein(apply_group(mu, Matrix::diagonal({10, 1})), mu), Scalar(1, 27));
  EXPECT_EQ(wasserstein(mu, mu), Scalar(0));
  EXPECT_THROW(wasserstein(mu, mu.scaled(2)), validation_error);
  const FinitePointSpace far({{0, 5}, {5, 0}});
  EXPECT_EQ(wasserstein(FiniteMeasure<FinitePointSpace>::dirac(far, 0), FiniteMeasure<FinitePointSpace>::dirac(far, 1)),
            Scalar(1));
}

TEST(Tightness, Examples) {
  const FieldSpec f(3);
  const ProjLineSpace line(f);
  const std::vector<LineMeasure> fam{LineMeasure::dirac(line, pt(0)), LineMeasure::uniform(line, {pt(0), pt(1)})};
  EXPECT_EQ(tightness_check(fam, {pt(0)}), Scalar(1, 2));
  EXPECT_EQ(tightness_check(fam, {pt(0), pt(1)}), Scalar(1));
  EXPECT_EQ(tightness_check(std::vector<LineMeasure>{}, {}), Scalar(1));
}

TEST(Decompose, Levels) {
  const FinitePointSpace s({{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}});
  const FiniteMeasure<FinitePointSpace> mu(
      s, {{0, Scalar(1, 4)}, {1, Scalar(1, 4)}, {2, Scalar(1, 3)}, {3, Scalar(1, 6)}});
  const auto d = decompose_atoms(mu, [](std::size_t x) { return x; });
  ASSERT_EQ(d.levels.size(), 3u);
  EXPECT_EQ(d.levels[0].lambda, Scalar(1, 3));
  EXPECT_EQ(d.levels[1].lambda, Scalar(1, 4));
  EXPECT_EQ(d.levels[1].fiber_points, (std::set<std::size_t>{0, 1}));
  EXPECT_EQ(d.levels[1].measure.total(), Scalar(1, 2));
  EXPECT_TRUE(d.continuous_part.empty());
  EXPECT_EQ(d.recombined(), mu);
  const auto coarse = decompose_atoms(mu, [](std::size_t x) { return x / 2; });
  ASSERT_EQ(coarse.levels.size(), 1u);
  EXPECT_EQ(coarse.levels[0].lambda, Scalar(1, 2));
  EXPECT_EQ(coarse.recombined(), mu);
}

TEST(Decompose, EquivariantProjection) {
  const FieldSpec f(3);
  const QpVecSpace v(f, 2);
  const ProjLineSpace line(f);
  const FiniteMeasure<QpVecSpace> mu(v, {{{1, 0}, Scalar(1, 2)}, {{3, 0}, Scalar(1, 4)}, {{1, 1}, Scalar(1, 4)}});
  auto proj = [](const Vector& x) { return x[1].is_zero() ? ProjPoint::infinity() : ProjPoint::finite(x[0] / x[1]); };
  const auto d = decompose_atoms(mu, proj);
  ASSERT_EQ(d.levels.size(), 2u);
  EXPECT_EQ(d.levels[0].lambda, Scalar(3, 4));
  EXPECT_EQ(d.levels[0].fiber_points, (std::set<ProjPoint>{ProjPoint::infinity()}));
  const Matrix g = Matrix::from_rows({{1, 1}, {0, 1}});
  const auto dg = decompose_atoms(apply_group(mu, g), proj);
  for (std::size_t i = 0; i < d.levels.size(); ++i) {
    EXPECT_EQ(dg.levels[i].lambda, d.levels[i].lambda);
    std::set<ProjPoint> moved;
    for (const auto& u : d.levels[i].fiber_points) moved.insert(line.act(g, u));
    EXPECT_EQ(dg.levels[i].fiber_points, moved);
    EXPECT_EQ(dg.levels[i].measure, apply_group(d.levels[i].measure, g));
  }
}

TEST(Disintegrate, Reconstructs) {
  const FinitePointSpace s({{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}});
  const Fibration<std::size_t, char> fib({0, 1, 2, 3}, {'a', 'b'}, {{0, 'a'}, {1, 'a'}, {2, 'b'}, {3, 'b'}});
  const FiniteMeasure<FinitePointSpace> mu(s, {{0, Scalar(1, 2)}, {1, Scalar(1, 4)}, {2, Scalar(1, 4)}});
  const auto d = disintegrate(mu, fib);
  EXPECT_EQ(d.base.mass('a'), Scalar(3, 4));
  EXPECT_EQ(d.base.mass('b'), Scalar(1, 4));
  EXPECT_EQ(d.fibers.at('a').mass(0), Scalar(2, 3));
  EXPECT_TRUE(d.fibers.at('b').is_probability());
  EXPECT_EQ(d.reconstructed(s), mu);
  EXPECT_THROW((Fibration<std::size_t, char>({0, 1}, {'a'}, {{0, 'a'}})), validation_error);
  EXPECT_THROW((Fibration<std::size_t, char>({0}, {'a', 'b'}, {{0, 'a'}})), validation_error);
}

TEST(Disintegrate, RandomReconstruction) {
  Rng rng(43);
  for (int i = 0; i < 30; ++i) {
    const std::size_t m = static_cast<std::size_t>(rng.uniform(2, 8));
    const auto space = tst::random_finite_space(rng, m);
    const long k = rng.uniform(1, static_cast<long>(m));
    std::map<std::size_t, long> table;
    std::set<long> hit;
    for (std::size_t x = 0; x < m; ++x) {
      table[x] = x < static_cast<std::size_t>(k) ? static_cast<long>(x) : rng.uniform(0, k - 1);
      hit.insert(table[x]);
    }
    const Fibration<std::size_t, long> fib(tst::index_pool(m), {hit.begin(), hit.end()}, table);
    const auto mu = tst::random_measure(rng, space, tst::index_pool(m), m);
    const auto d = disintegrate(mu, fib);
    EXPECT_EQ(d.reconstructed(space), mu);
    for (const auto& [u, piece] : d.fibers) {
      EXPECT_TRUE(piece.is_probability());
      for (const auto& x : piece.support()) EXPECT_EQ(fib(x), u);
    }
  }
}

TEST(Stabilizers, WordSearch) {
  const FieldSpec f(3);
  const ProjLineSpace line(f);
  const MatGroup flip(f, {Matrix::from_rows({{-1, 1}, {0, 1}})});
  const LineMeasure mu(line, {{pt(0), Scalar(1, 3)}, {pt(1), Scalar(2, 3)}});
  EXPECT_EQ(stab_search(mu, flip, 3), (std::vector<Word>{{}, {1, 1}, {-1, -1}}));
  const LineMeasure even = LineMeasure::uniform(line, {pt(0), pt(1)});
  EXPECT_EQ(stab_search(even, flip, 2).size(), 5u);
  EXPECT_THROW(stab_search(mu, flip, 0), validation_error);
  EXPECT_EQ(intersect_words({{}, {1}, {2}}, {{2}, {}}), (std::vector<Word>{{}, {2}}));
}

TEST(Stabilizers, FamilyMatchesIntersection) {
  const FieldSpec f(3);
  const ProjLineSpace line(f);
  const MatGroup g(f, {Matrix::from_rows({{-1, 1}, {0, 1}}), Matrix::from_rows({{0, 1}, {1, 0}})});
  std::map<int, LineMeasure> fam;
  fam.emplace(0, LineMeasure::uniform(line, {pt(0), pt(1)}));
  fam.emplace(1, LineMeasure::uniform(line, {pt(2), pt(Scalar(1, 2))}));
  const auto r = family_stab_search(fam, line, g, 3);
  EXPECT_TRUE(r.agree);
  EXPECT_FALSE(r.family.empty());
  EXPECT_EQ(r.family.front(), Word{});
}
