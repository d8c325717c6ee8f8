#include <gtest/gtest.h>

#include <random>
#include <set>

#include "instrumental/sampling.hpp"
#include "instrumental/scenario.hpp"

using namespace instrumental;

TEST(Scenario, CoordinateFlattening) {
  const Scenario bell = Scenario::bell(3, 2, 2, 2);
  EXPECT_EQ(bell.dimension(), 24u);
  EXPECT_EQ(bell.index(2, 1, 0, 1), static_cast<std::size_t>(((2 * 2 + 1) * 2 + 0) * 2 + 1));
  const Scenario ins = Scenario::instrumental(3, 2, 2);
  EXPECT_EQ(ins.dimension(), 12u);
  EXPECT_EQ(ins.index(1, 1, 0), static_cast<std::size_t>((1 * 2 + 1) * 2 + 0));
  EXPECT_EQ(ins.wiring(1, 2), 1);
}

TEST(Scenario, ChainedWiring) {
  const Scenario c = Scenario::chained(3);
  EXPECT_EQ(c.nx(), 4);
  EXPECT_EQ(c.ny(), 3);
  for (int x = 0; x < 4; ++x)
    for (int a = 0; a < 2; ++a) EXPECT_EQ(c.wiring(a, x), ((x - a) % 3 + 3) % 3);
}

TEST(Scenario, RejectsBadShapes) {
  EXPECT_THROW(Scenario::bell(0, 2, 2, 2), std::invalid_argument);
  EXPECT_THROW(Scenario::instrumental(2, 1, 2), std::invalid_argument);
  EXPECT_THROW(Scenario::f_instrumental(2, 2, 2, 2, {{0, 2}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(Scenario::chained(1), std::invalid_argument);
}

TEST(Strategies, Counts) {
  EXPECT_EQ(enumerate_deterministic_strategies(Scenario::instrumental(3, 2, 2)).size(), 32u);
  EXPECT_EQ(enumerate_deterministic_strategies(Scenario::bell(2, 2, 2, 2)).size(), 16u);
  EXPECT_EQ(enumerate_deterministic_strategies(Scenario::chained(2)).size(), 32u);
  EXPECT_THROW(enumerate_deterministic_strategies(Scenario::instrumental(3, 2, 2), 31), CapacityError);
}

TEST(Strategies, LexicographicOrder) {
  const auto all = enumerate_deterministic_strategies(Scenario::bell(2, 2, 2, 2));
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LT(all[i - 1], all[i]);
  EXPECT_EQ(all.front().alpha, (std::vector<int>{0, 0}));
  EXPECT_EQ(all.back().beta, (std::vector<int>{1, 1}));
}

TEST(Strategies, ConstantStrategy) {
  const Scenario s = Scenario::instrumental(3, 2, 2);
  const Correlation p = strategy_to_correlation({{0, 0, 0}, {0, 0}}, s);
  for (int x = 0; x < 3; ++x) EXPECT_EQ(p.at(x, 0, 0), 1);
  EXPECT_TRUE(validate(p).ok());
}

TEST(Strategies, IdentityResponsesBell) {
  const Scenario s = Scenario::bell(2, 2, 2, 2);
  const Correlation p = strategy_to_correlation({{0, 1}, {0, 1}}, s);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) EXPECT_EQ(p.at(x, y, a, b), (a == x && b == y) ? 1 : 0);
}

// Oracle: generate the 0/1 tables directly from the response-function formula.
std::set<std::vector<int>> instrumental_tables_by_formula(int nx, int na, int nb) {
  std::set<std::vector<int>> out;
  std::vector<int> alpha(static_cast<std::size_t>(nx)), beta(static_cast<std::size_t>(na));
  long total_a = 1, total_b = 1;
  for (int i = 0; i < nx; ++i) total_a *= na;
  for (int i = 0; i < na; ++i) total_b *= nb;
  for (long ca = 0; ca < total_a; ++ca) {
    long t = ca;
    for (int x = 0; x < nx; ++x, t /= na) alpha[static_cast<std::size_t>(x)] = static_cast<int>(t % na);
    for (long cb = 0; cb < total_b; ++cb) {
      long u = cb;
      for (int a = 0; a < na; ++a, u /= nb) beta[static_cast<std::size_t>(a)] = static_cast<int>(u % nb);
      std::vector<int> table;
      for (int x = 0; x < nx; ++x)
        for (int a = 0; a < na; ++a)
          for (int b = 0; b < nb; ++b)
            table.push_back(a == alpha[static_cast<std::size_t>(x)] && b == beta[static_cast<std::size_t>(a)]);
      out.insert(table);
    }
  }
  return out;
}

TEST(Strategies, DistinctCorrelationsMatchFormulaOracle) {
  for (auto [nx, na, nb] : {std::tuple{3, 2, 2}, std::tuple{2, 3, 3}, std::tuple{2, 2, 2}}) {
    const auto oracle = instrumental_tables_by_formula(nx, na, nb);
    const auto got = deterministic_correlations(Scenario::instrumental(nx, na, nb));
    ASSERT_EQ(got.size(), oracle.size());
    std::set<std::vector<int>> seen;
    for (const auto& c : got) {
      std::vector<int> t;
      for (const auto& e : c.entries) t.push_back(static_cast<int>(e.get_num().get_si()));
      seen.insert(t);
    }
    EXPECT_EQ(seen, oracle);
    for (std::size_t i = 1; i < got.size(); ++i) EXPECT_LT(compare(got[i - 1].entries, got[i].entries), 0);
  }
}

TEST(Postselect, PrBox) {
  const Correlation q = postselect(pr_box(), Scenario::instrumental(2, 2, 2));
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) EXPECT_EQ(q.at(x, a, b), b == (a * (1 + x)) % 2 ? fraction(1, 2) : Rational(0));
}

TEST(Postselect, UniformBox) {
  const Correlation q = postselect(uniform_box(Scenario::bell(3, 2, 2, 2)), Scenario::instrumental(3, 2, 2));
  for (const auto& e : q.entries) EXPECT_EQ(e, fraction(1, 4));
}

TEST(Postselect, SignallingInputIsReported) {
  // Alice answers a = 1 - y, so every post-selected y = a slice is empty.
  const Scenario s = Scenario::bell(2, 2, 2, 2);
  RationalVector e(s.dimension());
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int b = 0; b < 2; ++b) e[s.index(x, y, 1 - y, b)] = fraction(1, 2);
  EXPECT_THROW(postselect(Correlation(s, e), Scenario::instrumental(2, 2, 2)), SignallingError);
  EXPECT_THROW(postselect(pr_box(), Scenario::instrumental(3, 2, 2)), ShapeError);
}

TEST(Postselect, IsAffine) {
  std::mt19937_64 rng(5);
  const Scenario bell = Scenario::bell(3, 2, 2, 2);
  const Scenario ins = Scenario::instrumental(3, 2, 2);
  for (int t = 0; t < 50; ++t) {
    const Correlation p = sample_nosignalling(bell, rng), q = sample_nosignalling(bell, rng);
    const Rational lam = fraction(t + 1, 53);
    const Correlation lhs = postselect(mix({p, q}, {lam, 1 - lam}), ins);
    const Correlation rhs = mix({postselect(p, ins), postselect(q, ins)}, {lam, 1 - lam});
    EXPECT_EQ(lhs.entries, rhs.entries);
  }
}

TEST(Postselect, DeterministicBellLandsOnInstrumentalVertices) {
  const Scenario bell = Scenario::bell(3, 2, 2, 2);
  const Scenario ins = Scenario::instrumental(3, 2, 2);
  std::set<RationalVector, decltype([](const RationalVector& a, const RationalVector& b) { return compare(a, b) < 0; })> verts;
  for (const auto& c : deterministic_correlations(ins)) verts.insert(c.entries);
  for (const auto& d : enumerate_deterministic_strategies(bell)) {
    const Correlation q = postselect(strategy_to_correlation(d, bell), ins);
    EXPECT_TRUE(verts.count(q.entries));
    // Induced instrumental strategy: same alpha, beta read at y = a.
    EXPECT_EQ(q.entries, strategy_to_correlation({d.alpha, d.beta}, ins).entries);
  }
}

TEST(DummyInput, PrBox) {
  const Correlation p = dummy_input_extension(pr_box());
  EXPECT_EQ(p.scenario, Scenario::bell(3, 2, 2, 2));
  for (int y = 0; y < 2; ++y) {
    EXPECT_EQ(p.at(2, y, 1, 1), 0);
    EXPECT_EQ(p.at(2, y, 0, 1), fraction(1, 2));
  }
  EXPECT_TRUE(validate(p).ok());
}

TEST(DummyInput, DeterministicStaysDeterministic) {
  const Scenario s = Scenario::bell(2, 2, 2, 2);
  for (const auto& d : enumerate_deterministic_strategies(s)) {
    const Correlation ext = dummy_input_extension(strategy_to_correlation(d, s));
    DeterministicStrategy e{d.alpha, d.beta};
    e.alpha.push_back(0);
    EXPECT_EQ(ext.entries, strategy_to_correlation(e, ext.scenario).entries);
  }
}

TEST(DummyInput, PostselectedExtensionHasForcedOutput) {
  std::mt19937_64 rng(9);
  const Scenario s = Scenario::bell(2, 2, 2, 2);
  for (int t = 0; t < 30; ++t) {
    const Correlation q = postselect(dummy_input_extension(sample_nosignalling(s, rng)), Scenario::instrumental(3, 2, 2));
    EXPECT_TRUE(validate(q).ok());
    EXPECT_EQ(q.at(2, 1, 0) + q.at(2, 1, 1), 0);
  }
}

TEST(DummyInput, PreservesSignallingStatus) {
  const Scenario s = Scenario::bell(2, 2, 2, 2);
  RationalVector e(s.dimension());
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int b = 0; b < 2; ++b) e[s.index(x, y, y, b)] = fraction(1, 2);
  const Correlation bad(s, e);
  EXPECT_FALSE(validate(bad).no_signalling);
  EXPECT_FALSE(validate(dummy_input_extension(bad)).no_signalling);
}

TEST(Validate, Cases) {
  EXPECT_TRUE(validate(pr_box()).ok());
  const Scenario s = Scenario::bell(2, 2, 2, 2);
  RationalVector e(s.dimension());
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int b = 0; b < 2; ++b) e[s.index(x, y, y, b)] = fraction(1, 2);
  const ValidationReport r = validate(Correlation(s, e));
  EXPECT_TRUE(r.nonnegative);
  EXPECT_TRUE(r.normalized);
  EXPECT_FALSE(r.no_signalling);
  EXPECT_TRUE(r.first_signalling.has_value());

  RationalVector neg = pr_box().entries;
  neg[0] = -1;
  EXPECT_FALSE(validate(Correlation(s, neg)).nonnegative);
  EXPECT_EQ(*validate(Correlation(s, neg)).first_negative, 0u);
}

TEST(Rationalize, RoundTripsNumericTables) {
  const NumericCorrelation n = to_numeric(mix({pr_box(), uniform_box(Scenario::bell(2, 2, 2, 2))}, {fraction(1, 3), fraction(2, 3)}));
  const Correlation back = rationalize(n);
  EXPECT_EQ(back.entries, mix({pr_box(), uniform_box(back.scenario)}, {fraction(1, 3), fraction(2, 3)}).entries);
}
