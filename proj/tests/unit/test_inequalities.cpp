#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "instrumental/inequalities.hpp"
#include "instrumental/sampling.hpp"

using namespace instrumental;

namespace {

// Classical maximum by direct enumeration of response functions.
Rational classical_max_oracle(const LinearExpression& e) {
  const Scenario& s = e.scenario;
  std::optional<Rational> best;
  if (s.is_bell()) {
    const int nx = s.nx(), ny = s.ny();
    for (long ca = 0; ca < (1L << nx); ++ca)
      for (long cb = 0; cb < (1L << ny); ++cb) {
        Rational v = e.constant;
        for (int x = 0; x < nx; ++x)
          for (int y = 0; y < ny; ++y) v += e.coeffs[s.index(x, y, (ca >> x) & 1, (cb >> y) & 1)];
        if (!best || v > *best) best = v;
      }
    return *best;
  }
  const int nx = s.nx(), ny = s.ny();
  for (long ca = 0; ca < (1L << nx); ++ca)
    for (long cb = 0; cb < (1L << ny); ++cb) {
      Rational v = e.constant;
      for (int x = 0; x < nx; ++x) {
        const int a = static_cast<int>((ca >> x) & 1);
        v += e.coeffs[s.index(x, a, static_cast<int>((cb >> s.wiring(a, x)) & 1))];
      }
      if (!best || v > *best) best = v;
    }
  return *best;
}

Rational gpt_max(const LinearExpression& e) {
  const LinearExpression bell = e.scenario.is_bell() ? e : lift_to_bell(e);
  return maximize_linear(bell.coeffs, bell.constant, no_signalling_polytope(bell.scenario), false).value;
}

std::vector<ExpressionSpec> identity_specs() {
  return {ExpressionSpec::bonet(),      ExpressionSpec::tilted(1),  ExpressionSpec::tilted(2),
          ExpressionSpec::tilted(5),    ExpressionSpec::tilted(fraction(3, 2)), ExpressionSpec::chained(2),
          ExpressionSpec::chained(3),   ExpressionSpec::chained(4)};
}

}  // namespace

TEST(Catalog, PearlCounts) {
  EXPECT_EQ(pearl_expressions(Scenario::instrumental(2, 2, 2)).size(), 4u);
  EXPECT_EQ(pearl_expressions(Scenario::instrumental(3, 2, 2)).size(), 12u);
  EXPECT_EQ(pearl_expressions(Scenario::instrumental(2, 3, 3)).size(), 18u);
}

TEST(Catalog, PearlHoldsForNoSignallingBoxes) {
  std::mt19937_64 rng(8);
  const Scenario ins = Scenario::instrumental(3, 2, 2);
  const auto pearls = pearl_expressions(ins);
  for (const auto& e : pearls) {
    EXPECT_EQ(classical_max_oracle(e), 1);
    EXPECT_EQ(gpt_max(e), 1);
  }
  for (int t = 0; t < 40; ++t) {
    const Correlation q = postselect(sample_nosignalling(ins.parent_bell(), rng), ins);
    for (const auto& e : pearls) EXPECT_LE(e.evaluate(q), 1);
  }
}

TEST(Catalog, ChshOfPrBox) {
  EXPECT_EQ(catalog(ExpressionSpec::chsh()).evaluate(pr_box()), 4);
  EXPECT_EQ(correlator(Scenario::bell(2, 2, 2, 2), 1, 1).evaluate(pr_box()), -1);
}

TEST(Catalog, TiltedOneIsBonet) {
  std::mt19937_64 rng(2);
  const LinearExpression b = catalog(ExpressionSpec::bonet());
  const LinearExpression t = catalog(ExpressionSpec::tilted(1));
  for (int i = 0; i < 30; ++i) {
    const Correlation q = sample_classical(b.scenario, rng);
    EXPECT_EQ(b.evaluate(q), t.evaluate(q));
  }
}

TEST(Catalog, ChainedTwoIsBonetUpToRelabelling) {
  const LinearExpression c = to_instrumental_frame(catalog(ExpressionSpec::chained(2)));
  const LinearExpression b = catalog(ExpressionSpec::bonet());
  ASSERT_EQ(c.scenario, b.scenario);
  const auto g = SymmetryGroup::instrumental(b.scenario);
  const auto perm = find_relabelling(c.at_most(2), b.at_most(2), g);
  EXPECT_TRUE(perm.has_value());
}

TEST(Catalog, LiftedBonetCoordinates) {
  const LinearExpression e = catalog(ExpressionSpec::bonet());
  const LinearExpression l = lift_to_bell(e);
  const Scenario& bell = l.scenario;
  EXPECT_EQ(bell, Scenario::bell(3, 2, 2, 2));
  Rational total_abs = 0;
  for (const auto& c : l.coeffs) total_abs += abs(c);
  Rational orig_abs = 0;
  for (const auto& c : e.coeffs) orig_abs += abs(c);
  EXPECT_EQ(total_abs, orig_abs);
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        EXPECT_EQ(l.coeffs[bell.index(x, a, a, b)], e.coeffs[e.scenario.index(x, a, b)]);
        EXPECT_EQ(l.coeffs[bell.index(x, 1 - a, a, b)], 0);
      }
}

TEST(Catalog, LiftCommutesWithEvaluation) {
  std::mt19937_64 rng(6);
  for (const auto& spec : identity_specs()) {
    const LinearExpression e = catalog(spec);
    const LinearExpression l = lift_to_bell(e);
    for (int t = 0; t < 40; ++t) {
      const Correlation p = sample_nosignalling(l.scenario, rng);
      EXPECT_EQ(l.evaluate(p), e.evaluate(postselect(p, e.scenario))) << spec.label();
    }
  }
}

TEST(Bounds, ClosedFormsAgainstOracles) {
  std::vector<ExpressionSpec> specs = identity_specs();
  specs.push_back(ExpressionSpec::chained(5));
  specs.push_back(ExpressionSpec::chsh());
  specs.push_back(ExpressionSpec::tilted_chsh(3));
  specs.push_back(ExpressionSpec::chained_bell(3));
  for (const auto& spec : specs) {
    const BoundsTriple b = bounds(spec);
    const LinearExpression e = catalog(spec);
    EXPECT_EQ(b.classical, classical_max_oracle(e)) << spec.label();
    EXPECT_EQ(b.gpt, gpt_max(e)) << spec.label();
  }
}

TEST(Bounds, SymbolicQuantumValues) {
  const BoundsTriple b = bounds(ExpressionSpec::bonet());
  EXPECT_EQ(b.quantum.to_string(), "3/2 + 1/2*sqrt(2)");
  EXPECT_NEAR(b.quantum.approx(), (3 + std::sqrt(2.0)) / 2, 1e-15);
  const BoundsTriple c = bounds(ExpressionSpec::chained(3));
  EXPECT_EQ(c.quantum.to_string(), "2 + 3/2*cos(pi/6)");
  EXPECT_NEAR(c.quantum.approx(), 3 * (0.5 + 0.5 * std::cos(M_PI / 6)) + 0.5, 1e-12);
  const BoundsTriple t = bounds(ExpressionSpec::tilted(2));
  EXPECT_NEAR(t.quantum.approx(), (4 + std::sqrt(5.0)) / 2, 1e-12);
  ASSERT_TRUE(t.quantum_literature.has_value());
  EXPECT_NEAR(t.quantum_literature->approx(), (3 + std::sqrt(5.0)) / 2, 1e-12);
  EXPECT_EQ(SymbolicValue::with_sqrt(0, 1, 8).to_string(), "2*sqrt(2)");
  EXPECT_EQ(SymbolicValue::with_sqrt(1, 1, fraction(1, 4)).to_string(), "3/2");
  EXPECT_EQ(bounds(ExpressionSpec::chsh()).quantum.to_string(), "2*sqrt(2)");
}

TEST(Bounds, RejectsBadParameters) {
  EXPECT_THROW(bounds(ExpressionSpec::tilted(fraction(1, 2))), std::invalid_argument);
  EXPECT_THROW(bounds(ExpressionSpec::chained(1)), std::invalid_argument);
  EXPECT_THROW(parse_expression_kind("nonsense"), std::invalid_argument);
  EXPECT_EQ(parse_expression_kind("tilted_chsh"), ExpressionKind::TiltedChsh);
}

TEST(Identity, ZeroResidualOnSampledBoxes) {
  std::mt19937_64 rng(12);
  for (const auto& spec : identity_specs()) {
    const Scenario bell = expression_scenario(spec).parent_bell();
    for (int t = 0; t < 60; ++t) EXPECT_EQ(identity_check(spec, sample_nosignalling(bell, rng)), 0) << spec.label();
  }
}

TEST(Identity, SignallingAndShapeErrors) {
  const Scenario bell = Scenario::bell(3, 2, 2, 2);
  RationalVector e(bell.dimension());
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 2; ++y)
      for (int b = 0; b < 2; ++b) e[bell.index(x, y, y, b)] = fraction(1, 2);
  EXPECT_THROW(identity_check(ExpressionSpec::bonet(), Correlation(bell, e)), SignallingError);
  EXPECT_THROW(identity_check(ExpressionSpec::bonet(), pr_box()), ShapeError);
}

TEST(Symmetry, GeneratorsArePermutations) {
  for (const auto& g : {SymmetryGroup::instrumental(Scenario::instrumental(3, 2, 2)),
                        SymmetryGroup::bell(Scenario::bell(2, 2, 2, 2))}) {
    for (const auto& p : g.generators()) {
      std::set<std::size_t> image(p.begin(), p.end());
      EXPECT_EQ(image.size(), g.scenario().dimension());
    }
  }
  const Permutation a{1, 2, 0}, b{2, 0, 1};
  EXPECT_EQ(compose(a, b), (Permutation{0, 1, 2}));
}

TEST(Symmetry, OrbitIsClosed) {
  const Scenario s = Scenario::instrumental(3, 2, 2);
  const auto g = SymmetryGroup::instrumental(s);
  const auto bonet = bonet_facet(s);
  ASSERT_TRUE(bonet.has_value());
  const auto orb = orbit(*bonet, g);
  ASSERT_GT(orb.size(), 1u);
  std::set<std::vector<std::string>> ref;
  auto key = [](const LinearInequality& f) {
    std::vector<std::string> k;
    for (const auto& c : f.coeffs) k.push_back(to_string(c));
    k.push_back(to_string(f.bound));
    return k;
  };
  for (const auto& f : orb) ref.insert(key(f));
  for (const auto& f : orb) {
    std::set<std::vector<std::string>> again;
    for (const auto& h : orbit(f, g)) again.insert(key(h));
    EXPECT_EQ(again, ref);
  }
  EXPECT_THROW(orbit(*bonet, g, 1), CapacityError);
}

TEST(Symmetry, BonetOrbitIsValidAndTight) {
  const Scenario s = Scenario::instrumental(3, 2, 2);
  const VPolytope v = classical_polytope(s);
  for (const auto& f : orbit(*bonet_facet(s), SymmetryGroup::instrumental(s))) {
    int tight = 0;
    for (const auto& p : v.vertices) {
      EXPECT_TRUE(f.satisfied_by(p));
      tight += f.slack(p) == 0;
    }
    EXPECT_GE(tight, 9);  // facet of a 9-dimensional polytope
  }
}

TEST(Classify, InstrumentalThreeInputs) {
  const Scenario s = Scenario::instrumental(3, 2, 2);
  const HPolytope h = facet_enumeration(classical_polytope(s));
  const auto orbits = facet_orbit_classify(h.inequalities, SymmetryGroup::instrumental(s));
  std::set<OrbitTag> tags;
  std::size_t covered = 0;
  for (const auto& o : orbits) {
    tags.insert(o.tag);
    covered += o.members.size();
  }
  EXPECT_EQ(covered, h.inequalities.size());
  EXPECT_EQ(tags, (std::set<OrbitTag>{OrbitTag::Positivity, OrbitTag::Pearl, OrbitTag::Bonet}));
  EXPECT_EQ(to_string(OrbitTag::Bonet), "bonet");
}

TEST(Frame, PlainInstrumentalUnchanged) {
  const LinearExpression e = catalog(ExpressionSpec::bonet());
  EXPECT_EQ(to_instrumental_frame(e).coeffs, e.coeffs);
  EXPECT_THROW(to_instrumental_frame(catalog(ExpressionSpec::chsh())), ShapeError);
}

TEST(Extension, PrBoxHasClassicalModel) {
  const Correlation q = postselect(pr_box(), Scenario::instrumental(2, 2, 2));
  const MembershipCertificate m = extension_membership(q, Theory::Classical);
  EXPECT_TRUE(m.inside());
  EXPECT_TRUE(extension_membership(q, Theory::NoSignalling).inside());
}

TEST(Extension, GptBoxOutsideClassical) {
  // b = a + f(x, a) with f(0, .) = 0, f(1, a) = a, f(2, a) = a + 1 reaches 5/2.
  const Correlation box = wiring_box(3, 2, {{0, 0}, {0, 1}, {1, 0}});
  const Scenario s = Scenario::instrumental(3, 2, 2);
  const Correlation q = postselect(box, s);
  EXPECT_EQ(catalog(ExpressionSpec::bonet()).evaluate(q), fraction(5, 2));
  const MembershipCertificate c = extension_membership(q, Theory::Classical);
  ASSERT_FALSE(c.inside());
  ASSERT_TRUE(c.separator.has_value());
  EXPECT_FALSE(c.separator->satisfied_by(q.entries));
  for (const auto& v : classical_polytope(s).vertices) EXPECT_TRUE(c.separator->satisfied_by(v));
  const MembershipCertificate n = extension_membership(q, Theory::NoSignalling);
  EXPECT_TRUE(n.inside());
  ASSERT_EQ(n.witness.size(), s.parent_bell().dimension());
  const Correlation w(s.parent_bell(), n.witness);
  EXPECT_TRUE(validate(w).ok());
  EXPECT_EQ(postselect(w, s).entries, q.entries);
}

TEST(Extension, PearlViolationHasNoNoSignallingModel) {
  // p(00|0) = p(01|1) = 1 gives 2 on the Pearl expression p(00|0) + p(01|1).
  const Scenario s = Scenario::instrumental(2, 2, 2);
  RationalVector e(s.dimension());
  e[s.index(0, 0, 0)] = 1;
  e[s.index(1, 0, 1)] = 1;
  const Correlation q(s, e);
  const MembershipCertificate m = extension_membership(q, Theory::NoSignalling);
  ASSERT_FALSE(m.inside());
  ASSERT_TRUE(m.separator.has_value());
  EXPECT_FALSE(m.separator->satisfied_by(q.entries));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t)
    EXPECT_TRUE(m.separator->satisfied_by(postselect(sample_nosignalling(s.parent_bell(), rng), s).entries));
}

TEST(Extension, GptBoxSeparatorIsInBonetOrbit) {
  const Scenario s = Scenario::instrumental(3, 2, 2);
  const Correlation q = postselect(wiring_box(3, 2, {{0, 0}, {0, 1}, {1, 0}}), s);
  const MembershipCertificate m = membership(q.entries, classical_polytope(s));
  ASSERT_FALSE(m.inside());
  const auto g = SymmetryGroup::instrumental(s);
  EXPECT_TRUE(find_relabelling(*m.separator, *bonet_facet(s), g).has_value());
}

TEST(Maximize, CatalogExamples) {
  const Scenario s = Scenario::instrumental(3, 2, 2);
  const LinearExpression b = catalog(ExpressionSpec::bonet());
  EXPECT_EQ(maximize_linear(b.coeffs, b.constant, classical_polytope(s)).value, 2);
  const Scenario bell = s.parent_bell();
  const HPolytope gpt = fourier_motzkin_project(no_signalling_polytope(bell), postselection_coordinates(bell, s));
  EXPECT_EQ(maximize_linear(b.coeffs, b.constant, gpt).value, fraction(5, 2));
  const LinearExpression chsh = catalog(ExpressionSpec::chsh());
  EXPECT_EQ(maximize_linear(chsh.coeffs, chsh.constant, classical_polytope(chsh.scenario)).value, 2);
  // Every vertex of the projected no-signalling polytope obeys Pearl.
  for (const auto& v : vertex_enumeration(gpt).vertices)
    for (const auto& e : pearl_expressions(s)) EXPECT_LE(e.evaluate(Correlation(s, v)), 1);
}
