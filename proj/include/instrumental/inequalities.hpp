#pragma once

#include <optional>
#include <string>
#include <vector>

#include "instrumental/polytope.hpp"
#include "instrumental/rational.hpp"
#include "instrumental/scenario.hpp"

namespace instrumental {

/// constant + coeffs · p over a scenario's coordinates.
struct LinearExpression {
  Scenario scenario;
  RationalVector coeffs;
  Rational constant;
  std::string label;

  LinearExpression(Scenario s, RationalVector c, Rational k = Rational(0), std::string name = {});
  /// The zero expression.
  explicit LinearExpression(Scenario s);

  Rational evaluate(const Correlation& p) const;
  double evaluate(const NumericCorrelation& p) const;
  /// expression <= bound, i.e. coeffs · p <= bound - constant.
  LinearInequality at_most(const Rational& bound) const;
};

enum class ExpressionKind { Bonet, Tilted, Chained, Chsh, TiltedChsh, ChainedBell };

/// A catalog entry: the family plus its parameter (alpha for the tilted
/// families, n for the chained ones).
struct ExpressionSpec {
  ExpressionKind kind = ExpressionKind::Bonet;
  Rational alpha = 1;
  int n = 2;

  static ExpressionSpec bonet() { return {}; }
  static ExpressionSpec tilted(Rational a) { return {ExpressionKind::Tilted, std::move(a), 2}; }
  static ExpressionSpec chained(int n) { return {ExpressionKind::Chained, Rational(1), n}; }
  static ExpressionSpec chsh() { return {ExpressionKind::Chsh, Rational(1), 2}; }
  static ExpressionSpec tilted_chsh(Rational a) { return {ExpressionKind::TiltedChsh, std::move(a), 2}; }
  static ExpressionSpec chained_bell(int n) { return {ExpressionKind::ChainedBell, Rational(1), n}; }

  /// Throws std::invalid_argument unless alpha >= 1 and n >= 2.
  void check() const;
  /// Expression over an (f-)instrumental scenario, as opposed to a Bell one.
  bool instrumental() const;
  std::string label() const;
};

std::string to_string(ExpressionKind kind);
/// "bonet", "tilted", "chained", "chsh", "tilted_chsh", "chained_bell".
ExpressionKind parse_expression_kind(const std::string& text);

/// Scenario the catalog expression lives on.
Scenario expression_scenario(const ExpressionSpec& spec);
LinearExpression catalog(const ExpressionSpec& spec);

/// sum_ab (-1)^(a+b) p(ab|xy) over a binary Bell scenario.
LinearExpression correlator(const Scenario& bell, int x, int y);

/// Pearl's instrumental expressions sum_b p(a, b | x_b), one per output a and
/// per non-constant choice of inputs b -> x_b; each is at most 1 classically
/// and for every no-signalling box. For binary b this is p(a0|x) + p(a1|x'),
/// x != x'.
std::vector<LinearExpression> pearl_expressions(const Scenario& s);

/// Moves each (x, a, b) coefficient onto the Bell coordinate (x, wiring(a, x), a, b).
LinearExpression lift_to_bell(const LinearExpression& e);

/// rational + coefficient * sqrt(radicand)  or  rational + coefficient * cos(pi / (2 n)),
/// with a double shadow.
struct SymbolicValue {
  enum class Irrational { None, Sqrt, CosPiOver2N };
  Rational rational;
  Rational coefficient;
  Irrational irrational = Irrational::None;
  Integer radicand = 1;  // square-free, Sqrt only
  int n = 1;             // CosPiOver2N only

  static SymbolicValue exact(Rational r);
  /// r + c * sqrt(q) for rational q >= 0, with square factors pulled out.
  static SymbolicValue with_sqrt(Rational r, Rational c, const Rational& q);
  static SymbolicValue with_cos(Rational r, Rational c, int n);

  double approx() const;
  std::string to_string() const;
};

struct BoundsTriple {
  std::string label;
  Rational classical;
  SymbolicValue quantum;
  Rational gpt;
  /// A differing closed form that appears in the literature for this family,
  /// kept for reporting only.
  std::optional<SymbolicValue> quantum_literature;
};

BoundsTriple bounds(const ExpressionSpec& spec);

/// Right-hand side of the lifting identity for bonet, tilted or chained, as an
/// expression over the parent Bell scenario (CHSH-type correlators, one
/// dummy-input term and a constant).
LinearExpression lifting_identity_rhs(const ExpressionSpec& spec);

/// lift(catalog(spec))(p) - lifting_identity_rhs(spec)(p) for a Bell
/// correlation p. Throws SignallingError when p is not normalized and
/// no-signalling, and ShapeError when p is not over the parent scenario.
Rational identity_check(const ExpressionSpec& spec, const Correlation& p);

/// Coordinate permutation: coordinate i maps to image[i].
using Permutation = std::vector<std::size_t>;

Permutation compose(const Permutation& outer, const Permutation& inner);

class SymmetryGroup {
 public:
  /// Input permutations, joint relabellings of a (which also reshuffle Bob's
  /// response blocks, since y = a) and relabellings of b for each a.
  static SymmetryGroup instrumental(const Scenario& s);
  /// Input permutations, output relabellings for each input, and the party swap
  /// when both sides have equal cardinalities.
  static SymmetryGroup bell(const Scenario& s);

  const Scenario& scenario() const { return scenario_; }
  const std::vector<Permutation>& generators() const { return generators_; }
  /// coeffs'[g[i]] = coeffs[i]; the bound is unchanged.
  LinearInequality apply(const Permutation& g, const LinearInequality& ineq) const;

 private:
  SymmetryGroup(Scenario s, std::vector<Permutation> gens) : scenario_(std::move(s)), generators_(std::move(gens)) {}
  Scenario scenario_;
  std::vector<Permutation> generators_;
};

/// Orbit of an inequality in normal form modulo normalization; every member
/// is mapped to the normal form. `limit` bounds the orbit size.
std::vector<LinearInequality> orbit(const LinearInequality& ineq, const SymmetryGroup& g, std::size_t limit = 1'000'000);

/// A group element taking `from` to `to` (both compared in normal form).
std::optional<Permutation> find_relabelling(const LinearInequality& from, const LinearInequality& to,
                                            const SymmetryGroup& g, std::size_t limit = 1'000'000);

enum class OrbitTag { Positivity, Pearl, Bonet, Unknown };
std::string to_string(OrbitTag tag);

struct FacetOrbit {
  OrbitTag tag = OrbitTag::Unknown;
  LinearInequality representative;  // lexicographically smallest member
  std::vector<std::size_t> members;  // indices into the classified list
};

/// Normal form (modulo normalization) of the inequality tagged Bonet, placed
/// on inputs 0..2 of a binary instrumental scenario with nX >= 3.
std::optional<LinearInequality> bonet_facet(const Scenario& s);

/// Partitions `facets` into orbits under g, sorted by representative. Tags
/// come from matching the catalog representatives.
std::vector<FacetOrbit> facet_orbit_classify(const std::vector<LinearInequality>& facets, const SymmetryGroup& g);

/// Rewrites an f-instrumental expression whose wiring permutes a for each x
/// in the plain instrumental frame a' = wiring(a, x). Plain instrumental input
/// is returned unchanged. Throws ShapeError otherwise.
LinearExpression to_instrumental_frame(const LinearExpression& e);

enum class Theory { Classical, NoSignalling };
std::string to_string(Theory theory);
Theory parse_theory(const std::string& text);

/// Whether p(ab|x) = p'(ab|x, y = wiring(a, x)) for some classical (resp.
/// no-signalling) Bell correlation p'. Classical certificates carry weights
/// over the post-selected deterministic Bell vertices; no-signalling ones carry
/// the full Bell witness. Outside, the separator is an inequality over the
/// instrumental coordinates.
MembershipCertificate extension_membership(const Correlation& p, Theory theory);

/// Post-selected deterministic Bell strategies, deduplicated.
VPolytope postselected_classical_vertices(const Scenario& s);

}  // namespace instrumental
