#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "instrumental/double_description.hpp"
#include "instrumental/rational.hpp"
#include "instrumental/scenario.hpp"

namespace instrumental {

/// coeffs · x <= bound
struct LinearInequality {
  RationalVector coeffs;
  Rational bound;

  bool satisfied_by(std::span<const Rational> x) const { return dot(coeffs, x) <= bound; }
  /// bound - coeffs·x; negative when violated.
  Rational slack(std::span<const Rational> x) const { return bound - dot(coeffs, x); }

  friend bool operator==(const LinearInequality&, const LinearInequality&) = default;
};

/// coeffs · x = rhs
struct LinearEquality {
  RationalVector coeffs;
  Rational rhs;

  friend bool operator==(const LinearEquality&, const LinearEquality&) = default;
};

/// Orders by coefficients, then bound.
bool lexicographic_less(const LinearInequality& lhs, const LinearInequality& rhs);

/// Scales by the positive rational that makes (coeffs ‖ bound) integral with
/// gcd 1. Throws std::invalid_argument for the zero inequality.
LinearInequality canonicalize(const LinearInequality& inequality);
/// Primitive integer row whose first nonzero coefficient is positive.
LinearEquality canonicalize(const LinearEquality& equality);

struct HPolytope {
  std::size_t dim = 0;
  std::vector<LinearInequality> inequalities;
  std::vector<LinearEquality> equalities;

  bool contains(std::span<const Rational> x) const;
};

struct VPolytope {
  std::size_t dim = 0;
  /// Sorted lexicographically, no duplicates.
  std::vector<RationalVector> vertices;

  static VPolytope from_points(std::vector<RationalVector> points);
};

struct PolytopeLimits {
  /// Intermediate double-description rays, and intermediate Fourier-Motzkin rows.
  std::size_t max_rays = 1'000'000;
};

/// Picks one representative per class of inequalities that agree on the affine
/// space cut out by `equalities`.
///
/// When the equalities are sums over disjoint coordinate blocks (probability
/// normalization), each block's coefficients are shifted by their most frequent
/// value (smallest on ties), which leaves positivity as -p <= 0. Otherwise the
/// coefficients on the equality pivot columns are eliminated.
class EqualityReducer {
 public:
  explicit EqualityReducer(const std::vector<LinearEquality>& equalities, std::size_t dim);

  LinearInequality normal_form(const LinearInequality& inequality) const;
  /// Reduced row echelon equalities as primitive integer rows.
  const std::vector<LinearEquality>& equalities() const { return canonical_; }
  bool block_structured() const { return !blocks_.empty() || rows_.empty(); }
  bool consistent() const { return consistent_; }
  /// Some equality violated by x, signed so that the returned inequality cuts x off.
  std::optional<LinearInequality> violated_by(std::span<const Rational> x) const;

 private:
  std::size_t dim_;
  std::vector<RationalVector> rows_;  // RREF, augmented with rhs
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<Rational> block_rhs_;
  std::vector<LinearEquality> canonical_;
  bool consistent_ = true;
};

/// Puts every inequality in the EqualityReducer normal form, canonicalizes,
/// drops duplicates and trivial rows, and sorts lexicographically.
HPolytope normalize(const HPolytope& h);

/// Facets and affine hull of conv(v) by double description on the homogenized
/// cone of valid inequalities.
HPolytope facet_enumeration(const VPolytope& v, const PolytopeLimits& limits = {}, DoubleDescriptionStats* stats = nullptr);

/// Vertices of a bounded H-polytope by double description. Throws
/// std::invalid_argument for unbounded polyhedra.
VPolytope vertex_enumeration(const HPolytope& h, const PolytopeLimits& limits = {});

/// Axial projection onto `keep` (output coordinate i is input coordinate keep[i]).
/// Equalities are used for substitution first; the remaining variables are
/// removed by Fourier-Motzkin elimination with LP redundancy removal after
/// every step.
HPolytope fourier_motzkin_project(const HPolytope& h, std::span<const std::size_t> keep, const PolytopeLimits& limits = {});

/// Drops inequalities implied by the others (exact LP), and turns inequalities
/// that hold with equality everywhere into equalities.
HPolytope remove_redundancy(const HPolytope& h);

struct MembershipCertificate {
  enum class Verdict { Inside, Outside };
  Verdict verdict = Verdict::Outside;
  /// Inside: convex weights over the V-polytope's vertices.
  RationalVector weights;
  /// Inside, for H-described sets: a feasible point of the lifted system.
  RationalVector witness;
  /// Outside: satisfied by the whole set, violated by the query.
  std::optional<LinearInequality> separator;

  bool inside() const { return verdict == Verdict::Inside; }
};

/// Exact LP feasibility of q = sum w_i v_i, w >= 0, sum w = 1. On failure the
/// separator is a facet of conv(v) (or a violated affine-hull equality).
MembershipCertificate membership(std::span<const Rational> q, const VPolytope& v);

struct Optimum {
  Rational value;
  RationalVector argmax;
};

/// Exact scan; ties go to the lexicographically smallest vertex.
Optimum maximize_linear(std::span<const Rational> coeffs, const Rational& constant, const VPolytope& v);
/// Exact simplex. With `lexicographic_ties` the lexicographically smallest
/// optimizer is returned (one extra LP per coordinate). Throws UnboundedError,
/// or std::domain_error for an empty polytope.
Optimum maximize_linear(std::span<const Rational> coeffs, const Rational& constant, const HPolytope& h,
                        bool lexicographic_ties = true);

/// Every point of h satisfies the inequality (exact LP).
bool implies(const HPolytope& h, const LinearInequality& inequality);
/// Mutual implication of all inequalities and equalities.
bool equivalent(const HPolytope& lhs, const HPolytope& rhs);

std::size_t affine_dimension(const HPolytope& h);
std::size_t affine_dimension(const VPolytope& v);

/// Positivity, per-(x,y) normalization and no-signalling equalities, with
/// linearly dependent equalities dropped.
HPolytope no_signalling_polytope(const Scenario& bell);

/// Distinct deterministic correlations.
VPolytope classical_polytope(const Scenario& s, std::size_t strategy_limit = kDefaultStrategyLimit);

std::string format_inequality(const LinearInequality& inequality, const std::vector<std::string>& names = {});

}  // namespace instrumental
