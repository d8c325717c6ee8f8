#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "instrumental/errors.hpp"
#include "instrumental/rational.hpp"

namespace instrumental {

enum class ScenarioKind { Bell, Instrumental, FInstrumental };

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(const std::string& text);

/// Input/output cardinalities of a two-party scenario plus, for the
/// instrumental variants, the table wiring Alice's (output, input) to Bob's input.
///
/// Coordinates are flattened with x outermost and b innermost:
///   Bell:                ((x*nY + y)*nA + a)*nB + b
///   (f-)Instrumental:    (x*nA + a)*nB + b
class Scenario {
 public:
  static Scenario bell(int nx, int ny, int na, int nb);
  static Scenario instrumental(int nx, int na, int nb);
  /// `wiring[a][x]` is Bob's input when Alice gets input x and outputs a.
  static Scenario f_instrumental(int nx, int ny, int na, int nb, std::vector<std::vector<int>> wiring);
  /// Binary f-instrumental scenario with N+1 inputs and y = (x - a) mod N.
  static Scenario chained(int n);

  ScenarioKind kind() const { return kind_; }
  bool is_bell() const { return kind_ == ScenarioKind::Bell; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int na() const { return na_; }
  int nb() const { return nb_; }

  /// Bob's input for (a, x); identity in a for the plain instrumental scenario.
  int wiring(int a, int x) const;
  const std::vector<std::vector<int>>& wiring_table() const { return wiring_; }

  std::size_t dimension() const;
  std::size_t index(int x, int a, int b) const;          // instrumental variants
  std::size_t index(int x, int y, int a, int b) const;   // Bell

  /// One block per (x, y) for Bell and per x otherwise; each block holds the
  /// contiguous coordinates that sum to one.
  std::size_t block_count() const;
  std::size_t block_size() const { return static_cast<std::size_t>(na_ * nb_); }

  /// The Bell scenario whose post-selection yields this (f-)instrumental scenario.
  Scenario parent_bell() const;

  std::string describe() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;

 private:
  Scenario(ScenarioKind kind, int nx, int ny, int na, int nb, std::vector<std::vector<int>> wiring);

  ScenarioKind kind_;
  int nx_;
  int ny_;
  int na_;
  int nb_;
  std::vector<std::vector<int>> wiring_;
};

/// Deterministic response tables: alpha maps x to a, beta maps Bob's input to b.
struct DeterministicStrategy {
  std::vector<int> alpha;
  std::vector<int> beta;

  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
  friend auto operator<=>(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

/// Probability table over a scenario's coordinates; T is Rational for exact
/// data and double for Born-rule output.
template <typename T>
struct BasicCorrelation {
  Scenario scenario;
  std::vector<T> entries;

  BasicCorrelation(Scenario s, std::vector<T> e) : scenario(std::move(s)), entries(std::move(e)) {
    if (entries.size() != scenario.dimension()) {
      throw ShapeError("correlation has " + std::to_string(entries.size()) + " entries, scenario " +
                       scenario.describe() + " needs " + std::to_string(scenario.dimension()));
    }
  }

  const T& at(int x, int a, int b) const { return entries[scenario.index(x, a, b)]; }
  const T& at(int x, int y, int a, int b) const { return entries[scenario.index(x, y, a, b)]; }
};

using Correlation = BasicCorrelation<Rational>;
using NumericCorrelation = BasicCorrelation<double>;

inline constexpr std::size_t kDefaultStrategyLimit = 10'000'000;

/// All deterministic strategies in lexicographic order of (alpha, beta).
std::vector<DeterministicStrategy> enumerate_deterministic_strategies(
    const Scenario& s, std::size_t limit = kDefaultStrategyLimit);

Correlation strategy_to_correlation(const DeterministicStrategy& d, const Scenario& s);

/// Distinct correlations of all deterministic strategies, sorted lexicographically.
std::vector<Correlation> deterministic_correlations(const Scenario& s, std::size_t limit = kDefaultStrategyLimit);

/// Coordinates of a Bell scenario kept by post-selection onto `target`, listed
/// in the target's flattening order.
std::vector<std::size_t> postselection_coordinates(const Scenario& bell, const Scenario& target);

template <typename T>
BasicCorrelation<T> postselect(const BasicCorrelation<T>& p, const Scenario& target);

/// Appends an input x = nX whose output is always `forced_output`, with Bob's
/// marginal copied from input x = 0.
template <typename T>
BasicCorrelation<T> dummy_input_extension(const BasicCorrelation<T>& p, int forced_output = 0);

struct ValidationReport {
  bool nonnegative = true;
  bool normalized = true;
  bool no_signalling = true;  // always true for non-Bell scenarios
  std::optional<std::size_t> first_negative;
  std::optional<std::size_t> first_unnormalized_block;
  /// A coordinate p(a b|x y) whose marginal disagrees with another input choice.
  std::optional<std::size_t> first_signalling;

  bool ok() const { return nonnegative && normalized && no_signalling; }
};

/// `tolerance` applies to doubles only; rational checks are exact.
template <typename T>
ValidationReport validate(const BasicCorrelation<T>& p, double tolerance = 1e-12);

/// p(ab|xy) = 1/2 if b = a + f(x,y) mod 2; binary outputs; f given as f[x][y].
Correlation wiring_box(int nx, int ny, const std::vector<std::vector<int>>& f);
/// The box b = a + x*y mod 2.
Correlation pr_box();
/// p(ab|..) = 1/(nA nB) everywhere.
Correlation uniform_box(const Scenario& s);

/// Convex combination sum_i w_i p_i; all correlations over the same scenario.
Correlation mix(const std::vector<Correlation>& parts, const std::vector<Rational>& weights);

NumericCorrelation to_numeric(const Correlation& p);

/// Entrywise continued-fraction rounding, then each block's largest entry is
/// adjusted so the block sums to exactly one. Throws std::domain_error when any
/// entry moves by more than `tolerance`.
Correlation rationalize(const NumericCorrelation& p, double tolerance = 1e-9, const Integer& max_denominator = 1000000);

}  // namespace instrumental
