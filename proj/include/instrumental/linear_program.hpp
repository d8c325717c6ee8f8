#pragma once

#include <vector>

#include "instrumental/rational.hpp"

namespace instrumental {

/// maximize objective·x  subject to  le_rows·x <= le_rhs,  eq_rows·x = eq_rhs,
/// x_j >= 0 where nonnegative[j] (free otherwise).
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<RationalVector> le_rows;
  RationalVector le_rhs;
  std::vector<RationalVector> eq_rows;
  RationalVector eq_rhs;
  std::vector<bool> nonnegative;  // empty means all free
  RationalVector objective;       // empty means pure feasibility

  explicit LinearProgram(std::size_t n = 0) : num_vars(n) {}

  void add_le(RationalVector row, Rational rhs);
  void add_eq(RationalVector row, Rational rhs);
  void set_all_nonnegative() { nonnegative.assign(num_vars, true); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  RationalVector x;
  /// Optimal: dual prices (eq free, le >= 0) with objective = y·rhs.
  /// Infeasible: a Farkas ray with y_eq·A_eq + y_le·A_le >= 0 on nonnegative
  /// variables, = 0 on free variables, y_le >= 0 and y·rhs < 0.
  RationalVector eq_duals;
  RationalVector le_duals;
  std::size_t pivots = 0;
};

/// Dense two-phase primal simplex over exact rationals with Bland's rule.
LpResult solve(const LinearProgram& lp);

}  // namespace instrumental
