#include "instrumental/linear_program.hpp"

#include <stdexcept>

namespace instrumental {

void LinearProgram::add_le(RationalVector row, Rational rhs) {
  if (row.size() != num_vars) throw std::invalid_argument("LP row width mismatch");
  le_rows.push_back(std::move(row));
  le_rhs.push_back(std::move(rhs));
}

void LinearProgram::add_eq(RationalVector row, Rational rhs) {
  if (row.size() != num_vars) throw std::invalid_argument("LP row width mismatch");
  eq_rows.push_back(std::move(row));
  eq_rhs.push_back(std::move(rhs));
}

namespace {

enum class ColumnRole { Positive, Negative, Slack, Artificial };

struct Column {
  ColumnRole role;
  std::size_t source;  // variable index, or row index for slacks/artificials
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows, RationalVector(cols + 1)), basis_(rows), width_(cols) {}

  RationalVector& row(std::size_t i) { return rows_[i]; }
  Rational& rhs(std::size_t i) { return rows_[i][width_]; }
  std::size_t height() const { return rows_.size(); }
  std::size_t width() const { return width_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c, RationalVector& reduced) {
    RationalVector& pr = rows_[r];
    const Rational inv = 1 / pr[c];
    support_.clear();
    for (std::size_t j = 0; j <= width_; ++j) {
      if (sgn(pr[j]) != 0) {
        pr[j] *= inv;
        support_.push_back(j);
      }
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r || sgn(rows_[i][c]) == 0) continue;
      eliminate(rows_[i], pr, c);
    }
    if (sgn(reduced[c]) != 0) eliminate(reduced, pr, c);
    basis_[r] = c;
  }

 private:
  void eliminate(RationalVector& target, const RationalVector& pr, std::size_t c) {
    const Rational factor = target[c];
    for (std::size_t j : support_) target[j] -= factor * pr[j];
  }

  std::vector<RationalVector> rows_;
  std::vector<std::size_t> basis_;
  std::size_t width_;
  std::vector<std::size_t> support_;
};

// Runs Bland's rule on `reduced` (length width()+1, last entry is -value).
// Returns false on unboundedness.
bool run_simplex(Tableau& t, RationalVector& reduced, const std::vector<bool>& may_enter, std::size_t& pivots) {
  while (true) {
    std::size_t entering = t.width();
    for (std::size_t j = 0; j < t.width(); ++j) {
      if (may_enter[j] && sgn(reduced[j]) > 0) {
        entering = j;
        break;
      }
    }
    if (entering == t.width()) return true;
    std::size_t leaving = t.height();
    Rational best_ratio;
    for (std::size_t i = 0; i < t.height(); ++i) {
      const Rational& a = t.row(i)[entering];
      if (sgn(a) <= 0) continue;
      Rational ratio = t.rhs(i) / a;
      if (leaving == t.height() || ratio < best_ratio || (ratio == best_ratio && t.basis()[i] < t.basis()[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving == t.height()) return false;
    t.pivot(leaving, entering, reduced);
    ++pivots;
  }
}

}  // namespace

LpResult solve(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars;
  const std::size_t m_eq = lp.eq_rows.size();
  const std::size_t m_le = lp.le_rows.size();
  const std::size_t m = m_eq + m_le;
  if (!lp.objective.empty() && lp.objective.size() != n) throw std::invalid_argument("objective width mismatch");
  if (!lp.nonnegative.empty() && lp.nonnegative.size() != n) throw std::invalid_argument("sign vector width mismatch");
  if (lp.eq_rhs.size() != m_eq || lp.le_rhs.size() != m_le) throw std::invalid_argument("rhs length mismatch");

  std::vector<Column> cols;
  std::vector<std::size_t> pos_col(n), neg_col(n, SIZE_MAX);
  for (std::size_t j = 0; j < n; ++j) {
    pos_col[j] = cols.size();
    cols.push_back({ColumnRole::Positive, j});
    if (lp.nonnegative.empty() || !lp.nonnegative[j]) {
      neg_col[j] = cols.size();
      cols.push_back({ColumnRole::Negative, j});
    }
  }
  std::vector<int> sign(m, 1);
  auto row_rhs = [&](std::size_t i) -> const Rational& { return i < m_eq ? lp.eq_rhs[i] : lp.le_rhs[i - m_eq]; };
  auto row_coeffs = [&](std::size_t i) -> const RationalVector& { return i < m_eq ? lp.eq_rows[i] : lp.le_rows[i - m_eq]; };
  for (std::size_t i = 0; i < m; ++i) {
    if (row_coeffs(i).size() != n) throw std::invalid_argument("LP row width mismatch");
    if (sgn(row_rhs(i)) < 0) sign[i] = -1;
  }
  // Slack columns for <= rows; a row whose slack enters with +1 starts with the
  // slack basic, every other row gets an artificial.
  std::vector<std::size_t> initial(m);
  std::vector<std::size_t> slack_col(m, SIZE_MAX);
  for (std::size_t i = m_eq; i < m; ++i) {
    slack_col[i] = cols.size();
    cols.push_back({ColumnRole::Slack, i});
  }
  std::vector<bool> has_artificial(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (i >= m_eq && sign[i] > 0) {
      initial[i] = slack_col[i];
    } else {
      initial[i] = cols.size();
      cols.push_back({ColumnRole::Artificial, i});
      has_artificial[i] = true;
    }
  }

  Tableau t(m, cols.size());
  for (std::size_t i = 0; i < m; ++i) {
    RationalVector& r = t.row(i);
    const RationalVector& src = row_coeffs(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(src[j]) == 0) continue;
      r[pos_col[j]] = sign[i] > 0 ? src[j] : Rational(-src[j]);
      if (neg_col[j] != SIZE_MAX) r[neg_col[j]] = -r[pos_col[j]];
    }
    if (slack_col[i] != SIZE_MAX) r[slack_col[i]] = sign[i];
    if (has_artificial[i]) r[initial[i]] = 1;
    t.rhs(i) = sign[i] > 0 ? row_rhs(i) : Rational(-row_rhs(i));
    t.basis()[i] = initial[i];
  }

  LpResult result;
  const std::size_t width = cols.size();

  // Phase 1: maximize -sum(artificials).
  RationalVector reduced(width + 1);
  std::vector<Rational> phase1_cost(width, Rational(0));
  for (std::size_t j = 0; j < width; ++j) {
    if (cols[j].role == ColumnRole::Artificial) phase1_cost[j] = -1;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!has_artificial[i]) continue;
    const RationalVector& r = t.row(i);
    for (std::size_t j = 0; j <= width; ++j) {
      if (sgn(r[j]) != 0) reduced[j] += r[j];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (has_artificial[i]) reduced[initial[i]] = 0;
  }
  std::vector<bool> may_enter(width, true);
  run_simplex(t, reduced, may_enter, result.pivots);

  auto read_duals = [&](const std::vector<Rational>& cost) {
    // y_i = c(initial_i) - reduced(initial_i), mapped back through the row sign.
    RationalVector y(m);
    for (std::size_t i = 0; i < m; ++i) {
      y[i] = cost[initial[i]] - reduced[initial[i]];
      if (sign[i] < 0) y[i] = -y[i];
    }
    result.eq_duals.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m_eq));
    result.le_duals.assign(y.begin() + static_cast<std::ptrdiff_t>(m_eq), y.end());
  };

  // reduced[width] holds sum of artificial values (phase-1 objective is its negation).
  if (sgn(reduced[width]) != 0) {
    result.status = LpStatus::Infeasible;
    // Optimal phase-1 duals satisfy y·A >= 0 column-wise and y·b = -sum(art) < 0.
    read_duals(phase1_cost);
    return result;
  }

  // Drive zero-valued artificials out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (cols[t.basis()[i]].role != ColumnRole::Artificial) continue;
    for (std::size_t j = 0; j < width; ++j) {
      if (cols[j].role != ColumnRole::Artificial && sgn(t.row(i)[j]) != 0) {
        t.pivot(i, j, reduced);
        ++result.pivots;
        break;
      }
    }
  }

  // Phase 2.
  std::vector<Rational> cost(width, Rational(0));
  if (!lp.objective.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      cost[pos_col[j]] = lp.objective[j];
      if (neg_col[j] != SIZE_MAX) cost[neg_col[j]] = -lp.objective[j];
    }
  }
  for (std::size_t j = 0; j < width; ++j) may_enter[j] = cols[j].role != ColumnRole::Artificial;
  reduced.assign(width + 1, Rational(0));
  for (std::size_t j = 0; j < width; ++j) reduced[j] = cost[j];
  for (std::size_t i = 0; i < m; ++i) {
    const Rational& cb = cost[t.basis()[i]];
    if (sgn(cb) == 0) continue;
    const RationalVector& r = t.row(i);
    for (std::size_t j = 0; j <= width; ++j) {
      if (sgn(r[j]) != 0) reduced[j] -= cb * r[j];
    }
  }
  if (!run_simplex(t, reduced, may_enter, result.pivots)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    const Column& c = cols[t.basis()[i]];
    if (c.role == ColumnRole::Positive) result.x[c.source] += t.rhs(i);
    if (c.role == ColumnRole::Negative) result.x[c.source] -= t.rhs(i);
  }
  result.value = lp.objective.empty() ? Rational(0) : dot(lp.objective, result.x);
  read_duals(cost);
  return result;
}

}  // namespace instrumental
