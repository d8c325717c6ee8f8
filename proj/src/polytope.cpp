#include "instrumental/polytope.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "instrumental/errors.hpp"
#include "instrumental/linear_program.hpp"

namespace instrumental {

namespace {

bool all_zero(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

struct InequalityLess {
  bool operator()(const LinearInequality& a, const LinearInequality& b) const { return lexicographic_less(a, b); }
};

/// Rows of `rows` that are linearly independent, greedily in order.
std::vector<std::size_t> independent_rows(const std::vector<RationalVector>& rows) {
  std::vector<std::size_t> picked;
  std::vector<RationalVector> echelon;
  std::vector<std::size_t> pivot_of;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    RationalVector v = rows[i];
    for (std::size_t k = 0; k < echelon.size(); ++k) {
      const std::size_t p = pivot_of[k];
      if (sgn(v[p]) == 0) continue;
      const Rational f = v[p] / echelon[k][p];
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (sgn(echelon[k][j]) != 0) v[j] -= f * echelon[k][j];
      }
    }
    auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return sgn(x) != 0; });
    if (it == v.end()) continue;
    pivot_of.push_back(static_cast<std::size_t>(it - v.begin()));
    echelon.push_back(std::move(v));
    picked.push_back(i);
  }
  return picked;
}

std::size_t rank_of(std::vector<RationalVector> rows) { return row_reduce(rows).size(); }

/// LP over h with "-c x_j <= 0" rows turned into sign constraints.
LinearProgram lp_from(const HPolytope& h) {
  LinearProgram lp(h.dim);
  lp.nonnegative.assign(h.dim, false);
  for (const auto& ineq : h.inequalities) {
    std::size_t nonzero = 0, where = 0;
    for (std::size_t j = 0; j < h.dim; ++j) {
      if (sgn(ineq.coeffs[j]) != 0) {
        ++nonzero;
        where = j;
      }
    }
    if (nonzero == 1 && sgn(ineq.coeffs[where]) < 0 && sgn(ineq.bound) == 0) {
      lp.nonnegative[where] = true;
    } else {
      lp.add_le(ineq.coeffs, ineq.bound);
    }
  }
  for (const auto& eq : h.equalities) lp.add_eq(eq.coeffs, eq.rhs);
  return lp;
}

HPolytope empty_polytope(std::size_t dim) {
  HPolytope h;
  h.dim = dim;
  h.inequalities.push_back({RationalVector(dim, Rational(0)), Rational(-1)});
  return h;
}

}  // namespace

bool lexicographic_less(const LinearInequality& lhs, const LinearInequality& rhs) {
  int c = compare(lhs.coeffs, rhs.coeffs);
  if (c != 0) return c < 0;
  return lhs.bound < rhs.bound;
}

LinearInequality canonicalize(const LinearInequality& inequality) {
  RationalVector all = inequality.coeffs;
  all.push_back(inequality.bound);
  if (all_zero(all)) throw std::invalid_argument("cannot canonicalize the zero inequality");
  make_primitive(all);
  LinearInequality out;
  out.bound = all.back();
  all.pop_back();
  out.coeffs = std::move(all);
  return out;
}

LinearEquality canonicalize(const LinearEquality& equality) {
  RationalVector all = equality.coeffs;
  all.push_back(equality.rhs);
  if (all_zero(all)) throw std::invalid_argument("cannot canonicalize the zero equality");
  make_primitive(all);
  auto first = std::find_if(all.begin(), all.end(), [](const Rational& x) { return sgn(x) != 0; });
  if (sgn(*first) < 0) {
    for (auto& v : all) v = -v;
  }
  LinearEquality out;
  out.rhs = all.back();
  all.pop_back();
  out.coeffs = std::move(all);
  return out;
}

bool HPolytope::contains(std::span<const Rational> x) const {
  if (x.size() != dim) throw ShapeError("point dimension does not match polytope");
  for (const auto& e : equalities) {
    if (dot(e.coeffs, x) != e.rhs) return false;
  }
  for (const auto& i : inequalities) {
    if (!i.satisfied_by(x)) return false;
  }
  return true;
}

VPolytope VPolytope::from_points(std::vector<RationalVector> points) {
  VPolytope v;
  if (!points.empty()) v.dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != v.dim) throw ShapeError("points of different dimensions");
  }
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return compare(a, b) < 0; });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  v.vertices = std::move(points);
  return v;
}

// ---------------------------------------------------------------------------
// EqualityReducer

EqualityReducer::EqualityReducer(const std::vector<LinearEquality>& equalities, std::size_t dim) : dim_(dim) {
  for (const auto& e : equalities) {
    if (e.coeffs.size() != dim) throw ShapeError("equality dimension mismatch");
    RationalVector row = e.coeffs;
    row.push_back(e.rhs);
    rows_.push_back(std::move(row));
  }
  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), std::size_t{0});
  pivots_ = row_reduce(rows_, order);
  if (rows_.size() > pivots_.size()) {
    consistent_ = false;
    rows_.resize(pivots_.size());
  }

  bool blocky = !rows_.empty();
  std::vector<bool> used(dim, false);
  for (const auto& row : rows_) {
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < dim; ++j) {
      if (sgn(row[j]) == 0) continue;
      if (row[j] != 1 || used[j]) blocky = false;
      used[j] = true;
      support.push_back(j);
    }
    blocks_.push_back(std::move(support));
    block_rhs_.push_back(row[dim]);
  }
  if (!blocky) {
    blocks_.clear();
    block_rhs_.clear();
  }
  for (const auto& row : rows_) {
    LinearEquality eq{RationalVector(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(dim)), row[dim]};
    canonical_.push_back(canonicalize(eq));
  }
}

LinearInequality EqualityReducer::normal_form(const LinearInequality& inequality) const {
  if (inequality.coeffs.size() != dim_) throw ShapeError("inequality dimension mismatch");
  LinearInequality out = inequality;
  if (!blocks_.empty()) {
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      std::map<Rational, std::size_t> freq;
      for (std::size_t j : blocks_[k]) ++freq[out.coeffs[j]];
      const Rational* mode = nullptr;
      std::size_t best = 0;
      for (const auto& [value, n] : freq) {
        if (n > best) {  // map order makes the smallest value win ties
          best = n;
          mode = &value;
        }
      }
      const Rational shift = *mode;
      if (sgn(shift) == 0) continue;
      for (std::size_t j : blocks_[k]) out.coeffs[j] -= shift;
      out.bound -= shift * block_rhs_[k];
    }
  } else {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const Rational f = out.coeffs[pivots_[k]];
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (sgn(rows_[k][j]) != 0) out.coeffs[j] -= f * rows_[k][j];
      }
      out.bound -= f * rows_[k][dim_];
    }
  }
  if (all_zero(out.coeffs)) return out;
  return canonicalize(out);
}

std::optional<LinearInequality> EqualityReducer::violated_by(std::span<const Rational> x) const {
  for (const auto& e : canonical_) {
    const Rational v = dot(e.coeffs, x) - e.rhs;
    if (sgn(v) > 0) return LinearInequality{e.coeffs, e.rhs};
    if (sgn(v) < 0) {
      LinearInequality flipped{e.coeffs, -e.rhs};
      for (auto& c : flipped.coeffs) c = -c;
      return flipped;
    }
  }
  return std::nullopt;
}

HPolytope normalize(const HPolytope& h) {
  EqualityReducer reducer(h.equalities, h.dim);
  if (!reducer.consistent()) return empty_polytope(h.dim);
  HPolytope out;
  out.dim = h.dim;
  out.equalities = reducer.equalities();
  std::set<LinearInequality, InequalityLess> unique;
  for (const auto& ineq : h.inequalities) {
    LinearInequality nf = reducer.normal_form(ineq);
    if (all_zero(nf.coeffs)) {
      if (sgn(nf.bound) >= 0) continue;
      return empty_polytope(h.dim);
    }
    unique.insert(std::move(nf));
  }
  out.inequalities.assign(unique.begin(), unique.end());
  return out;
}

// ---------------------------------------------------------------------------
// Facet and vertex enumeration

namespace {

struct HomogenizedHull {
  std::vector<RationalVector> rows;       // (1, v_i)
  std::vector<std::size_t> pivot_columns;  // column basis of `rows`
  std::vector<LinearEquality> equalities;  // affine hull
};

HomogenizedHull homogenize(const VPolytope& v) {
  HomogenizedHull hull;
  for (const auto& p : v.vertices) {
    RationalVector row;
    row.reserve(v.dim + 1);
    row.emplace_back(1);
    row.insert(row.end(), p.begin(), p.end());
    hull.rows.push_back(std::move(row));
  }
  // Column basis and null space from the reduced form of the row space.
  std::vector<RationalVector> reduced;
  for (std::size_t i : independent_rows(hull.rows)) reduced.push_back(hull.rows[i]);
  hull.pivot_columns = row_reduce(reduced);
  std::vector<bool> is_pivot(v.dim + 1, false);
  for (std::size_t p : hull.pivot_columns) is_pivot[p] = true;
  for (std::size_t f = 0; f <= v.dim; ++f) {
    if (is_pivot[f]) continue;
    RationalVector h(v.dim + 1);
    h[f] = 1;
    for (std::size_t k = 0; k < hull.pivot_columns.size(); ++k) h[hull.pivot_columns[k]] = -reduced[k][f];
    // h0 + sum_j h_j x_j = 0 on every vertex.
    LinearEquality eq{RationalVector(h.begin() + 1, h.end()), -h[0]};
    hull.equalities.push_back(canonicalize(eq));
  }
  return hull;
}

}  // namespace

HPolytope facet_enumeration(const VPolytope& v, const PolytopeLimits& limits, DoubleDescriptionStats* stats) {
  if (v.vertices.empty()) throw std::invalid_argument("facet enumeration needs at least one vertex");
  HomogenizedHull hull = homogenize(v);
  HPolytope out;
  out.dim = v.dim;
  out.equalities = hull.equalities;
  const std::size_t r = hull.pivot_columns.size();
  if (r > 1) {
    std::vector<RationalVector> cone_rows;
    cone_rows.reserve(hull.rows.size());
    for (const auto& row : hull.rows) {
      RationalVector sub(r);
      for (std::size_t k = 0; k < r; ++k) sub[k] = row[hull.pivot_columns[k]];
      cone_rows.push_back(std::move(sub));
    }
    DoubleDescriptionOptions opts{limits.max_rays};
    for (const auto& ray : cone_extreme_rays(to_integer_rows(cone_rows), opts, stats)) {
      RationalVector h(v.dim + 1);
      for (std::size_t k = 0; k < r; ++k) h[hull.pivot_columns[k]] = ray[k];
      LinearInequality ineq;
      ineq.bound = h[0];
      ineq.coeffs.reserve(v.dim);
      for (std::size_t j = 1; j <= v.dim; ++j) ineq.coeffs.push_back(-h[j]);
      out.inequalities.push_back(std::move(ineq));
    }
  }
  return normalize(out);
}

VPolytope vertex_enumeration(const HPolytope& h, const PolytopeLimits& limits) {
  const std::size_t d = h.dim;
  std::vector<RationalVector> rows;
  for (const auto& e : h.equalities) {
    RationalVector row = e.coeffs;
    row.push_back(e.rhs);
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto pivots = row_reduce(rows, order);
  VPolytope empty;
  empty.dim = d;
  if (rows.size() > pivots.size()) return empty;

  std::vector<bool> is_pivot(d, false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < d; ++j) {
    if (!is_pivot[j]) free_cols.push_back(j);
  }

  // x_pivot[k] = rhs_k - sum_f rows[k][f] x_f
  auto lift = [&](const RationalVector& z) {
    RationalVector x(d);
    for (std::size_t i = 0; i < free_cols.size(); ++i) x[free_cols[i]] = z[i];
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      Rational val = rows[k][d];
      for (std::size_t i = 0; i < free_cols.size(); ++i) {
        if (sgn(rows[k][free_cols[i]]) != 0) val -= rows[k][free_cols[i]] * z[i];
      }
      x[pivots[k]] = val;
    }
    return x;
  };

  // Reduced inequalities a~ z <= b~, homogenized as t b~ - a~ z >= 0.
  std::vector<RationalVector> cone_rows;
  for (const auto& ineq : h.inequalities) {
    RationalVector a(free_cols.size());
    Rational b = ineq.bound;
    for (std::size_t i = 0; i < free_cols.size(); ++i) a[i] = ineq.coeffs[free_cols[i]];
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      const Rational& ap = ineq.coeffs[pivots[k]];
      if (sgn(ap) == 0) continue;
      for (std::size_t i = 0; i < free_cols.size(); ++i) a[i] -= ap * rows[k][free_cols[i]];
      b -= ap * rows[k][d];
    }
    if (all_zero(a)) {
      if (sgn(b) < 0) return empty;
      continue;
    }
    RationalVector row;
    row.reserve(free_cols.size() + 1);
    row.push_back(b);
    for (auto& c : a) row.push_back(-c);
    cone_rows.push_back(std::move(row));
  }
  if (free_cols.empty()) {
    VPolytope v;
    v.dim = d;
    v.vertices.push_back(lift({}));
    return v;
  }
  RationalVector t_row(free_cols.size() + 1);
  t_row[0] = 1;
  cone_rows.push_back(std::move(t_row));

  std::vector<IntegerVector> rays;
  try {
    rays = cone_extreme_rays(to_integer_rows(cone_rows), DoubleDescriptionOptions{limits.max_rays});
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("vertex enumeration needs a bounded polyhedron (inequalities contain a line)");
  }
  std::vector<RationalVector> points;
  bool recession = false;
  for (const auto& ray : rays) {
    if (sgn(ray[0]) == 0) {
      recession = true;
      continue;
    }
    RationalVector z(free_cols.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = Rational(ray[i + 1], ray[0]);
    for (auto& c : z) c.canonicalize();
    points.push_back(lift(z));
  }
  if (points.empty()) return empty;
  if (recession) throw std::invalid_argument("vertex enumeration needs a bounded polyhedron");
  return VPolytope::from_points(std::move(points));
}

// ---------------------------------------------------------------------------
// Redundancy and projection

namespace {

/// Removes rows implied by the remaining rows together with `eqs`; only the
/// `active` columns take part in the LPs.
void remove_redundant_rows(std::vector<LinearInequality>& ineqs, const std::vector<LinearEquality>& eqs,
                           const std::vector<std::size_t>& active) {
  auto project = [&](const RationalVector& full) {
    RationalVector out(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) out[i] = full[active[i]];
    return out;
  };
  std::vector<bool> alive(ineqs.size(), true);
  for (std::size_t i = 0; i < ineqs.size(); ++i) {
    LinearProgram lp(active.size());
    for (std::size_t j = 0; j < ineqs.size(); ++j) {
      if (j != i && alive[j]) lp.add_le(project(ineqs[j].coeffs), ineqs[j].bound);
    }
    for (const auto& e : eqs) lp.add_eq(project(e.coeffs), e.rhs);
    lp.objective = project(ineqs[i].coeffs);
    LpResult res = solve(lp);
    if (res.status == LpStatus::Infeasible) return;  // empty set; leave as is
    if (res.status == LpStatus::Optimal && res.value <= ineqs[i].bound) alive[i] = false;
  }
  std::vector<LinearInequality> kept;
  for (std::size_t i = 0; i < ineqs.size(); ++i) {
    if (alive[i]) kept.push_back(std::move(ineqs[i]));
  }
  ineqs = std::move(kept);
}

}  // namespace

HPolytope remove_redundancy(const HPolytope& h) {
  HPolytope work = normalize(h);
  // Implicit equalities: inequalities whose minimum over the set equals the bound.
  {
    LinearProgram base = lp_from(work);
    std::vector<LinearInequality> remaining;
    for (const auto& ineq : work.inequalities) {
      LinearProgram lp = base;
      lp.objective = ineq.coeffs;
      for (auto& c : lp.objective) c = -c;
      LpResult res = solve(lp);
      if (res.status == LpStatus::Infeasible) return empty_polytope(h.dim);
      if (res.status == LpStatus::Optimal && -res.value == ineq.bound) {
        work.equalities.push_back({ineq.coeffs, ineq.bound});
      } else {
        remaining.push_back(ineq);
      }
    }
    work.inequalities = std::move(remaining);
    work = normalize(work);
  }
  std::vector<std::size_t> all(h.dim);
  std::iota(all.begin(), all.end(), std::size_t{0});
  remove_redundant_rows(work.inequalities, work.equalities, all);
  return normalize(work);
}

HPolytope fourier_motzkin_project(const HPolytope& h, std::span<const std::size_t> keep, const PolytopeLimits& limits) {
  const std::size_t d = h.dim;
  std::vector<bool> kept(d, false);
  for (std::size_t k : keep) {
    if (k >= d) throw ShapeError("projection coordinate out of range");
    if (kept[k]) throw ShapeError("projection coordinate listed twice");
    kept[k] = true;
  }

  std::vector<RationalVector> eq_rows;
  for (const auto& e : h.equalities) {
    RationalVector row = e.coeffs;
    row.push_back(e.rhs);
    eq_rows.push_back(std::move(row));
  }
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < d; ++j) {
    if (!kept[j]) order.push_back(j);
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (kept[j]) order.push_back(j);
  }
  const auto pivots = row_reduce(eq_rows, order);
  if (eq_rows.size() > pivots.size()) return empty_polytope(keep.size());

  std::vector<LinearEquality> kept_eqs;
  std::vector<std::size_t> substitution_rows;
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    if (kept[pivots[k]]) {
      kept_eqs.push_back({RationalVector(eq_rows[k].begin(), eq_rows[k].begin() + static_cast<std::ptrdiff_t>(d)), eq_rows[k][d]});
    } else {
      substitution_rows.push_back(k);
    }
  }

  std::set<LinearInequality, InequalityLess> current;
  for (const auto& ineq : h.inequalities) {
    LinearInequality work = ineq;
    for (std::size_t k : substitution_rows) {
      const Rational f = work.coeffs[pivots[k]];
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (sgn(eq_rows[k][j]) != 0) work.coeffs[j] -= f * eq_rows[k][j];
      }
      work.bound -= f * eq_rows[k][d];
    }
    if (all_zero(work.coeffs)) {
      if (sgn(work.bound) < 0) return empty_polytope(keep.size());
      continue;
    }
    current.insert(canonicalize(work));
  }

  std::vector<bool> eliminated(d, false);
  for (std::size_t k : substitution_rows) eliminated[pivots[k]] = true;

  while (true) {
    // Pick the remaining non-kept variable with the fewest new rows.
    std::size_t var = d;
    std::size_t best_cost = 0;
    for (std::size_t j = 0; j < d; ++j) {
      if (kept[j] || eliminated[j]) continue;
      std::size_t npos = 0, nneg = 0;
      for (const auto& ineq : current) {
        const int s = sgn(ineq.coeffs[j]);
        npos += s > 0;
        nneg += s < 0;
      }
      if (npos + nneg == 0) {
        eliminated[j] = true;
        continue;
      }
      const std::size_t cost = npos * nneg;
      if (var == d || cost < best_cost) {
        var = j;
        best_cost = cost;
      }
    }
    if (var == d) break;

    std::vector<const LinearInequality*> pos, neg;
    std::vector<LinearInequality> next;
    for (const auto& ineq : current) {
      const int s = sgn(ineq.coeffs[var]);
      if (s > 0) {
        pos.push_back(&ineq);
      } else if (s < 0) {
        neg.push_back(&ineq);
      } else {
        next.push_back(ineq);
      }
    }
    if (next.size() + pos.size() * neg.size() > limits.max_rays) {
      throw CapacityError("Fourier-Motzkin step would create more than " + std::to_string(limits.max_rays) + " rows");
    }
    std::set<LinearInequality, InequalityLess> combined(next.begin(), next.end());
    for (const auto* p : pos) {
      for (const auto* q : neg) {
        const Rational cp = p->coeffs[var];
        const Rational cq = -q->coeffs[var];
        LinearInequality sum;
        sum.coeffs.resize(d);
        for (std::size_t j = 0; j < d; ++j) sum.coeffs[j] = cq * p->coeffs[j] + cp * q->coeffs[j];
        sum.coeffs[var] = 0;
        sum.bound = cq * p->bound + cp * q->bound;
        if (all_zero(sum.coeffs)) {
          if (sgn(sum.bound) < 0) return empty_polytope(keep.size());
          continue;
        }
        combined.insert(canonicalize(sum));
      }
    }
    eliminated[var] = true;

    std::vector<LinearInequality> rows(combined.begin(), combined.end());
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < d; ++j) {
      if (!eliminated[j]) active.push_back(j);
    }
    remove_redundant_rows(rows, kept_eqs, active);
    current = std::set<LinearInequality, InequalityLess>(rows.begin(), rows.end());
  }

  HPolytope out;
  out.dim = keep.size();
  auto restrict = [&](const RationalVector& full) {
    RationalVector v(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) v[i] = full[keep[i]];
    return v;
  };
  for (const auto& ineq : current) out.inequalities.push_back({restrict(ineq.coeffs), ineq.bound});
  for (const auto& e : kept_eqs) out.equalities.push_back({restrict(e.coeffs), e.rhs});
  return remove_redundancy(out);
}

// ---------------------------------------------------------------------------
// Membership and optimization

MembershipCertificate membership(std::span<const Rational> q, const VPolytope& v) {
  if (q.size() != v.dim) throw ShapeError("query dimension does not match polytope");
  if (v.vertices.empty()) throw std::invalid_argument("membership needs at least one vertex");
  const std::size_t m = v.vertices.size();
  MembershipCertificate cert;

  LinearProgram lp(m);
  lp.set_all_nonnegative();
  for (std::size_t j = 0; j < v.dim; ++j) {
    RationalVector row(m);
    for (std::size_t i = 0; i < m; ++i) row[i] = v.vertices[i][j];
    lp.add_eq(std::move(row), q[j]);
  }
  lp.add_eq(RationalVector(m, Rational(1)), Rational(1));
  LpResult res = solve(lp);
  if (res.status == LpStatus::Optimal) {
    cert.verdict = MembershipCertificate::Verdict::Inside;
    cert.weights = res.x;
    return cert;
  }

  cert.verdict = MembershipCertificate::Verdict::Outside;
  HomogenizedHull hull = homogenize(v);
  EqualityReducer reducer(hull.equalities, v.dim);
  if (auto cut = reducer.violated_by(q)) {
    cert.separator = canonicalize(*cut);
    return cert;
  }

  // Facet-finding LP over valid inequalities h0 + h·x >= 0 supported on the
  // column basis, normalized to slack one at the vertex centroid; the optimum
  // is attained at a facet.
  const auto& cols = hull.pivot_columns;
  RationalVector centroid(v.dim + 1);
  centroid[0] = 1;
  for (const auto& p : v.vertices) {
    for (std::size_t j = 0; j < v.dim; ++j) centroid[j + 1] += p[j];
  }
  for (std::size_t j = 1; j <= v.dim; ++j) centroid[j] /= m;
  RationalVector qh(v.dim + 1);
  qh[0] = 1;
  std::copy(q.begin(), q.end(), qh.begin() + 1);

  LinearProgram sep(cols.size());
  for (const auto& row : hull.rows) {
    RationalVector r(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) r[k] = -row[cols[k]];
    sep.add_le(std::move(r), Rational(0));
  }
  RationalVector norm(cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) norm[k] = centroid[cols[k]];
  sep.add_eq(std::move(norm), Rational(1));
  sep.objective.resize(cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) sep.objective[k] = -qh[cols[k]];
  LpResult sres = solve(sep);
  if (sres.status != LpStatus::Optimal || sgn(sres.value) <= 0) {
    throw std::logic_error("separator LP failed for a point outside the hull");
  }
  RationalVector h(v.dim + 1);
  for (std::size_t k = 0; k < cols.size(); ++k) h[cols[k]] = sres.x[k];
  LinearInequality ineq;
  ineq.bound = h[0];
  for (std::size_t j = 1; j <= v.dim; ++j) ineq.coeffs.push_back(-h[j]);
  cert.separator = reducer.normal_form(ineq);
  return cert;
}

Optimum maximize_linear(std::span<const Rational> coeffs, const Rational& constant, const VPolytope& v) {
  if (coeffs.size() != v.dim) throw ShapeError("objective dimension does not match polytope");
  if (v.vertices.empty()) throw std::domain_error("maximize over an empty vertex set");
  std::size_t best = 0;
  Rational best_value = dot(coeffs, v.vertices[0]);
  for (std::size_t i = 1; i < v.vertices.size(); ++i) {
    Rational val = dot(coeffs, v.vertices[i]);
    if (val > best_value) {
      best_value = val;
      best = i;
    }
  }
  return {best_value + constant, v.vertices[best]};
}

Optimum maximize_linear(std::span<const Rational> coeffs, const Rational& constant, const HPolytope& h,
                        bool lexicographic_ties) {
  if (coeffs.size() != h.dim) throw ShapeError("objective dimension does not match polytope");
  LinearProgram lp = lp_from(h);
  lp.objective.assign(coeffs.begin(), coeffs.end());
  LpResult res = solve(lp);
  if (res.status == LpStatus::Infeasible) throw std::domain_error("maximize over an empty polytope");
  if (res.status == LpStatus::Unbounded) throw UnboundedError("linear objective is unbounded (missing normalization?)");
  Optimum out{res.value + constant, res.x};
  if (lexicographic_ties) {
    LinearProgram fixed = lp_from(h);
    fixed.add_eq(RationalVector(coeffs.begin(), coeffs.end()), res.value);
    for (std::size_t j = 0; j < h.dim; ++j) {
      fixed.objective.assign(h.dim, Rational(0));
      fixed.objective[j] = -1;
      LpResult step = solve(fixed);
      const Rational low = -step.value;
      RationalVector unit(h.dim);
      unit[j] = 1;
      fixed.add_eq(std::move(unit), low);
      out.argmax[j] = low;
    }
  }
  return out;
}

bool implies(const HPolytope& h, const LinearInequality& inequality) {
  LinearProgram lp = lp_from(h);
  lp.objective = inequality.coeffs;
  LpResult res = solve(lp);
  if (res.status == LpStatus::Infeasible) return true;
  if (res.status == LpStatus::Unbounded) return false;
  return res.value <= inequality.bound;
}

bool equivalent(const HPolytope& lhs, const HPolytope& rhs) {
  if (lhs.dim != rhs.dim) return false;
  auto covers = [](const HPolytope& a, const HPolytope& b) {
    for (const auto& i : b.inequalities) {
      if (!implies(a, i)) return false;
    }
    for (const auto& e : b.equalities) {
      LinearInequality up{e.coeffs, e.rhs};
      LinearInequality down{e.coeffs, -e.rhs};
      for (auto& c : down.coeffs) c = -c;
      if (!implies(a, up) || !implies(a, down)) return false;
    }
    return true;
  };
  return covers(lhs, rhs) && covers(rhs, lhs);
}

std::size_t affine_dimension(const HPolytope& h) {
  HPolytope reduced = remove_redundancy(h);
  std::vector<RationalVector> rows;
  for (const auto& e : reduced.equalities) rows.push_back(e.coeffs);
  return h.dim - rank_of(std::move(rows));
}

std::size_t affine_dimension(const VPolytope& v) {
  if (v.vertices.empty()) throw std::invalid_argument("affine dimension of an empty vertex set");
  std::vector<RationalVector> rows;
  for (const auto& p : v.vertices) {
    RationalVector row;
    row.emplace_back(1);
    row.insert(row.end(), p.begin(), p.end());
    rows.push_back(std::move(row));
  }
  return independent_rows(rows).size() - 1;
}

HPolytope no_signalling_polytope(const Scenario& s) {
  if (!s.is_bell()) throw ShapeError("no-signalling polytope needs a Bell scenario");
  HPolytope h;
  h.dim = s.dimension();
  for (std::size_t j = 0; j < h.dim; ++j) {
    RationalVector c(h.dim);
    c[j] = -1;
    h.inequalities.push_back({std::move(c), Rational(0)});
  }
  std::vector<LinearEquality> candidates;
  for (int x = 0; x < s.nx(); ++x) {
    for (int y = 0; y < s.ny(); ++y) {
      RationalVector c(h.dim);
      for (int a = 0; a < s.na(); ++a) {
        for (int b = 0; b < s.nb(); ++b) c[s.index(x, y, a, b)] = 1;
      }
      candidates.push_back({std::move(c), Rational(1)});
    }
  }
  for (int x = 0; x < s.nx(); ++x) {
    for (int a = 0; a < s.na(); ++a) {
      for (int y = 1; y < s.ny(); ++y) {
        RationalVector c(h.dim);
        for (int b = 0; b < s.nb(); ++b) {
          c[s.index(x, y, a, b)] = 1;
          c[s.index(x, 0, a, b)] = -1;
        }
        candidates.push_back({std::move(c), Rational(0)});
      }
    }
  }
  for (int y = 0; y < s.ny(); ++y) {
    for (int b = 0; b < s.nb(); ++b) {
      for (int x = 1; x < s.nx(); ++x) {
        RationalVector c(h.dim);
        for (int a = 0; a < s.na(); ++a) {
          c[s.index(x, y, a, b)] = 1;
          c[s.index(0, y, a, b)] = -1;
        }
        candidates.push_back({std::move(c), Rational(0)});
      }
    }
  }
  std::vector<RationalVector> rows;
  for (const auto& e : candidates) {
    RationalVector r = e.coeffs;
    r.push_back(e.rhs);
    rows.push_back(std::move(r));
  }
  for (std::size_t i : independent_rows(rows)) h.equalities.push_back(candidates[i]);
  return h;
}

VPolytope classical_polytope(const Scenario& s, std::size_t strategy_limit) {
  std::vector<RationalVector> points;
  for (auto& c : deterministic_correlations(s, strategy_limit)) points.push_back(std::move(c.entries));
  return VPolytope::from_points(std::move(points));
}

std::string format_inequality(const LinearInequality& inequality, const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < inequality.coeffs.size(); ++j) {
    const Rational& c = inequality.coeffs[j];
    if (sgn(c) == 0) continue;
    if (!first) os << ' ';
    first = false;
    os << (sgn(c) > 0 ? "+" : "-");
    // PORTA style keeps unit coefficients; named output drops them.
    if (names.empty()) {
      os << to_string(Rational(abs(c))) << "x" << j + 1;
    } else {
      if (abs(c) != 1) os << to_string(Rational(abs(c)));
      os << names[j];
    }
  }
  if (first) os << "0";
  os << " <= " << to_string(inequality.bound);
  return os.str();
}

}  // namespace instrumental
