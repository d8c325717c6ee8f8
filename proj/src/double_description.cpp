#include "instrumental/double_description.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "instrumental/errors.hpp"

namespace instrumental {

namespace {

class Bitset {
 public:
  explicit Bitset(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  static Bitset intersect(const Bitset& a, const Bitset& b) {
    Bitset out;
    out.words_.resize(a.words_.size());
    for (std::size_t i = 0; i < a.words_.size(); ++i) out.words_[i] = a.words_[i] & b.words_[i];
    return out;
  }

  bool subset_of(const Bitset& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & ~other.words_[i]) != 0) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  IntegerVector coords;
  Bitset zeros;
};

Integer evaluate(const IntegerVector& row, const IntegerVector& ray) {
  Integer acc = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (sgn(row[j]) != 0 && sgn(ray[j]) != 0) acc += row[j] * ray[j];
  }
  return acc;
}

void make_primitive(IntegerVector& v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1) {
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
}

}  // namespace

std::vector<IntegerVector> to_integer_rows(const std::vector<RationalVector>& rows) {
  std::vector<IntegerVector> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    RationalVector scaled = r;
    instrumental::make_primitive(scaled);
    IntegerVector iv;
    iv.reserve(scaled.size());
    for (const auto& v : scaled) iv.push_back(v.get_num());
    out.push_back(std::move(iv));
  }
  return out;
}

std::vector<IntegerVector> cone_extreme_rays(const std::vector<IntegerVector>& rows, const DoubleDescriptionOptions& options,
                                             DoubleDescriptionStats* stats) {
  if (rows.empty()) throw std::invalid_argument("cone needs at least one constraint");
  const std::size_t n = rows.front().size();
  const std::size_t m = rows.size();
  for (const auto& r : rows) {
    if (r.size() != n) throw std::invalid_argument("cone constraint width mismatch");
  }

  // Initial basis: the first n independent rows, found by incremental elimination.
  std::vector<std::size_t> basis;
  std::vector<RationalVector> echelon;
  std::vector<std::size_t> echelon_pivot;
  for (std::size_t i = 0; i < m && basis.size() < n; ++i) {
    RationalVector v(rows[i].begin(), rows[i].end());
    for (std::size_t k = 0; k < echelon.size(); ++k) {
      const std::size_t p = echelon_pivot[k];
      if (sgn(v[p]) == 0) continue;
      const Rational f = v[p];
      for (std::size_t j = 0; j < n; ++j) {
        if (sgn(echelon[k][j]) != 0) v[j] -= f * echelon[k][j];
      }
    }
    std::size_t pivot = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(v[j]) != 0) {
        pivot = j;
        break;
      }
    }
    if (pivot == n) continue;
    const Rational inv = 1 / v[pivot];
    for (auto& x : v) x *= inv;
    for (auto& e : echelon) {
      if (sgn(e[pivot]) == 0) continue;
      const Rational f = e[pivot];
      for (std::size_t j = 0; j < n; ++j) e[j] -= f * v[j];
    }
    echelon.push_back(std::move(v));
    echelon_pivot.push_back(pivot);
    basis.push_back(i);
  }
  if (basis.size() < n) throw std::invalid_argument("cone constraints are not of full column rank (cone is not pointed)");

  // Initial rays are the columns of the inverse of the basis submatrix.
  std::vector<RationalVector> aug(n, RationalVector(2 * n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) aug[k][j] = rows[basis[k]][j];
    aug[k][n + k] = 1;
  }
  std::vector<std::size_t> pivot_cols(n);
  for (std::size_t j = 0; j < n; ++j) pivot_cols[j] = j;
  row_reduce(aug, pivot_cols);

  std::vector<Ray> rays;
  std::vector<bool> processed(m, false);
  for (std::size_t i : basis) processed[i] = true;
  for (std::size_t k = 0; k < n; ++k) {
    RationalVector col(n);
    for (std::size_t j = 0; j < n; ++j) col[j] = aug[j][n + k];
    instrumental::make_primitive(col);
    Ray r{IntegerVector(n), Bitset(m)};
    for (std::size_t j = 0; j < n; ++j) r.coords[j] = col[j].get_num();
    for (std::size_t kk = 0; kk < n; ++kk) {
      if (kk != k) r.zeros.set(basis[kk]);
    }
    rays.push_back(std::move(r));
  }

  std::size_t peak = rays.size();
  std::size_t candidate_pairs = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (processed[i]) continue;
    processed[i] = true;
    std::vector<Integer> value(rays.size());
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      value[r] = evaluate(rows[i], rays[r].coords);
      const int s = sgn(value[r]);
      (s > 0 ? pos : s < 0 ? neg : zero).push_back(r);
    }
    if (neg.empty()) {
      for (std::size_t r : zero) rays[r].zeros.set(i);
      continue;
    }

    std::vector<Ray> created;
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        Bitset common = Bitset::intersect(rays[p].zeros, rays[q].zeros);
        if (common.count() + 2 < n) continue;
        ++candidate_pairs;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size(); ++r) {
          if (r == p || r == q) continue;
          if (common.subset_of(rays[r].zeros)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        Ray fresh{IntegerVector(n), std::move(common)};
        const Integer& vp = value[p];
        const Integer neg_vq = -value[q];
        for (std::size_t j = 0; j < n; ++j) fresh.coords[j] = vp * rays[q].coords[j] + neg_vq * rays[p].coords[j];
        make_primitive(fresh.coords);
        fresh.zeros.set(i);
        created.push_back(std::move(fresh));
      }
    }

    std::vector<Ray> next;
    next.reserve(pos.size() + zero.size() + created.size());
    for (std::size_t r : pos) next.push_back(std::move(rays[r]));
    for (std::size_t r : zero) {
      rays[r].zeros.set(i);
      next.push_back(std::move(rays[r]));
    }
    for (auto& r : created) next.push_back(std::move(r));
    rays = std::move(next);
    peak = std::max(peak, rays.size());
    if (rays.size() > options.max_rays) {
      throw CapacityError("double description exceeded " + std::to_string(options.max_rays) + " intermediate rays");
    }
  }

  if (stats != nullptr) {
    stats->max_intermediate_rays = peak;
    stats->candidate_pairs = candidate_pairs;
  }
  std::vector<IntegerVector> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.coords));
  return out;
}

}  // namespace instrumental
