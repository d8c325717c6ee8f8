#include "instrumental/rational.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace instrumental {

namespace {

bool is_digits(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

Integer parse_integer(std::string_view text) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) digits.remove_prefix(1);
  if (!is_digits(digits)) throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
  std::string owned(text.front() == '+' ? text.substr(1) : text);
  return Integer(owned, 10);
}

}  // namespace

Rational fraction(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!is_digits(den_text)) throw std::invalid_argument("malformed denominator in '" + std::string(text) + "'");
    Integer den(std::string(den_text), 10);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  if (auto dot_pos = text.find('.'); dot_pos != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot_pos);
    std::string_view frac = text.substr(dot_pos + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if ((!whole.empty() && !is_digits(whole)) || (!frac.empty() && !is_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    std::string digits = std::string(whole) + std::string(frac);
    Integer num(digits.empty() ? std::string("0") : digits, 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational r(negative ? Integer(-num) : num, den);
    r.canonicalize();
    return r;
  }

  return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) { return value.get_str(); }

std::string to_fraction_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational from_double_exact(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite double");
  Rational r(value);
  return r;
}

Rational rationalize(double value, const Integer& max_denominator) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite double");
  if (max_denominator < 1) throw std::invalid_argument("max_denominator must be positive");
  const Rational exact = from_double_exact(value);

  // Convergents h/k of the continued fraction of `exact`.
  Integer h_prev2 = 0, h_prev = 1, k_prev2 = 1, k_prev = 0;
  Rational rest = exact;
  while (true) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
    Integer h = a * h_prev + h_prev2;
    Integer k = a * k_prev + k_prev2;
    if (k > max_denominator) {
      // Largest semiconvergent that respects the cap, compared with the last convergent.
      Integer t = (max_denominator - k_prev2) / k_prev;
      Rational semi(t * h_prev + h_prev2, t * k_prev + k_prev2);
      semi.canonicalize();
      Rational last(h_prev, k_prev);
      last.canonicalize();
      Rational d_semi = abs(semi - exact);
      Rational d_last = abs(last - exact);
      return d_semi < d_last ? semi : last;
    }
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    Rational frac = rest - Rational(a);
    if (frac == 0) {
      Rational r(h, k);
      r.canonicalize();
      return r;
    }
    rest = 1 / frac;
  }
}

int compare(std::span<const Rational> lhs, std::span<const Rational> rhs) {
  const std::size_t n = std::min(lhs.size(), rhs.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp(lhs[i], rhs[i]);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  if (lhs.size() == rhs.size()) return 0;
  return lhs.size() < rhs.size() ? -1 : 1;
}

Rational dot(std::span<const Rational> lhs, std::span<const Rational> rhs) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("dot: size mismatch");
  Rational acc = 0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (sgn(lhs[i]) != 0 && sgn(rhs[i]) != 0) acc += lhs[i] * rhs[i];
  }
  return acc;
}

Integer denominator_lcm(std::span<const Rational> values) {
  Integer l = 1;
  for (const auto& v : values) {
    if (v.get_den() != 1) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  }
  return l;
}

void make_primitive(std::span<Rational> values) {
  Integer l = denominator_lcm(values);
  Integer g = 0;
  for (auto& v : values) {
    if (l != 1) v *= l;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
  }
  if (g > 1) {
    for (auto& v : values) v /= g;
  }
}

std::vector<std::size_t> row_reduce(std::vector<RationalVector>& rows, std::span<const std::size_t> column_order) {
  std::vector<std::size_t> order(column_order.begin(), column_order.end());
  if (order.empty() && !rows.empty()) {
    order.resize(rows.front().size());
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  std::vector<std::size_t> pivots;
  std::size_t next = 0;
  for (std::size_t col : order) {
    if (next == rows.size()) break;
    std::size_t found = next;
    while (found < rows.size() && sgn(rows[found][col]) == 0) ++found;
    if (found == rows.size()) continue;
    std::swap(rows[next], rows[found]);
    RationalVector& pivot_row = rows[next];
    const Rational inv = 1 / pivot_row[col];
    for (auto& v : pivot_row) {
      if (sgn(v) != 0) v *= inv;
    }
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < pivot_row.size(); ++j) {
      if (sgn(pivot_row[j]) != 0) support.push_back(j);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == next || sgn(rows[r][col]) == 0) continue;
      const Rational factor = rows[r][col];
      for (std::size_t j : support) rows[r][j] -= factor * pivot_row[j];
    }
    pivots.push_back(col);
    ++next;
  }
  // Rows past `next` have no pivot in the searched columns; keep those that are
  // nonzero elsewhere (e.g. an inconsistent right-hand side), drop zero rows.
  std::vector<RationalVector> kept(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(next));
  for (std::size_t r = next; r < rows.size(); ++r) {
    bool zero = true;
    for (const auto& v : rows[r]) {
      if (sgn(v) != 0) {
        zero = false;
        break;
      }
    }
    if (!zero) kept.push_back(rows[r]);
  }
  rows = std::move(kept);
  return pivots;
}

}  // namespace instrumental
