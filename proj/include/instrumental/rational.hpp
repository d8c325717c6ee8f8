#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace instrumental {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// num/den in lowest terms; throws std::invalid_argument when den is 0.
Rational fraction(long num, long den);

/// Parses "p/q", "p" or a finite decimal such as "-0.125". Throws
/// std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q" when the denominator is not 1, otherwise "p".
std::string to_string(const Rational& value);

/// Always "p/q", including "0/1" and "3/1".
std::string to_fraction_string(const Rational& value);

/// Exact binary value of a double.
Rational from_double_exact(double value);

/// Best rational approximation with denominator at most `max_denominator`,
/// found from the continued-fraction expansion and its semiconvergents.
Rational rationalize(double value, const Integer& max_denominator = 1000000);

/// Lexicographic comparison of equal-length vectors; shorter sorts first.
int compare(std::span<const Rational> lhs, std::span<const Rational> rhs);

Rational dot(std::span<const Rational> lhs, std::span<const Rational> rhs);

/// Multiplies the vector by the positive factor that makes all entries
/// integral with gcd 1. A zero vector is returned unchanged.
void make_primitive(std::span<Rational> values);

/// Positive least common multiple of the denominators.
Integer denominator_lcm(std::span<const Rational> values);

/// Reduced row echelon form, in place. Pivots are searched over the columns in
/// `column_order` (all columns, left to right, when empty); every column of a
/// row still takes part in elimination. Returns the pivot column of each
/// remaining nonzero row; zero rows are removed.
std::vector<std::size_t> row_reduce(std::vector<RationalVector>& rows,
                                    std::span<const std::size_t> column_order = {});

}  // namespace instrumental
