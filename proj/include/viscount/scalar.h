#ifndef VISCOUNT_SCALAR_H
#define VISCOUNT_SCALAR_H

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace viscount {

/// Exact rational scalar. All coordinates and derived quantities in the
/// library live in this type; there is no floating-point fast path, so every
/// predicate is deterministic. GMP keeps values canonical (gcd-reduced,
/// positive denominator) through arithmetic.
using Rat = mpq_class;

/// num/den with canonicalization (mpq_class(n, d) alone does not reduce).
Rat make_rat(long num, long den);

inline int sign(const Rat& v) { return sgn(v); }

/// Parse an exact scalar from text. Accepts decimal literals ("2", "-0.25",
/// "3.5") and explicit fractions ("7/2", "-1/3").
Rat rat_from_string(const std::string& text);

/// Canonical text form: integers as plain digits, other values as "num/den".
std::string rat_to_string(const Rat& v);

/// Decimal form when the reduced denominator has only factors 2 and 5
/// (always the case for parsed decimal input); falls back to "num/den".
std::string rat_to_decimal(const Rat& v);

/// value = num / 2^shift, handy for seeded jitter on a fine dyadic lattice.
Rat rat_from_dyadic(std::uint64_t num, unsigned shift);

} // namespace viscount

#endif
