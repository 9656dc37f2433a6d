#pragma once

// Exact rational arithmetic used throughout the engine. Every value that
// crosses a module boundary is a reduced GMP rational; nothing is ever
// converted to floating point except for human-facing diagnostics.

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace fairdiv {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "p" or a finite decimal such as "0.25". Throws
/// std::invalid_argument on anything else (including q = 0).
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers print without a denominator.
std::string to_string(const Rational& value);

Integer floor_of(const Rational& value);
Integer ceil_of(const Rational& value);

/// Converts an integer known to fit into int64; throws std::overflow_error otherwise.
std::int64_t to_int64(const Integer& value);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    Rational r{Integer(static_cast<long>(num)), Integer(static_cast<long>(den))};
    r.canonicalize();
    return r;
}

inline Rational abs_of(const Rational& value) { return value < 0 ? Rational(-value) : value; }

/// ceil(log2(n)) for n >= 1; 0 for n == 1.
int ceil_log2(std::uint64_t n);

/// Fixed message width used for integers in [0, m]: ceil(log2(m + 1)).
int width_for(std::uint64_t max_value);

/// Smallest power of two >= n (n >= 1).
std::uint64_t next_pow2(std::uint64_t n);

}  // namespace fairdiv
