#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace oprime {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p", "p/q" or a terminating decimal such as "-1.25".
/// Throws InputError on anything else (floating exponents included).
Rational parse_rational(std::string_view text);

/// Canonical "p" or "p/q" form.
std::string to_string(const Rational& value);

inline bool is_integer(const Rational& value) { return value.get_den() == 1; }

}  // namespace oprime
