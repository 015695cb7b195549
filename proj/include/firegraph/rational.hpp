#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace firegraph {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "p/q" in lowest terms, or just "p" when q = 1.
std::string to_string(const Rational& value);

/// Accepts "p", "p/q" and "-p/q". Throws Error(parse_error).
Rational parse_rational(std::string_view text);

inline Rational make_rational(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

}  // namespace firegraph
