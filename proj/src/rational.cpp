#include "firegraph/rational.hpp"

#include "firegraph/error.hpp"

namespace firegraph {

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

BigInt parse_bigint(std::string_view text, std::string_view whole) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) {
    throw Error(ErrorCode::parse_error, "malformed rational '" + std::string(whole) + "'");
  }
  return BigInt(std::string(text.front() == '+' ? text.substr(1) : text));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text, text));
  BigInt num = parse_bigint(text.substr(0, slash), text);
  BigInt den = parse_bigint(text.substr(slash + 1), text);
  if (den == 0) throw Error(ErrorCode::parse_error, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

}  // namespace firegraph
