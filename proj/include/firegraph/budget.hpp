#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "firegraph/rational.hpp"

namespace firegraph {

/// Coarse asymptotic class of a budget: O(n^d), exponential, or unrecognized.
struct GrowthClass {
  enum class Tag { polynomial, exponential, other };
  Tag tag = Tag::other;
  std::int64_t degree = 0;  // meaningful for polynomial only

  std::string to_string() const;
  friend bool operator==(const GrowthClass&, const GrowthClass&) = default;
};

/// A budget sequence f_1, f_2, ... of nonnegative integers.
///
/// Text grammar (round-trips through to_string):
///   "3"              constant
///   "poly:c,d"       c * n^d
///   "list:a,b,c"     explicit prefix, the last value repeats forever
///   "exp:c,b"        c * b^n
///   "sum:r(<inner>)" g_n = f_{r(n-1)+1} + ... + f_{rn}
///   "mul:k(<inner>)" k * f_n
/// Values saturate at INT64_MAX instead of overflowing.
class BudgetSeq {
 public:
  enum class Kind { constant, polynomial, list, exponential, turn_sum, scaled, callback };

  BudgetSeq() = default;  // constant 0

  static BudgetSeq constant(std::int64_t c);
  static BudgetSeq polynomial(std::int64_t c, std::int64_t d);
  static BudgetSeq list(std::vector<std::int64_t> values);
  static BudgetSeq exponential(std::int64_t c, std::int64_t base);
  static BudgetSeq turn_sum(const BudgetSeq& inner, std::int64_t r);
  static BudgetSeq scaled(const BudgetSeq& inner, std::int64_t factor);
  static BudgetSeq callback(std::function<std::int64_t(std::int64_t)> fn, std::string label);

  static BudgetSeq parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  /// f_n for n >= 1.
  std::int64_t at(std::int64_t n) const;
  std::string to_string() const;
  bool serializable() const;

  /// First index n with f_{n+1} < f_n, if any. Closed forms are decided
  /// exactly; lists and callbacks are scanned up to `horizon`.
  std::optional<std::int64_t> first_decrease(std::int64_t horizon = 4096) const;
  bool is_nondecreasing(std::int64_t horizon = 4096) const { return !first_decrease(horizon); }

  GrowthClass growth_class() const;

  /// Exact sum_{k>=1} f_k x^k for 0 <= x < 1, when the kind admits a closed
  /// form and the series converges. std::nullopt otherwise.
  std::optional<Rational> weighted_tail(const Rational& x) const;

  std::int64_t c() const noexcept { return a_; }
  std::int64_t d() const noexcept { return b_; }
  const std::vector<std::int64_t>& values() const noexcept { return values_; }
  const BudgetSeq* inner() const noexcept { return inner_.get(); }

 private:
  Kind kind_ = Kind::constant;
  std::int64_t a_ = 0;  // constant c / poly c / exp c / turn_sum r / scaled factor
  std::int64_t b_ = 0;  // poly d / exp base
  std::vector<std::int64_t> values_;
  std::shared_ptr<const BudgetSeq> inner_;
  std::shared_ptr<const std::function<std::int64_t(std::int64_t)>> fn_;
  std::string label_;
};

/// Saturating helpers shared by budget arithmetic.
std::int64_t sat_add(std::int64_t a, std::int64_t b);
std::int64_t sat_mul(std::int64_t a, std::int64_t b);
std::int64_t sat_pow(std::int64_t base, std::int64_t exp);

/// Coefficients of the Eulerian polynomial A_d, so that
/// sum_{k>=1} k^d x^k = x A_d(x) / (1-x)^{d+1}.
std::vector<BigInt> eulerian_row(std::int64_t d);

/// Exact sum_{k>=1} k^d x^k for 0 <= x < 1.
Rational power_series(std::int64_t d, const Rational& x);

}  // namespace firegraph
