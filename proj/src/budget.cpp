#include "firegraph/budget.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "firegraph/error.hpp"

namespace firegraph {

namespace {

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

[[noreturn]] void bad_budget(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::parse_error, "bad budget '" + std::string(text) + "': " + why);
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    bad_budget(whole, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::int64_t> parse_ints(std::string_view text, std::string_view whole) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (true) {
    auto comma = text.find(',', pos);
    out.push_back(parse_int(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                             : comma - pos),
                            whole));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void require_nonneg(std::int64_t v, const char* what) {
  if (v < 0) throw Error(ErrorCode::invalid_argument, std::string(what) + " must be nonnegative");
}

// sum_{n >= n0} P(n) x^n where P has degree <= deg and P(n0 + j) = samples[j]
Rational polynomial_tail(std::vector<Rational> samples, std::int64_t n0, const Rational& x) {
  const Rational one(1);
  Rational total(0);
  Rational xn0(1);
  for (std::int64_t i = 0; i < n0; ++i) xn0 *= x;
  // forward differences at n0: sum_m C(m, j) x^m = x^j / (1-x)^{j+1}
  Rational xj(1), denom = one - x;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    total += samples[0] * xj / denom;
    for (std::size_t i = 0; i + 1 < samples.size() - j; ++i) samples[i] = samples[i + 1] - samples[i];
    xj *= x;
    denom *= one - x;
  }
  return total * xn0;
}

}  // namespace

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  return __builtin_add_overflow(a, b, &out) ? kMax : out;
}

std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  return __builtin_mul_overflow(a, b, &out) ? kMax : out;
}

std::int64_t sat_pow(std::int64_t base, std::int64_t exp) {
  std::int64_t out = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    out = sat_mul(out, base);
    if (out == kMax) break;
  }
  return out;
}

std::string GrowthClass::to_string() const {
  switch (tag) {
    case Tag::polynomial: return "O(n^" + std::to_string(degree) + ")";
    case Tag::exponential: return "exponential";
    case Tag::other: return "other";
  }
  return "other";
}

BudgetSeq BudgetSeq::constant(std::int64_t c) {
  require_nonneg(c, "constant budget");
  BudgetSeq out;
  out.kind_ = Kind::constant;
  out.a_ = c;
  return out;
}

BudgetSeq BudgetSeq::polynomial(std::int64_t c, std::int64_t d) {
  require_nonneg(c, "polynomial coefficient");
  require_nonneg(d, "polynomial degree");
  BudgetSeq out;
  out.kind_ = Kind::polynomial;
  out.a_ = c;
  out.b_ = d;
  return out;
}

BudgetSeq BudgetSeq::list(std::vector<std::int64_t> values) {
  for (auto v : values) require_nonneg(v, "budget entry");
  BudgetSeq out;
  out.kind_ = Kind::list;
  out.values_ = std::move(values);
  return out;
}

BudgetSeq BudgetSeq::exponential(std::int64_t c, std::int64_t base) {
  require_nonneg(c, "exponential coefficient");
  require_nonneg(base, "exponential base");
  BudgetSeq out;
  out.kind_ = Kind::exponential;
  out.a_ = c;
  out.b_ = base;
  return out;
}

BudgetSeq BudgetSeq::turn_sum(const BudgetSeq& inner, std::int64_t r) {
  if (r < 1) throw Error(ErrorCode::invalid_argument, "turn sum needs r >= 1");
  BudgetSeq out;
  out.kind_ = Kind::turn_sum;
  out.a_ = r;
  out.inner_ = std::make_shared<const BudgetSeq>(inner);
  return out;
}

BudgetSeq BudgetSeq::scaled(const BudgetSeq& inner, std::int64_t factor) {
  require_nonneg(factor, "budget factor");
  BudgetSeq out;
  out.kind_ = Kind::scaled;
  out.a_ = factor;
  out.inner_ = std::make_shared<const BudgetSeq>(inner);
  return out;
}

BudgetSeq BudgetSeq::callback(std::function<std::int64_t(std::int64_t)> fn, std::string label) {
  BudgetSeq out;
  out.kind_ = Kind::callback;
  out.fn_ = std::make_shared<const std::function<std::int64_t(std::int64_t)>>(std::move(fn));
  out.label_ = std::move(label);
  return out;
}

BudgetSeq BudgetSeq::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) bad_budget(text, "empty");
  auto colon = text.find(':');
  if (colon == std::string_view::npos) return constant(parse_int(text, text));
  const std::string_view head = text.substr(0, colon), rest = text.substr(colon + 1);
  if (head == "poly" || head == "exp") {
    auto v = parse_ints(rest, text);
    if (v.size() != 2) bad_budget(text, "expected two integers");
    return head == "poly" ? polynomial(v[0], v[1]) : exponential(v[0], v[1]);
  }
  if (head == "list") return list(parse_ints(rest, text));
  if (head == "sum" || head == "mul") {
    auto open = rest.find('(');
    if (open == std::string_view::npos || rest.back() != ')') bad_budget(text, "expected k(<inner>)");
    const std::int64_t k = parse_int(rest.substr(0, open), text);
    BudgetSeq inner = parse(rest.substr(open + 1, rest.size() - open - 2));
    return head == "sum" ? turn_sum(inner, k) : scaled(inner, k);
  }
  bad_budget(text, "unknown kind '" + std::string(head) + "'");
}

std::int64_t BudgetSeq::at(std::int64_t n) const {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "budget index starts at 1");
  switch (kind_) {
    case Kind::constant: return a_;
    case Kind::polynomial: return sat_mul(a_, sat_pow(n, b_));
    case Kind::list:
      if (values_.empty()) return 0;
      return values_[static_cast<std::size_t>(std::min<std::int64_t>(n, values_.size()) - 1)];
    case Kind::exponential: return sat_mul(a_, sat_pow(b_, n));
    case Kind::turn_sum: {
      std::int64_t total = 0;
      for (std::int64_t i = 1; i <= a_; ++i) total = sat_add(total, inner_->at(a_ * (n - 1) + i));
      return total;
    }
    case Kind::scaled: return sat_mul(a_, inner_->at(n));
    case Kind::callback: {
      const std::int64_t v = (*fn_)(n);
      if (v < 0) throw Error(ErrorCode::invalid_argument, "budget callback returned a negative value");
      return v;
    }
  }
  return 0;
}

std::string BudgetSeq::to_string() const {
  switch (kind_) {
    case Kind::constant: return std::to_string(a_);
    case Kind::polynomial: return "poly:" + std::to_string(a_) + "," + std::to_string(b_);
    case Kind::list: {
      std::string out = "list:";
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values_[i]);
      }
      return out;
    }
    case Kind::exponential: return "exp:" + std::to_string(a_) + "," + std::to_string(b_);
    case Kind::turn_sum: return "sum:" + std::to_string(a_) + "(" + inner_->to_string() + ")";
    case Kind::scaled: return "mul:" + std::to_string(a_) + "(" + inner_->to_string() + ")";
    case Kind::callback: return "callback:" + label_;
  }
  return "?";
}

bool BudgetSeq::serializable() const {
  if (kind_ == Kind::callback) return false;
  return !inner_ || inner_->serializable();
}

std::optional<std::int64_t> BudgetSeq::first_decrease(std::int64_t horizon) const {
  switch (kind_) {
    case Kind::constant:
    case Kind::polynomial:
    case Kind::exponential:
      return std::nullopt;
    case Kind::list:
      for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
        if (values_[i + 1] < values_[i]) return static_cast<std::int64_t>(i + 1);
      }
      return std::nullopt;
    case Kind::scaled:
      if (a_ == 0) return std::nullopt;
      return inner_->first_decrease(horizon);
    case Kind::turn_sum:
      if (!inner_->first_decrease(horizon * a_)) return std::nullopt;
      [[fallthrough]];
    case Kind::callback: {
      std::int64_t prev = at(1);
      for (std::int64_t n = 2; n <= horizon; ++n) {
        const std::int64_t cur = at(n);
        if (cur < prev) return n - 1;
        prev = cur;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

GrowthClass BudgetSeq::growth_class() const {
  using Tag = GrowthClass::Tag;
  switch (kind_) {
    case Kind::constant:
    case Kind::list:
      return {Tag::polynomial, 0};
    case Kind::polynomial: return {Tag::polynomial, a_ == 0 ? 0 : b_};
    case Kind::exponential:
      if (a_ == 0 || b_ <= 1) return {Tag::polynomial, 0};
      return {Tag::exponential, 0};
    case Kind::turn_sum: return inner_->growth_class();
    case Kind::scaled:
      if (a_ == 0) return {Tag::polynomial, 0};
      return inner_->growth_class();
    case Kind::callback: return {Tag::other, 0};
  }
  return {};
}

namespace {

// Index from which the sequence agrees with a polynomial, if it does at all.
std::optional<std::int64_t> polynomial_from(const BudgetSeq& b) {
  switch (b.kind()) {
    case BudgetSeq::Kind::constant:
    case BudgetSeq::Kind::polynomial:
      return 1;
    case BudgetSeq::Kind::list: return std::max<std::int64_t>(1, b.values().size());
    case BudgetSeq::Kind::scaled: return polynomial_from(*b.inner());
    case BudgetSeq::Kind::turn_sum: {
      auto n0 = polynomial_from(*b.inner());
      if (!n0) return std::nullopt;
      return (*n0 + b.c() - 1) / b.c() + 1;
    }
    default: return std::nullopt;
  }
}

struct Geometric {
  BigInt first;  // f_1
  BigInt ratio;  // f_{n+1} = ratio * f_n
};

std::optional<Geometric> geometric_form(const BudgetSeq& b) {
  switch (b.kind()) {
    case BudgetSeq::Kind::exponential: return Geometric{BigInt(b.c()) * b.d(), BigInt(b.d())};
    case BudgetSeq::Kind::scaled: {
      auto g = geometric_form(*b.inner());
      if (!g) return std::nullopt;
      return Geometric{g->first * b.c(), g->ratio};
    }
    case BudgetSeq::Kind::turn_sum: {
      auto g = geometric_form(*b.inner());
      if (!g) return std::nullopt;
      BigInt block = 0, power = 1;
      for (std::int64_t i = 0; i < b.c(); ++i) {
        block += g->first * power;
        power *= g->ratio;
      }
      return Geometric{block, power};
    }
    default: return std::nullopt;
  }
}

}  // namespace

std::optional<Rational> BudgetSeq::weighted_tail(const Rational& x) const {
  if (x < 0 || x >= 1) return std::nullopt;
  if (auto n0 = polynomial_from(*this)) {
    const GrowthClass cls = growth_class();
    Rational total(0), xn(1);
    for (std::int64_t n = 1; n < *n0; ++n) {
      xn *= x;
      total += Rational(at(n)) * xn;
    }
    std::vector<Rational> samples;
    for (std::int64_t j = 0; j <= cls.degree; ++j) {
      const std::int64_t v = at(*n0 + j);
      if (v == std::numeric_limits<std::int64_t>::max()) return std::nullopt;
      samples.emplace_back(v);
    }
    return total + polynomial_tail(std::move(samples), *n0, x);
  }
  if (auto g = geometric_form(*this)) {
    const Rational rx = Rational(g->ratio) * x;
    if (rx >= 1) return std::nullopt;
    return Rational(g->first) * x / (Rational(1) - rx);
  }
  return std::nullopt;
}

std::vector<BigInt> eulerian_row(std::int64_t d) {
  if (d < 0) throw Error(ErrorCode::invalid_argument, "Eulerian row index must be nonnegative");
  std::vector<BigInt> row{1};
  for (std::int64_t n = 2; n <= d; ++n) {
    std::vector<BigInt> next(static_cast<std::size_t>(n), 0);
    for (std::int64_t m = 0; m < n; ++m) {
      BigInt v = 0;
      if (m < n - 1) v += BigInt(m + 1) * row[static_cast<std::size_t>(m)];
      if (m >= 1) v += BigInt(n - m) * row[static_cast<std::size_t>(m - 1)];
      next[static_cast<std::size_t>(m)] = v;
    }
    row = std::move(next);
  }
  return row;
}

Rational power_series(std::int64_t d, const Rational& x) {
  if (x < 0 || x >= 1) throw Error(ErrorCode::invalid_argument, "power series needs 0 <= x < 1");
  const auto row = eulerian_row(d);
  Rational poly(0), xm(1);
  for (const auto& coeff : row) {
    poly += Rational(coeff) * xm;
    xm *= x;
  }
  Rational denom(1);
  for (std::int64_t i = 0; i <= d; ++i) denom *= Rational(1) - x;
  return x * poly / denom;
}

}  // namespace firegraph
