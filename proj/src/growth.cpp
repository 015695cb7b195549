#include "firegraph/growth.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "firegraph/error.hpp"
#include "firegraph/flow.hpp"

namespace firegraph {

GrowthProfile profile(const LazyGraph& g, std::int64_t horizon) {
  if (horizon < 0) throw Error(ErrorCode::invalid_argument, "horizon must be nonnegative");
  GrowthProfile out;
  out.root = g.base();
  out.horizon = horizon;
  BallGrower grower(g, std::span<const VertexKey>(&g.base(), 1));
  grower.grow_to(horizon);
  std::int64_t total = 0;
  for (std::int64_t n = 0; n <= horizon; ++n) {
    const auto s = static_cast<std::int64_t>(grower.layer(n).size());
    total += s;
    out.sphere.push_back(s);
    out.beta.push_back(total);
    out.beta1.push_back(s);  // beta1[0] = beta[0] = s_0
    out.beta2.push_back(n == 0 ? 0 : s - out.sphere[static_cast<std::size_t>(n - 1)]);
  }
  return out;
}

std::int64_t faulhaber(std::int64_t n, std::int64_t d) {
  if (n < 0 || d < 1) throw Error(ErrorCode::invalid_argument, "faulhaber needs n >= 0 and d >= 1");
  std::int64_t total = 0;
  for (std::int64_t k = 1; k <= n; ++k) {
    std::int64_t term = 1;
    for (std::int64_t i = 1; i < d; ++i) {
      if (__builtin_mul_overflow(term, k, &term)) {
        throw Error(ErrorCode::resource_limit, "faulhaber sum overflows 64 bits");
      }
    }
    if (__builtin_add_overflow(total, term, &total)) {
      throw Error(ErrorCode::resource_limit, "faulhaber sum overflows 64 bits");
    }
  }
  return total;
}

namespace {

std::int64_t to_i64(const BigInt& v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() / 4 || v < 0) {
    throw Error(ErrorCode::invalid_argument, std::string(what) + " is out of range for exact flow");
  }
  return v.convert_to<std::int64_t>();
}

}  // namespace

ExpansionReport check_expansion(const LazyGraph& g, BallGrower& grower, std::int64_t level,
                                const Rational& lambda) {
  if (level < 0) throw Error(ErrorCode::invalid_argument, "level must be nonnegative");
  if (lambda <= 0) throw Error(ErrorCode::invalid_argument, "lambda must be positive");
  const std::int64_t p = to_i64(boost::multiprecision::numerator(lambda), "lambda numerator");
  const std::int64_t q = to_i64(boost::multiprecision::denominator(lambda), "lambda denominator");

  grower.grow_to(level + 1);
  const std::vector<VertexKey> sn = grower.layer(level);
  const std::vector<VertexKey> next = grower.layer(level + 1);

  ExpansionReport report;
  report.level = level;
  report.lambda = lambda;
  report.sphere_size = static_cast<std::int64_t>(sn.size());
  report.next_size = static_cast<std::int64_t>(next.size());
  report.required_flow = p * report.sphere_size;

  // nodes: 0 source, 1 sink, then S_n, then S_{n+1}
  const int source = 0, sink = 1;
  const int offset_a = 2, offset_b = 2 + static_cast<int>(sn.size());
  MaxFlow flow(offset_b + static_cast<int>(next.size()));
  std::unordered_map<VertexKey, int, VertexKeyHash> index_b;
  for (std::size_t j = 0; j < next.size(); ++j) {
    index_b.emplace(next[j], offset_b + static_cast<int>(j));
    flow.add_edge(offset_b + static_cast<int>(j), sink, q);
  }
  const std::int64_t infinite = report.required_flow + 1;
  std::vector<std::vector<int>> forward(sn.size());
  for (std::size_t i = 0; i < sn.size(); ++i) {
    flow.add_edge(source, offset_a + static_cast<int>(i), p);
    for (const auto& w : g.neighbors(sn[i])) {
      if (auto it = index_b.find(w); it != index_b.end()) {
        forward[i].push_back(it->second);
        flow.add_edge(offset_a + static_cast<int>(i), it->second, infinite);
      }
    }
  }
  report.flow = flow.run(source, sink);
  report.holds = report.flow == report.required_flow;

  const auto to_sink = flow.reaches_sink(sink);
  std::vector<bool> in_star(next.size(), false);
  for (std::size_t i = 0; i < sn.size(); ++i) {
    if (to_sink[static_cast<std::size_t>(offset_a) + i]) continue;
    report.witness.push_back(sn[i]);
    for (int b : forward[i]) in_star[static_cast<std::size_t>(b - offset_b)] = true;
  }
  report.witness_forward = std::count(in_star.begin(), in_star.end(), true);
  if (report.sphere_size == 0) report.note = "empty sphere";
  return report;
}

ExpansionReport check_expansion(const LazyGraph& g, std::int64_t level, const Rational& lambda) {
  BallGrower grower(g, std::span<const VertexKey>(&g.base(), 1));
  return check_expansion(g, grower, level, lambda);
}

std::vector<ExpansionReport> check_homogeneous(const LazyGraph& g, std::int64_t from, std::int64_t to) {
  std::vector<ExpansionReport> out;
  BallGrower grower(g, std::span<const VertexKey>(&g.base(), 1));
  for (std::int64_t n = std::max<std::int64_t>(from, 0); n <= to; ++n) {
    grower.grow_to(n + 1);
    const auto sn = static_cast<std::int64_t>(grower.layer(n).size());
    const auto sn1 = static_cast<std::int64_t>(grower.layer(n + 1).size());
    if (sn == 0) {
      ExpansionReport r;
      r.level = n;
      r.note = "empty sphere";
      out.push_back(std::move(r));
      continue;
    }
    if (sn1 < sn) {
      ExpansionReport r;
      r.level = n;
      r.lambda = Rational(sn1, sn);
      r.sphere_size = sn;
      r.next_size = sn1;
      r.note = "sphere sizes decrease";
      out.push_back(std::move(r));
      continue;
    }
    out.push_back(check_expansion(g, grower, n, Rational(sn1, sn)));
  }
  return out;
}

Rational geometric_tail(std::int64_t c, std::int64_t d, const Rational& lambda) {
  if (lambda <= 1) throw Error(ErrorCode::invalid_argument, "geometric tail needs lambda > 1");
  return Rational(c) * power_series(d, Rational(1) / lambda);
}

std::optional<Rational> budget_tail(const BudgetSeq& f, const Rational& lambda) {
  if (lambda <= 1) throw Error(ErrorCode::invalid_argument, "budget tail needs lambda > 1");
  return f.weighted_tail(Rational(1) / lambda);
}

std::string to_string(SeriesVerdict verdict) {
  switch (verdict) {
    case SeriesVerdict::converges: return "converges";
    case SeriesVerdict::diverges: return "diverges";
    case SeriesVerdict::unknown: return "unknown";
  }
  return "unknown";
}

std::string SphereShape::to_string() const {
  switch (kind) {
    case Kind::polynomial: return "polynomial degree " + std::to_string(degree);
    case Kind::exponential: return "exponential";
    case Kind::unrecognized: return "unrecognized";
  }
  return "unrecognized";
}

SphereShape recognize_shape(const std::vector<std::int64_t>& sphere) {
  SphereShape shape;
  const auto n_max = static_cast<std::int64_t>(sphere.size()) - 1;
  if (n_max < 4) return shape;
  const std::int64_t lo = std::max<std::int64_t>(1, n_max / 2);
  std::vector<BigInt> window;
  for (std::int64_t n = lo; n <= n_max; ++n) window.emplace_back(sphere[static_cast<std::size_t>(n)]);
  // smallest e whose (e+1)-th differences vanish, with at least two samples left to compare
  std::vector<BigInt> diff = window;
  for (std::int64_t e = 0; static_cast<std::int64_t>(diff.size()) >= 3; ++e) {
    std::vector<BigInt> next;
    for (std::size_t i = 0; i + 1 < diff.size(); ++i) next.push_back(diff[i + 1] - diff[i]);
    if (std::all_of(next.begin(), next.end(), [](const BigInt& v) { return v == 0; })) {
      shape.kind = SphereShape::Kind::polynomial;
      shape.degree = e;
      return shape;
    }
    diff = std::move(next);
  }
  bool exponential = true;
  for (std::size_t i = 0; i + 1 < window.size(); ++i) {
    if (window[i] <= 0 || BigInt(2) * window[i + 1] < BigInt(3) * window[i]) exponential = false;
  }
  if (exponential) shape.kind = SphereShape::Kind::exponential;
  return shape;
}

RatioSeries ratio_series(const BudgetSeq& f, const std::vector<std::int64_t>& sphere) {
  RatioSeries out;
  Rational total(0);
  for (std::size_t n = 1; n < sphere.size(); ++n) {
    if (sphere[n] <= 0) {
      out.reason = "sphere " + std::to_string(n) + " is empty";
      return out;
    }
    total += Rational(f.at(static_cast<std::int64_t>(n)), sphere[n]);
    out.prefix.push_back(total);
  }
  out.shape = recognize_shape(sphere);
  out.budget_class = f.growth_class();
  using Tag = GrowthClass::Tag;
  using Kind = SphereShape::Kind;
  if (out.budget_class.tag == Tag::other) {
    out.reason = "budget has no recognized closed form";
    return out;
  }
  if (f.at(1'000'000) == 0) {
    out.verdict = SeriesVerdict::converges;
    out.reason = "budget vanishes eventually";
    return out;
  }
  if (out.shape.kind == Kind::unrecognized) {
    out.reason = "sphere sizes have no recognized shape";
    return out;
  }
  const bool poly_f = out.budget_class.tag == Tag::polynomial;
  if (out.shape.kind == Kind::polynomial && poly_f) {
    const std::int64_t gap = out.shape.degree - out.budget_class.degree;
    out.verdict = gap >= 2 ? SeriesVerdict::converges : SeriesVerdict::diverges;
    out.reason = "terms of order n^" + std::to_string(-gap);
  } else if (out.shape.kind == Kind::exponential && poly_f) {
    out.verdict = SeriesVerdict::converges;
    out.reason = "polynomial budget over exponential spheres";
  } else if (out.shape.kind == Kind::polynomial && !poly_f) {
    out.verdict = SeriesVerdict::diverges;
    out.reason = "exponential budget over polynomial spheres";
  } else {
    out.reason = "exponential budget over exponential spheres";
  }
  return out;
}

RearrangeResult rearrange_check(const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& p,
                                const std::vector<std::int64_t>& s) {
  if (f.size() != p.size() || f.size() != s.size()) {
    throw Error(ErrorCode::invalid_argument, "f, p and s must have the same length");
  }
  RearrangeResult out;
  std::int64_t sum_f = 0, sum_p = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::string index = std::to_string(i + 1);
    if (s[i] <= 0) throw Error(ErrorCode::hypothesis_violation, "s is not positive at index " + index, {index});
    if (i > 0 && s[i] < s[i - 1]) {
      throw Error(ErrorCode::hypothesis_violation, "s decreases at index " + index, {index});
    }
    if (f[i] < 0 || p[i] < 0) {
      throw Error(ErrorCode::hypothesis_violation, "negative entry at index " + index, {index});
    }
    sum_f += f[i];
    sum_p += p[i];
    if (sum_p > sum_f) {
      throw Error(ErrorCode::hypothesis_violation, "prefix sum of p exceeds that of f at index " + index,
                  {index});
    }
    out.lhs += Rational(p[i], s[i]);
    out.rhs += Rational(f[i], s[i]);
    if (out.holds && out.lhs > out.rhs) {
      out.holds = false;
      out.failing_index = i + 1;
    }
  }
  return out;
}

DegreeEstimate degree_estimate(const GrowthProfile& prof) {
  DegreeEstimate out;
  out.note = "finite-horizon heuristic";
  const std::int64_t n_max = prof.horizon;
  if (n_max < 8) {
    out.inconclusive = true;
    out.note += "; horizon below 8";
    return out;
  }
  const std::int64_t lo = n_max / 2;
  bool fast = true;
  for (std::int64_t n = lo; n < n_max; ++n) {
    const auto a = prof.sphere[static_cast<std::size_t>(n)];
    const auto b = prof.sphere[static_cast<std::size_t>(n + 1)];
    if (a <= 0 || 2 * static_cast<__int128>(b) < 3 * static_cast<__int128>(a)) fast = false;
  }
  if (fast) {
    out.super_polynomial = true;
    out.inconclusive = true;
    out.note += "; sphere sizes grow by a factor >= 3/2 per step";
    return out;
  }
  for (std::int64_t d = 1; d <= 64; ++d) {
    auto ratio = [&](std::int64_t n) {
      BigInt power = 1;
      for (std::int64_t i = 1; i < d; ++i) power *= n;
      return Rational(BigInt(prof.sphere[static_cast<std::size_t>(n)]), power);
    };
    Rational lowest = ratio(lo);
    for (std::int64_t n = lo + 1; n <= n_max; ++n) lowest = std::min(lowest, ratio(n));
    // bounded: the ratio at the end of the window has not grown past 5/4 of its start
    if (ratio(n_max) * 4 <= ratio(lo) * 5) {
      out.degree = d;
      out.witness = lowest;
      return out;
    }
  }
  out.inconclusive = true;
  return out;
}

}  // namespace firegraph
