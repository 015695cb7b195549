#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "firegraph/budget.hpp"
#include "firegraph/lazy_graph.hpp"
#include "firegraph/rational.hpp"

namespace firegraph {

/// Growth data of a rooted graph up to horizon N.
///   beta[n]  = |B(g_0, n)|
///   beta1[n] = beta[n] - beta[n-1], beta1[0] = beta[0]
///   beta2[n] = beta1[n] - beta1[n-1] for n >= 1 (beta2[0] is unused, kept 0)
///   sphere[n] = |S_n|
struct GrowthProfile {
  VertexKey root;
  std::int64_t horizon = 0;
  std::vector<std::int64_t> beta, beta1, beta2, sphere;
};

GrowthProfile profile(const LazyGraph& g, std::int64_t horizon);

/// p_{n,d} = sum_{k=1..n} k^{d-1}. Throws resource_limit on int64 overflow.
std::int64_t faulhaber(std::int64_t n, std::int64_t d);

struct ExpansionReport {
  std::int64_t level = 0;
  Rational lambda;
  bool holds = false;
  std::int64_t sphere_size = 0;
  std::int64_t next_size = 0;
  std::int64_t flow = 0;
  std::int64_t required_flow = 0;  // p * s_n
  /// S_n part of the maximal minimum cut. On failure it is a subset A with
  /// q|A*| < p|A|; when the check holds and it is nonempty, it is a tight
  /// subset with q|A*| = p|A|.
  std::vector<VertexKey> witness;
  std::int64_t witness_forward = 0;  // |A*|
  std::string note;
};

/// Decides q|A*| >= p|A| for every A in S_n (lambda = p/q) by max-flow.
ExpansionReport check_expansion(const LazyGraph& g, std::int64_t level, const Rational& lambda);

/// Same, reusing an already grown BFS from the base vertex.
ExpansionReport check_expansion(const LazyGraph& g, BallGrower& grower, std::int64_t level,
                                const Rational& lambda);

/// Homogeneity check on levels from..to with lambda_n = s_{n+1} / s_n.
std::vector<ExpansionReport> check_homogeneous(const LazyGraph& g, std::int64_t from,
                                               std::int64_t to);

/// c * sum_{k>=1} k^d / lambda^k, exact, for lambda > 1.
Rational geometric_tail(std::int64_t c, std::int64_t d, const Rational& lambda);

/// sum_{k>=1} f_k / lambda^k, exact when the budget has a closed form.
std::optional<Rational> budget_tail(const BudgetSeq& f, const Rational& lambda);

enum class SeriesVerdict { converges, diverges, unknown };
std::string to_string(SeriesVerdict verdict);

/// Shape recognized in a sphere-size sequence.
struct SphereShape {
  enum class Kind { polynomial, exponential, unrecognized };
  Kind kind = Kind::unrecognized;
  std::int64_t degree = 0;  // polynomial only: s_n agrees with a degree-e polynomial on the window
  std::string to_string() const;
};

/// Polynomial when finite differences vanish on the tail half of the data,
/// exponential when s_{n+1}/s_n >= 3/2 there.
SphereShape recognize_shape(const std::vector<std::int64_t>& sphere);

struct RatioSeries {
  std::vector<Rational> prefix;  // prefix[k-1] = sum_{n=1..k} f_n / s_n
  SphereShape shape;
  GrowthClass budget_class;
  SeriesVerdict verdict = SeriesVerdict::unknown;
  std::string reason;
};

/// Partial sums of sum f_n / s_n over the available sphere sizes plus a
/// convergence verdict when both sequences have a recognized shape.
RatioSeries ratio_series(const BudgetSeq& f, const std::vector<std::int64_t>& sphere);

struct RearrangeResult {
  bool holds = true;
  std::optional<std::size_t> failing_index;  // 1-based
  Rational lhs, rhs;                         // totals at the last index
};

/// Checks sum_{i<=k} p_i/s_i <= sum_{i<=k} f_i/s_i for every k, given s
/// positive nondecreasing and sum p <= sum f on every prefix. Precondition
/// failures throw hypothesis_violation with the 1-based index in detail.
RearrangeResult rearrange_check(const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& p,
                                const std::vector<std::int64_t>& s);

struct DegreeEstimate {
  std::optional<std::int64_t> degree;
  Rational witness;  // min of s_n / n^{d-1} over the window
  bool super_polynomial = false;
  bool inconclusive = false;
  std::string note;
};

/// Finite-horizon heuristic for the smallest d with s_n / n^{d-1} bounded.
DegreeEstimate degree_estimate(const GrowthProfile& profile);

}  // namespace firegraph
