#include "firegraph/synth.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <unordered_map>

#include "firegraph/error.hpp"
#include "firegraph/families.hpp"

namespace firegraph {

namespace {

std::vector<std::vector<VertexKey>> fill_in_order(const std::vector<VertexKey>& sphere,
                                                  const BudgetSeq& budget, std::int64_t turns) {
  std::vector<std::vector<VertexKey>> schedule;
  std::size_t next = 0;
  for (std::int64_t k = 1; k <= turns && next < sphere.size(); ++k) {
    const auto take = std::min<std::size_t>(sphere.size() - next, static_cast<std::size_t>(budget.at(k)));
    schedule.emplace_back(sphere.begin() + static_cast<std::ptrdiff_t>(next),
                          sphere.begin() + static_cast<std::ptrdiff_t>(next + take));
    next += take;
  }
  if (next < sphere.size()) {
    throw Error(ErrorCode::check_failed, "sphere does not fit into the budget over the available turns");
  }
  return schedule;
}

std::vector<VertexKey> ball_members(BallGrower& grower, std::int64_t radius) {
  std::vector<VertexKey> out;
  for (std::int64_t k = 0; k <= radius; ++k) {
    const auto& layer = grower.layer(k);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SynthResult synth_sphere_poly(const LazyGraph& g, std::int64_t d, std::int64_t c, std::int64_t m,
                              const SpherePolyOptions& options) {
  if (d < 2) throw Error(ErrorCode::invalid_argument, "sphere strategy needs d >= 2");
  if (c < 1) throw Error(ErrorCode::invalid_argument, "growth constant c must be positive");
  if (m < 0) throw Error(ErrorCode::invalid_argument, "initial ball radius must be nonnegative");
  const std::int64_t coeff = (d - 1) * (d * c + 1);
  const BudgetSeq budget = d == 2 ? BudgetSeq::constant(coeff) : BudgetSeq::polynomial(coeff, d - 2);

  BallGrower grower(g, std::span<const VertexKey>(&g.base(), 1));
  std::optional<std::int64_t> radius;
  std::int64_t bound = 0;
  for (std::int64_t r = m + 1; r <= m + options.scan_cap; ++r) {
    grower.grow_to(r);
    const auto s_r = static_cast<std::int64_t>(grower.layer(r).size());
    bound = coeff * faulhaber(r - m, d - 1);
    if (s_r <= bound) {
      radius = r;
      break;
    }
  }
  if (!radius) {
    throw Error(ErrorCode::scan_cap_exceeded,
                "no radius up to m + " + std::to_string(options.scan_cap) +
                    " satisfies the sphere bound; the growth hypothesis fails in range");
  }

  SynthResult out;
  out.sphere_radius = *radius;
  out.x0 = ball_members(grower, m);
  out.protected_sphere = grower.layer(*radius);
  out.strategy.spread_radius = 1;
  out.strategy.budget = budget;
  out.strategy.schedule = fill_in_order(out.protected_sphere, budget, *radius - m);
  out.strategy.normalize();

  std::optional<std::int64_t> violation;
  std::int64_t beta = 1;
  for (std::int64_t n = 1; n <= *radius; ++n) {
    beta += static_cast<std::int64_t>(grower.layer(n).size());
    if (beta > sat_mul(c, sat_pow(n, d))) {
      violation = n;
      break;
    }
  }
  out.info["method"] = "sphere-poly";
  out.info["d"] = d;
  out.info["c"] = c;
  out.info["m"] = m;
  out.info["r"] = *radius;
  out.info["s_r"] = out.protected_sphere.size();
  out.info["sphere_bound"] = bound;
  out.info["growth_bound_holds"] = !violation;
  out.info["growth_bound_first_violation"] = violation ? Json(*violation) : Json(nullptr);
  return out;
}

SynthResult synth_second_difference(const LazyGraph& g, std::int64_t n, std::int64_t scan_cap) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "initial ball radius must be nonnegative");
  BallGrower grower(g, std::span<const VertexKey>(&g.base(), 1));
  // beta'(0) = beta(0) = 1 and beta'(k) = s_k afterwards, which coincide here
  auto beta1 = [&](std::int64_t k) { return static_cast<std::int64_t>(grower.layer(k).size()); };
  auto beta2 = [&](std::int64_t k) { return beta1(k) - beta1(k - 1); };

  std::int64_t checked = 0;
  auto check_upto = [&](std::int64_t limit) {
    for (std::int64_t i = checked + 1; i <= limit; ++i) {
      const std::int64_t v = beta2(i);
      const std::string index = std::to_string(i);
      if (v < 0) {
        throw Error(ErrorCode::hypothesis_violation,
                    "second difference of the growth function is negative at index " + index, {index});
      }
      if (i >= 2 && v < beta2(i - 1)) {
        throw Error(ErrorCode::hypothesis_violation,
                    "second difference of the growth function decreases at index " + index, {index});
      }
    }
    checked = std::max(checked, limit);
  };

  std::optional<std::int64_t> chosen;
  std::int64_t acc = 0;
  const std::int64_t target = beta1(n);
  const std::int64_t start = std::max(n + 1, 2 * n);
  for (std::int64_t k = 1; k <= start - n - 1; ++k) {
    check_upto(2 * k);
    acc += beta2(2 * k);
  }
  for (std::int64_t m = start; m - n <= scan_cap; ++m) {
    check_upto(2 * (m - n));
    acc += beta2(2 * (m - n));
    if (acc >= target) {
      chosen = m;
      break;
    }
  }
  if (!chosen) {
    throw Error(ErrorCode::scan_cap_exceeded, "no qualifying sphere radius within the scan cap");
  }
  const std::int64_t m = *chosen;

  std::vector<std::int64_t> f;
  std::int64_t total = 0;
  for (std::int64_t k = 1; k <= m - n; ++k) {
    f.push_back(3 * beta2(2 * k));
    total += f.back();
  }
  if (total < beta1(m)) {
    throw Error(ErrorCode::check_failed, "budget sum " + std::to_string(total) +
                                             " does not cover the sphere of size " + std::to_string(beta1(m)));
  }
  const bool flat = std::all_of(f.begin(), f.end(), [&](std::int64_t v) { return v == f.front(); });

  SynthResult out;
  out.sphere_radius = m;
  out.x0 = ball_members(grower, n);
  out.protected_sphere = grower.layer(m);
  out.strategy.spread_radius = 1;
  out.strategy.budget = flat ? BudgetSeq::constant(f.front()) : BudgetSeq::list(f);
  out.strategy.schedule = fill_in_order(out.protected_sphere, out.strategy.budget, m - n);
  out.strategy.normalize();

  Json second = Json::array();
  for (std::int64_t i = 1; i <= checked; ++i) second.push_back(beta2(i));
  out.info["method"] = "second-diff";
  out.info["n"] = n;
  out.info["m"] = m;
  out.info["s_m"] = out.protected_sphere.size();
  out.info["budget_sum"] = total;
  out.info["beta2"] = std::move(second);
  return out;
}

SynthResult synth_cut_vertex(const LazyGraph& g, std::span<const VertexKey> x0, std::int64_t r) {
  if (r < 1) throw Error(ErrorCode::invalid_argument, "spread radius must be positive");
  if (g.base().kind != KeyKind::subexp) {
    throw Error(ErrorCode::invalid_argument, "cut-vertex strategy needs the subexp family");
  }
  std::int64_t top = 0;
  for (const auto& v : x0) {
    if (v.kind != KeyKind::subexp) {
      throw Error(ErrorCode::invalid_argument, "not a subexp vertex: " + to_string(v), {to_string(v)});
    }
    top = std::max(top, v.payload[0]);
  }
  std::int64_t k = 0;
  while (k * (k + 1) < top + r + 1) ++k;
  const std::int64_t m = k * (k + 1);

  SynthResult out;
  out.x0.assign(x0.begin(), x0.end());
  std::sort(out.x0.begin(), out.x0.end());
  out.sphere_radius = m;
  out.protected_sphere = {VertexKey::subexp(m, 1)};
  out.strategy.spread_radius = r;
  out.strategy.budget = BudgetSeq::constant(1);
  out.strategy.schedule = {out.protected_sphere};
  out.info["method"] = "cut-vertex";
  out.info["cut_level"] = m;
  out.info["r"] = r;
  return out;
}

std::string to_string(OracleResult::Verdict verdict) {
  switch (verdict) {
    case OracleResult::Verdict::containable: return "containable";
    case OracleResult::Verdict::boundary_reached: return "boundary_reached";
    case OracleResult::Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

constexpr std::size_t kWords = 4;
constexpr std::size_t kMaxVertices = kWords * 64;

struct Bits {
  std::array<std::uint64_t, kWords> w{};

  bool test(int i) const { return (w[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1U; }
  void set(int i) { w[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64); }
  int count() const {
    int c = 0;
    for (auto x : w) c += std::popcount(x);
    return c;
  }
  friend bool operator==(const Bits&, const Bits&) = default;
};

struct StateKey {
  Bits burning, protect;
  friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateHash {
  std::size_t operator()(const StateKey& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto x : k.burning.w) h = (h ^ x) * 0x100000001b3ULL;
    for (auto x : k.protect.w) h = (h ^ (x + 0x9e3779b97f4a7c15ULL)) * 0x100000001b3ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct Value {
  bool win = false;
  int burned = 0;
  int turns = 0;
  std::vector<int> move;  // best first move from this state

  bool better_than(const Value& other) const {
    if (win != other.win) return win;
    if (!win) return false;
    if (burned != other.burned) return burned < other.burned;
    return turns < other.turns;
  }
};

struct NodeCap {};

class Solver {
 public:
  Solver(std::vector<std::vector<int>> adj, std::vector<std::int64_t> dist, std::int64_t radius,
         std::int64_t f, const OracleOptions& options)
      : adj_(std::move(adj)), dist_(std::move(dist)), radius_(radius), f_(f), options_(options) {}

  // spreads in place; returns false when nothing new caught fire
  bool spread(Bits& burning, const Bits& protect) const {
    std::vector<int> frontier;
    for (int v = 0; v < size(); ++v) {
      if (burning.test(v)) frontier.push_back(v);
    }
    bool grew = false;
    for (std::int64_t depth = 0; depth < options_.spread_radius && !frontier.empty(); ++depth) {
      std::vector<int> next;
      for (int v : frontier) {
        for (int u : adj_[static_cast<std::size_t>(v)]) {
          if (burning.test(u) || protect.test(u)) continue;
          burning.set(u);
          next.push_back(u);
          grew = true;
        }
      }
      frontier = std::move(next);
    }
    return grew;
  }

  bool touches_boundary(const Bits& burning) const {
    for (int v = 0; v < size(); ++v) {
      if (burning.test(v) && dist_[static_cast<std::size_t>(v)] >= radius_) return true;
    }
    return false;
  }

  // free vertices the fire can still reach, optionally limited in distance
  std::vector<int> candidates(const Bits& burning, const Bits& protect) const {
    std::vector<int> reach_dist(static_cast<std::size_t>(size()), -1);
    std::vector<int> frontier;
    for (int v = 0; v < size(); ++v) {
      if (burning.test(v)) frontier.push_back(v);
    }
    std::vector<int> out;
    for (int depth = 1; !frontier.empty(); ++depth) {
      if (options_.candidate_radius && depth > *options_.candidate_radius) break;
      std::vector<int> next;
      for (int v : frontier) {
        for (int u : adj_[static_cast<std::size_t>(v)]) {
          if (burning.test(u) || protect.test(u) || reach_dist[static_cast<std::size_t>(u)] >= 0) continue;
          reach_dist[static_cast<std::size_t>(u)] = depth;
          next.push_back(u);
          out.push_back(u);
        }
      }
      frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const Value& solve(const Bits& burning, const Bits& protect) {
    StateKey key{burning, protect};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (++nodes_ > options_.node_cap) throw NodeCap{};

    Value best;
    const auto cand = candidates(burning, protect);
    const int k = static_cast<int>(std::min<std::int64_t>(f_, static_cast<std::int64_t>(cand.size())));
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
    bool first = true;
    while (true) {
      Bits p = protect;
      std::vector<int> move;
      for (int i : pick) {
        p.set(cand[static_cast<std::size_t>(i)]);
        move.push_back(cand[static_cast<std::size_t>(i)]);
      }
      Bits b = burning;
      Value value;
      if (!spread(b, p)) {
        value.win = true;
        value.burned = b.count();
        value.turns = 1;
      } else if (b.count() > burn_limit_) {
        // pruned: remember how far the limit must grow to look here
        const int c = b.count();
        if (!next_limit_ || c < *next_limit_) next_limit_ = c;
      } else if (!touches_boundary(b)) {
        const Value& sub = solve(b, p);
        value.win = sub.win;
        value.burned = sub.burned;
        value.turns = sub.turns + 1;
      }
      if (first || value.better_than(best)) {
        value.move = std::move(move);
        best = std::move(value);
        first = false;
      }
      // next k-combination of candidate positions
      int i = k - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == static_cast<int>(cand.size()) - k + i) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return memo_.emplace(std::move(key), std::move(best)).first->second;
  }

  std::vector<std::vector<int>> witness(Bits burning, Bits protect) {
    std::vector<std::vector<int>> out;
    while (true) {
      const Value& v = solve(burning, protect);
      out.push_back(v.move);
      for (int u : v.move) protect.set(u);
      if (!spread(burning, protect)) break;
    }
    return out;
  }

  int size() const { return static_cast<int>(adj_.size()); }
  std::size_t nodes() const { return nodes_; }

  /// Restart with a new bound on the burned count; states above it count as lost.
  void set_burn_limit(int limit) {
    burn_limit_ = limit;
    next_limit_.reset();
    memo_.clear();
  }
  std::optional<int> next_limit() const { return next_limit_; }

 private:
  std::vector<std::vector<int>> adj_;
  std::vector<std::int64_t> dist_;
  std::int64_t radius_;
  std::int64_t f_;
  OracleOptions options_;
  std::unordered_map<StateKey, Value, StateHash> memo_;
  std::size_t nodes_ = 0;
  int burn_limit_ = 0;
  std::optional<int> next_limit_;
};

}  // namespace

OracleResult minimax_oracle(const LazyGraph& g, std::span<const VertexKey> x0, std::int64_t f,
                            std::int64_t truncation_radius, const OracleOptions& options) {
  if (f < 0) throw Error(ErrorCode::invalid_argument, "budget must be nonnegative");
  if (truncation_radius < 1) throw Error(ErrorCode::invalid_argument, "truncation radius must be >= 1");
  if (x0.empty()) throw Error(ErrorCode::invalid_argument, "initial fire must be nonempty");
  OracleResult result;
  result.exhaustive = !options.candidate_radius;

  BallGrower grower(g, x0);
  grower.grow_to(truncation_radius);
  std::vector<VertexKey> members;
  for (std::int64_t k = 0; k <= grower.radius(); ++k) {
    const auto& layer = grower.layer(k);
    members.insert(members.end(), layer.begin(), layer.end());
  }
  std::sort(members.begin(), members.end());
  result.ball_size = members.size();
  if (members.size() > kMaxVertices) {
    result.note = "truncated ball has " + std::to_string(members.size()) + " vertices; the search handles at most " +
                  std::to_string(kMaxVertices);
    return result;
  }
  std::unordered_map<VertexKey, int, VertexKeyHash> index;
  for (std::size_t i = 0; i < members.size(); ++i) index.emplace(members[i], static_cast<int>(i));
  std::vector<std::vector<int>> adj(members.size());
  std::vector<std::int64_t> dist(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    dist[i] = *grower.distance_of(members[i]);
    for (const auto& w : g.neighbors(members[i])) {
      if (auto it = index.find(w); it != index.end()) adj[i].push_back(it->second);
    }
  }

  Solver solver(std::move(adj), std::move(dist), truncation_radius, f, options);
  Bits burning, protect;
  for (const auto& v : x0) burning.set(index.at(v));
  try {
    // iterative deepening on the burned count: the first limit that admits
    // a win yields the minimum, and a loss with nothing pruned is final
    int limit = burning.count();
    const Value* found = nullptr;
    while (true) {
      solver.set_burn_limit(limit);
      const Value& value = solver.solve(burning, protect);
      if (value.win || !solver.next_limit()) {
        found = &value;
        break;
      }
      limit = *solver.next_limit();
    }
    const Value& root = *found;
    result.nodes = solver.nodes();
    if (root.win) {
      result.verdict = OracleResult::Verdict::containable;
      result.burned = root.burned;
      result.turns = root.turns;
      for (const auto& move : solver.witness(burning, protect)) {
        std::vector<VertexKey> w;
        for (int u : move) w.push_back(members[static_cast<std::size_t>(u)]);
        result.witness.push_back(std::move(w));
      }
      while (!result.witness.empty() && result.witness.back().empty()) result.witness.pop_back();
    } else if (result.exhaustive) {
      result.verdict = OracleResult::Verdict::boundary_reached;
      result.note = "every schedule lets the fire reach distance " + std::to_string(truncation_radius);
    } else {
      result.note = "restricted search found no containing schedule";
    }
  } catch (const NodeCap&) {
    result.nodes = solver.nodes();
    result.verdict = OracleResult::Verdict::inconclusive;
    result.note = "node cap of " + std::to_string(options.node_cap) + " reached";
  }
  return result;
}

}  // namespace firegraph
