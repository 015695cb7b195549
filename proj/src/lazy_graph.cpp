#include "firegraph/lazy_graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>

#include "firegraph/error.hpp"

namespace firegraph {

std::size_t member_cap() {
  if (const char* env = std::getenv("FIREGRAPH_CAP")) {
    char* end = nullptr;
    unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<std::size_t>(value);
  }
  return default_member_cap;
}

LazyGraph::LazyGraph(std::string name, VertexKey base, std::optional<std::int64_t> degree_bound,
                     NeighborFn neighbors)
    : name_(std::move(name)),
      base_(std::move(base)),
      degree_bound_(degree_bound),
      neighbors_(std::make_shared<const NeighborFn>(std::move(neighbors))) {}

LazyGraph LazyGraph::with_base(VertexKey base) const {
  LazyGraph copy = *this;
  copy.base_ = std::move(base);
  return copy;
}

namespace {

[[noreturn]] void over_cap(std::size_t cap) {
  throw Error(ErrorCode::resource_limit,
              "enumeration exceeded the member cap of " + std::to_string(cap) + " vertices");
}

}  // namespace

BallGrower::BallGrower(const LazyGraph& graph, std::span<const VertexKey> centers, std::size_t cap)
    : graph_(&graph), cap_(cap), centers_(centers.begin(), centers.end()) {
  std::vector<VertexKey> layer0;
  for (const auto& c : centers_) {
    if (dist_.emplace(c, 0).second) layer0.push_back(c);
  }
  if (dist_.size() > cap_) over_cap(cap_);
  std::sort(layer0.begin(), layer0.end());
  layers_.push_back(std::move(layer0));
  exhausted_ = layers_.front().empty();
}

void BallGrower::grow_to(std::int64_t radius) {
  while (!exhausted_ && this->radius() < radius) {
    const std::int64_t next_dist = this->radius() + 1;
    std::vector<VertexKey> next;
    for (const auto& v : layers_.back()) {
      for (auto& w : graph_->neighbors(v)) {
        if (dist_.contains(w)) continue;
        dist_.emplace(w, next_dist);
        next.push_back(std::move(w));
        if (dist_.size() > cap_) over_cap(cap_);
      }
    }
    std::sort(next.begin(), next.end());
    exhausted_ = next.empty();
    if (!exhausted_) layers_.push_back(std::move(next));
  }
}

const std::vector<VertexKey>& BallGrower::layer(std::int64_t k) {
  grow_to(k);
  static const std::vector<VertexKey> empty;
  if (k < 0 || k > radius()) return empty;
  return layers_[static_cast<std::size_t>(k)];
}

std::optional<std::int64_t> BallGrower::distance_of(const VertexKey& v) const {
  auto it = dist_.find(v);
  if (it == dist_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::int64_t> BallGrower::find(const VertexKey& v, std::int64_t limit) {
  while (true) {
    if (auto d = distance_of(v)) return *d <= limit ? d : std::nullopt;
    if (exhausted_ || radius() >= limit) return std::nullopt;
    grow_to(radius() + 1);
  }
}

BallView BallGrower::view() const {
  BallView out;
  out.centers = centers_;
  out.radius = radius();
  out.layers = layers_;
  for (const auto& [k, d] : dist_) out.members.insert(k);
  return out;
}

std::optional<std::int64_t> distance(const LazyGraph& g, const VertexKey& u, const VertexKey& v,
                                     std::int64_t cap) {
  if (u == v) return 0;
  if (cap <= 0) return std::nullopt;
  // bidirectional BFS, expanding the smaller frontier
  std::unordered_map<VertexKey, std::int64_t, VertexKeyHash> du{{u, 0}}, dv{{v, 0}};
  std::vector<VertexKey> fu{u}, fv{v};
  std::int64_t ru = 0, rv = 0;
  const std::size_t cap_members = member_cap();
  while (ru + rv < cap && !fu.empty() && !fv.empty()) {
    const bool expand_u = fu.size() <= fv.size();
    auto& frontier = expand_u ? fu : fv;
    auto& mine = expand_u ? du : dv;
    auto& other = expand_u ? dv : du;
    std::int64_t& r = expand_u ? ru : rv;
    std::vector<VertexKey> next;
    std::optional<std::int64_t> best;
    for (const auto& x : frontier) {
      for (auto& y : g.neighbors(x)) {
        if (mine.contains(y)) continue;
        if (auto it = other.find(y); it != other.end()) {
          std::int64_t total = r + 1 + it->second;
          if (!best || total < *best) best = total;
        }
        mine.emplace(y, r + 1);
        next.push_back(std::move(y));
      }
    }
    ++r;
    if (best) return *best <= cap ? best : std::nullopt;
    if (du.size() + dv.size() > cap_members) over_cap(cap_members);
    frontier = std::move(next);
  }
  return std::nullopt;
}

BallView ball(const LazyGraph& g, std::span<const VertexKey> centers, std::int64_t radius,
              std::size_t cap) {
  BallGrower grower(g, centers, cap);
  grower.grow_to(radius);
  BallView view = grower.view();
  view.radius = radius;
  return view;
}

BallView ball(const LazyGraph& g, const VertexKey& center, std::int64_t radius, std::size_t cap) {
  return ball(g, std::span<const VertexKey>(&center, 1), radius, cap);
}

LazyGraph power_graph(const LazyGraph& g, std::int64_t k) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "power graph needs k >= 1");
  if (!g.degree_bound()) {
    throw Error(ErrorCode::invalid_argument,
                "power graph of '" + g.name() + "' requires a declared degree bound");
  }
  const std::int64_t delta = *g.degree_bound();
  std::int64_t bound = 0, term = delta;
  for (std::int64_t i = 1; i <= k; ++i) {
    bound += term;
    term *= std::max<std::int64_t>(delta - 1, 0);
  }
  auto inner = g;
  auto fn = [inner, k](const VertexKey& v) {
    BallGrower grower(inner, std::span<const VertexKey>(&v, 1));
    grower.grow_to(k);
    std::vector<VertexKey> out;
    for (std::int64_t d = 1; d <= grower.radius(); ++d) {
      const auto& layer = grower.layer(d);
      out.insert(out.end(), layer.begin(), layer.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::string name = "power:k=" + std::to_string(k) + "(" + g.name() + ")";
  return LazyGraph(std::move(name), g.base(), bound, std::move(fn));
}

LazyGraph restrict_graph(const LazyGraph& g, std::function<bool(const VertexKey&)> membership,
                         std::string name) {
  if (!membership(g.base())) {
    throw Error(ErrorCode::invalid_argument,
                "base vertex " + to_string(g.base()) + " lies outside the subgraph");
  }
  auto inner = g;
  auto fn = [inner, membership](const VertexKey& v) {
    auto all = inner.neighbors(v);
    std::erase_if(all, [&](const VertexKey& w) { return !membership(w); });
    return all;
  };
  return LazyGraph(std::move(name), g.base(), g.degree_bound(), std::move(fn));
}

GraphAudit audit_graph(const LazyGraph& g, std::int64_t radius) {
  GraphAudit audit;
  BallGrower grower(g, std::span<const VertexKey>(&g.base(), 1));
  grower.grow_to(radius);
  for (std::int64_t d = 0; d <= grower.radius(); ++d) {
    for (const auto& v : grower.layer(d)) {
      ++audit.vertices_checked;
      auto nbrs = g.neighbors(v);
      audit.max_degree = std::max<std::int64_t>(audit.max_degree, static_cast<std::int64_t>(nbrs.size()));
      const std::string name = to_string(v);
      if (!std::is_sorted(nbrs.begin(), nbrs.end())) audit.problems.push_back(name + ": neighbors not in key order");
      if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end()) audit.problems.push_back(name + ": duplicate neighbor");
      if (std::find(nbrs.begin(), nbrs.end(), v) != nbrs.end()) audit.problems.push_back(name + ": self-loop");
      if (g.degree_bound() && static_cast<std::int64_t>(nbrs.size()) > *g.degree_bound()) {
        audit.problems.push_back(name + ": degree above declared bound");
      }
      for (const auto& w : nbrs) {
        auto back = g.neighbors(w);
        if (!std::binary_search(back.begin(), back.end(), v)) {
          audit.problems.push_back(name + " -> " + to_string(w) + ": edge not symmetric");
        }
      }
    }
  }
  return audit;
}

}  // namespace firegraph
