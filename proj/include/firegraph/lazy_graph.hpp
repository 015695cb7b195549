#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "firegraph/vertex_key.hpp"

namespace firegraph {

/// Default ceiling on the number of vertices any single enumeration may touch.
inline constexpr std::size_t default_member_cap = 5'000'000;

/// The enumeration cap in effect: FIREGRAPH_CAP when set, else the default.
std::size_t member_cap();

/// A locally finite graph known only through its neighbor oracle.
///
/// The neighbor function must be pure and return a duplicate-free list in
/// ascending VertexKey order. Copies share the oracle, so any memoization
/// behind it is shared too and must tolerate concurrent callers.
class LazyGraph {
 public:
  using NeighborFn = std::function<std::vector<VertexKey>(const VertexKey&)>;

  LazyGraph(std::string name, VertexKey base, std::optional<std::int64_t> degree_bound,
            NeighborFn neighbors);

  const std::string& name() const noexcept { return name_; }
  const VertexKey& base() const noexcept { return base_; }
  std::optional<std::int64_t> degree_bound() const noexcept { return degree_bound_; }

  std::vector<VertexKey> neighbors(const VertexKey& v) const { return (*neighbors_)(v); }

  /// Same graph, different root.
  LazyGraph with_base(VertexKey base) const;

 private:
  std::string name_;
  VertexKey base_;
  std::optional<std::int64_t> degree_bound_;
  std::shared_ptr<const NeighborFn> neighbors_;
};

/// Exact layered BFS result around a finite center set.
struct BallView {
  std::vector<VertexKey> centers;
  std::int64_t radius = 0;
  VertexSet members;
  /// layers[k] holds the vertices at distance exactly k, in key order.
  std::vector<std::vector<VertexKey>> layers;

  std::size_t size() const noexcept { return members.size(); }
  bool contains(const VertexKey& v) const { return members.contains(v); }
};

/// Incremental multi-source BFS: grows one layer at a time on demand and
/// answers distance queries for vertices inside the explored region.
class BallGrower {
 public:
  BallGrower(const LazyGraph& graph, std::span<const VertexKey> centers,
             std::size_t cap = member_cap());

  /// Explore up to `radius` (no-op when already there or exhausted).
  void grow_to(std::int64_t radius);
  std::int64_t radius() const noexcept { return static_cast<std::int64_t>(layers_.size()) - 1; }
  /// True once a layer came out empty (finite component fully explored).
  bool exhausted() const noexcept { return exhausted_; }

  const std::vector<VertexKey>& layer(std::int64_t k);
  std::optional<std::int64_t> distance_of(const VertexKey& v) const;
  /// Grows until v is found or `limit` is reached.
  std::optional<std::int64_t> find(const VertexKey& v, std::int64_t limit);
  std::size_t size() const noexcept { return dist_.size(); }

  BallView view() const;

 private:
  const LazyGraph* graph_;
  std::size_t cap_;
  std::vector<VertexKey> centers_;
  std::unordered_map<VertexKey, std::int64_t, VertexKeyHash> dist_;
  std::vector<std::vector<VertexKey>> layers_;
  bool exhausted_ = false;
};

/// Exact distance when it is at most `cap`, std::nullopt otherwise.
std::optional<std::int64_t> distance(const LazyGraph& g, const VertexKey& u, const VertexKey& v,
                                     std::int64_t cap);

/// B_G(centers, radius). Throws Error(resource_limit) past `cap` members.
BallView ball(const LazyGraph& g, std::span<const VertexKey> centers, std::int64_t radius,
              std::size_t cap = member_cap());
BallView ball(const LazyGraph& g, const VertexKey& center, std::int64_t radius,
              std::size_t cap = member_cap());

/// G(k): same vertices, edges between distinct vertices at distance <= k.
LazyGraph power_graph(const LazyGraph& g, std::int64_t k);

/// Induced subgraph on the vertices satisfying `membership`.
LazyGraph restrict_graph(const LazyGraph& g, std::function<bool(const VertexKey&)> membership,
                         std::string name);

/// Outcome of auditing a graph's neighbor oracle over a finite ball.
struct GraphAudit {
  std::size_t vertices_checked = 0;
  std::int64_t max_degree = 0;
  std::vector<std::string> problems;

  bool ok() const noexcept { return problems.empty(); }
};

/// Checks symmetry, absence of loops and duplicates, canonical ordering and
/// the declared degree bound for every vertex within `radius` of the base.
GraphAudit audit_graph(const LazyGraph& g, std::int64_t radius);

}  // namespace firegraph
