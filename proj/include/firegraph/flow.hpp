#pragma once

#include <cstdint>
#include <vector>

namespace firegraph {

/// Dinic max-flow on integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  int add_node();
  void add_edge(int from, int to, std::int64_t capacity);
  std::int64_t run(int source, int sink);

  /// After run(): nodes from which the sink is reachable in the residual
  /// graph. Their complement is the source side of the maximal minimum cut.
  std::vector<bool> reaches_sink(int sink) const;
  /// After run(): nodes reachable from the source in the residual graph
  /// (source side of the minimal minimum cut).
  std::vector<bool> reachable_from(int source) const;

  int size() const noexcept { return static_cast<int>(adj_.size()); }

 private:
  struct Edge {
    int to;
    int rev;
    std::int64_t cap;
  };

  bool bfs(int source, int sink);
  std::int64_t dfs(int v, int sink, std::int64_t pushed);

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

}  // namespace firegraph
