#include "firegraph/flow.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace firegraph {

MaxFlow::MaxFlow(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

int MaxFlow::add_node() {
  adj_.emplace_back();
  return size() - 1;
}

void MaxFlow::add_edge(int from, int to, std::int64_t capacity) {
  auto& a = adj_[static_cast<std::size_t>(from)];
  auto& b = adj_[static_cast<std::size_t>(to)];
  a.push_back({to, static_cast<int>(b.size()), capacity});
  b.push_back({from, static_cast<int>(a.size()) - 1, 0});
}

bool MaxFlow::bfs(int source, int sink) {
  level_.assign(adj_.size(), -1);
  std::deque<int> queue{source};
  level_[static_cast<std::size_t>(source)] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (const auto& e : adj_[static_cast<std::size_t>(v)]) {
      if (e.cap > 0 && level_[static_cast<std::size_t>(e.to)] < 0) {
        level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(v)] + 1;
        queue.push_back(e.to);
      }
    }
  }
  return level_[static_cast<std::size_t>(sink)] >= 0;
}

std::int64_t MaxFlow::dfs(int v, int sink, std::int64_t pushed) {
  if (v == sink) return pushed;
  const auto vi = static_cast<std::size_t>(v);
  for (auto& i = it_[vi]; i < adj_[vi].size(); ++i) {
    Edge& e = adj_[vi][i];
    if (e.cap <= 0 || level_[static_cast<std::size_t>(e.to)] != level_[vi] + 1) continue;
    const std::int64_t got = dfs(e.to, sink, std::min(pushed, e.cap));
    if (got > 0) {
      e.cap -= got;
      adj_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap += got;
      return got;
    }
  }
  return 0;
}

std::int64_t MaxFlow::run(int source, int sink) {
  std::int64_t total = 0;
  while (bfs(source, sink)) {
    it_.assign(adj_.size(), 0);
    while (std::int64_t pushed = dfs(source, sink, std::numeric_limits<std::int64_t>::max())) {
      total += pushed;
    }
  }
  return total;
}

std::vector<bool> MaxFlow::reachable_from(int source) const {
  std::vector<bool> seen(adj_.size(), false);
  std::vector<int> stack{source};
  seen[static_cast<std::size_t>(source)] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& e : adj_[static_cast<std::size_t>(v)]) {
      if (e.cap > 0 && !seen[static_cast<std::size_t>(e.to)]) {
        seen[static_cast<std::size_t>(e.to)] = true;
        stack.push_back(e.to);
      }
    }
  }
  return seen;
}

std::vector<bool> MaxFlow::reaches_sink(int sink) const {
  // walk residual edges backwards: u -> v usable iff the forward edge u->v has capacity left
  std::vector<bool> seen(adj_.size(), false);
  std::vector<int> stack{sink};
  seen[static_cast<std::size_t>(sink)] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& e : adj_[static_cast<std::size_t>(v)]) {
      // e is v -> e.to; its reverse e.to -> v carries residual capacity rev.cap
      const auto& back = adj_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)];
      if (back.cap > 0 && !seen[static_cast<std::size_t>(e.to)]) {
        seen[static_cast<std::size_t>(e.to)] = true;
        stack.push_back(e.to);
      }
    }
  }
  return seen;
}

}  // namespace firegraph
