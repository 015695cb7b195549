#include <doctest.h>

#include <algorithm>

#include "firegraph/error.hpp"
#include "firegraph/families.hpp"
#include "firegraph/growth.hpp"
#include "oracles.hpp"

using namespace firegraph;

namespace {

// Parent counts around a layer cycle, read off by walking same-layer edges.
template <class SameLayer, class ParentCount>
std::vector<int> cycle_signature(std::size_t size, int start, SameLayer same, ParentCount parents) {
  std::vector<int> sig;
  int prev = -1, cur = start;
  for (std::size_t i = 0; i < size; ++i) {
    sig.push_back(parents(cur));
    auto nb = same(cur);
    if (nb.size() != 2) return {};
    const int next = nb[0] != prev ? nb[0] : nb[1];
    prev = cur;
    cur = next;
  }
  return cur == start ? sig : std::vector<int>{};
}

bool equal_up_to_dihedral(const std::vector<int>& a, std::vector<int> b) {
  if (a.size() != b.size()) return false;
  for (int flip = 0; flip < 2; ++flip) {
    for (std::size_t s = 0; s < b.size(); ++s) {
      if (std::equal(a.begin(), a.end(), b.begin())) return true;
      std::rotate(b.begin(), b.begin() + 1, b.end());
    }
    std::reverse(b.begin(), b.end());
  }
  return false;
}

}  // namespace

TEST_CASE("family specs parse, print and validate") {
  for (const char* t : {"lattice:d=3", "orthant:d=4", "square", "tri", "hex", "strong", "tree:delta=3", "hyper37",
                        "subexp", "power:k=2(square)"}) {
    CHECK(FamilySpec::parse(t).to_string() == t);
  }
  CHECK_THROWS_AS(FamilySpec::parse("cube"), Error);
  CHECK_THROWS_AS(make_graph("tree:delta=1"), Error);
  CHECK_THROWS_AS(make_graph("lattice:d=0"), Error);
}

TEST_CASE("neighbor counts of the planar grids") {
  CHECK(make_graph("lattice:d=2").neighbors(parse_key("(0,0)")).size() == 4);
  CHECK(make_graph("tri").neighbors(parse_key("(3,1)")).size() == 6);
  CHECK(make_graph("hex").neighbors(parse_key("(3,1)")).size() == 3);
  CHECK(make_graph("strong").neighbors(parse_key("(3,1)")).size() == 8);
  CHECK(make_graph("orthant:d=3").neighbors(parse_key("(0,0,0)")).size() == 3);
}

TEST_CASE("orthant sphere sizes are binomial coefficients") {
  for (std::int64_t d = 2; d <= 5; ++d) {
    auto p = profile(make_graph("orthant:d=" + std::to_string(d)), 10);
    for (std::int64_t m = 0; m <= 10; ++m) {
      CHECK(p.sphere[static_cast<std::size_t>(m)] == oracle::binomial(m + d - 1, d - 1));
    }
  }
}

TEST_CASE("subexp level sequence") {
  CHECK(level_sequence_subexp(0) == 0);
  CHECK(level_sequence_subexp(9) == 3);
  CHECK(level_sequence_subexp(16) == 4);
  const std::int64_t listed[] = {0, 1, 0, 1, 2, 1, 0, 1, 2, 3, 2, 1, 0};
  for (std::int64_t n = 0; n < 13; ++n) CHECK(level_sequence_subexp(n) == listed[n]);
  for (std::int64_t k = 0; k < 20; ++k) CHECK(level_sequence_subexp(k * (k + 1)) == 0);
}

TEST_CASE("subexp ball sizes at one-vertex levels") {
  auto g = make_graph("subexp");
  CHECK(ball(g, g.base(), 2).size() == 4);
  auto p = profile(g, 30);
  for (std::int64_t n = 1; n <= 5; ++n) {
    const std::int64_t expect = 3 * (std::int64_t{1} << (n + 1)) - 3 * n - 5;
    CHECK(p.beta[static_cast<std::size_t>(n * (n + 1))] == expect);
  }
  for (std::int64_t n = 0; n <= 30; ++n) {
    CHECK(p.sphere[static_cast<std::size_t>(n)] == std::int64_t{1} << level_sequence_subexp(n));
  }
}

TEST_CASE("hyper37 layer descriptors obey the a/b recurrences") {
  auto l1 = hyper37_layer(1);
  CHECK(l1.size == 7);
  CHECK(l1.a_count == 7);
  CHECK(l1.b_count == 0);
  for (std::int64_t n = 1; n < 8; ++n) {
    auto cur = hyper37_layer(n), next = hyper37_layer(n + 1);
    CHECK(cur.size == cur.a_count + cur.b_count);
    CHECK(next.a_count == 2 * cur.a_count + cur.b_count);
    CHECK(next.b_count == cur.size);
    CHECK(cur.next_size == next.size);
  }
  CHECK(hyper37_layer(2).size == 21);
}

TEST_CASE("hyper37 matches the tiling drawn in the Poincare disk") {
  constexpr int R = 5;
  oracle::PoincareTiling37 disk(R + 1);
  auto g = make_graph("hyper37");
  auto b = ball(g, g.base(), R + 1);
  for (int n = 0; n <= R + 1; ++n) CHECK(b.layers[static_cast<std::size_t>(n)].size() == disk.layer_size(n));

  for (int n = 1; n <= R; ++n) {
    CAPTURE(n);
    const auto& layer = b.layers[static_cast<std::size_t>(n)];
    std::map<VertexKey, int> idx;
    for (std::size_t i = 0; i < layer.size(); ++i) idx[layer[i]] = static_cast<int>(i);
    auto lib_same = [&](int i) {
      std::vector<int> out;
      for (const auto& u : g.neighbors(layer[static_cast<std::size_t>(i)]))
        if (idx.contains(u)) out.push_back(idx[u]);
      return out;
    };
    auto lib_parents = [&](int i) {
      int c = 0;
      for (const auto& u : g.neighbors(layer[static_cast<std::size_t>(i)]))
        c += b.layers[static_cast<std::size_t>(n - 1)].end() !=
             std::find(b.layers[static_cast<std::size_t>(n - 1)].begin(), b.layers[static_cast<std::size_t>(n - 1)].end(), u);
      return c;
    };
    auto disk_same = [&](int v) {
      std::vector<int> out;
      for (int u : disk.neighbors(v))
        if (disk.distance(u) == n) out.push_back(u);
      return out;
    };
    auto disk_parents = [&](int v) {
      int c = 0;
      for (int u : disk.neighbors(v)) c += disk.distance(u) == n - 1;
      return c;
    };
    for (const auto& v : layer) CHECK(g.neighbors(v).size() == 7);
    auto lib_sig = cycle_signature(layer.size(), 0, lib_same, lib_parents);
    auto disk_sig = cycle_signature(disk.layer_size(n), disk.layer(n).front(), disk_same, disk_parents);
    REQUIRE_FALSE(lib_sig.empty());
    REQUIRE_FALSE(disk_sig.empty());
    CHECK(equal_up_to_dihedral(lib_sig, disk_sig));
  }
}

TEST_CASE("hyper37 sphere sizes are 7 times every other Fibonacci number") {
  // F_1 = F_2 = 1
  std::vector<std::int64_t> fib{0, 1, 1};
  while (fib.size() < 20) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
  auto p = profile(make_graph("hyper37"), 6);
  for (std::size_t n = 1; n <= 6; ++n) CHECK(p.sphere[n] == 7 * fib[2 * n]);
}
