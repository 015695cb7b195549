#include <doctest.h>

#include "firegraph/error.hpp"
#include "firegraph/families.hpp"
#include "firegraph/game.hpp"
#include "firegraph/synth.hpp"

using namespace firegraph;

namespace {

bool avoids(const FireState& st, const std::vector<VertexKey>& sphere) {
  for (const auto& v : sphere)
    if (st.burning.contains(v)) return false;
  return true;
}

void expect_valid_and_contained(const LazyGraph& g, const SynthResult& s) {
  CHECK_NOTHROW(s.strategy.check_budget());
  auto t = run(g, s.x0, s.strategy);
  CHECK(t.contained());
  CHECK(avoids(t.final_state, s.protected_sphere));
}

}  // namespace

TEST_CASE("sphere strategy on the square grid") {
  auto g = make_graph("square");
  auto s = synth_sphere_poly(g, 2, 3, 1);
  for (std::int64_t n = 1; n <= 20; ++n) CHECK(s.strategy.budget.at(n) == 7);
  CHECK(s.x0.size() == 5);
  CHECK(s.sphere_radius > 1);
  CHECK(s.protected_sphere.size() == static_cast<std::size_t>(4 * s.sphere_radius));
  expect_valid_and_contained(g, s);
}

TEST_CASE("sphere strategy on L^3") {
  auto g = make_graph("lattice:d=3");
  auto s = synth_sphere_poly(g, 3, 2, 0);
  for (std::int64_t n = 1; n <= 20; ++n) CHECK(s.strategy.budget.at(n) == 14 * n);
  expect_valid_and_contained(g, s);
}

TEST_CASE("sphere strategy replays for initial balls up to radius 3") {
  for (std::int64_t m = 0; m <= 3; ++m) {
    CAPTURE(m);
    auto sq = make_graph("square");
    expect_valid_and_contained(sq, synth_sphere_poly(sq, 2, 3, m));
    auto l3 = make_graph("lattice:d=3");
    expect_valid_and_contained(l3, synth_sphere_poly(l3, 3, 2, m));
  }
}

TEST_CASE("sphere strategy rejects bad parameters and reports a scan cap") {
  auto g = make_graph("square");
  CHECK_THROWS_AS(synth_sphere_poly(g, 1, 3, 0), Error);
  CHECK_THROWS_AS(synth_sphere_poly(g, 2, 0, 0), Error);
  // tree spheres double while the bound grows linearly
  try {
    synth_sphere_poly(make_graph("tree:delta=3"), 2, 1, 2, {.scan_cap = 10});
    FAIL("scan should fail");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::scan_cap_exceeded);
  }
}

TEST_CASE("second-difference strategies") {
  auto sq = make_graph("square");
  auto s = synth_second_difference(sq, 1);
  for (std::int64_t n = 1; n <= 20; ++n) CHECK(s.strategy.budget.at(n) == 12);
  expect_valid_and_contained(sq, s);

  auto tri = make_graph("tri");
  auto t = synth_second_difference(tri, 1);
  for (std::int64_t n = 1; n <= 20; ++n) CHECK(t.strategy.budget.at(n) == 18);
  expect_valid_and_contained(tri, t);

  for (std::int64_t n = 0; n <= 3; ++n) {
    CAPTURE(n);
    expect_valid_and_contained(sq, synth_second_difference(sq, n));
    expect_valid_and_contained(tri, synth_second_difference(tri, n));
  }
}

TEST_CASE("second-difference hypothesis fails on Z") {
  // beta' = 1, 2, 2, ... so beta''(1) = 1 and beta''(2) = 0: not nondecreasing
  try {
    synth_second_difference(make_graph("lattice:d=1"), 1);
    FAIL("hypothesis accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::hypothesis_violation);
    CHECK_FALSE(e.detail().empty());
  }
}

TEST_CASE("cut-vertex strategy") {
  auto g = make_graph("subexp");
  auto x0 = parse_key_list("v:0:1");
  auto r1 = synth_cut_vertex(g, x0, 1);
  REQUIRE(r1.strategy.schedule.size() == 1);
  CHECK(r1.strategy.schedule[0] == parse_key_list("v:2:1"));
  auto t1 = run(g, x0, r1.strategy);
  CHECK(t1.contained());
  for (const auto& v : t1.final_state.burning) CHECK(v.payload[0] <= 1);

  auto r3 = synth_cut_vertex(g, x0, 3);
  CHECK(r3.strategy.schedule[0] == parse_key_list("v:6:1"));
  CHECK(run(g, x0, r3.strategy).contained());

  auto past = parse_key_list("v:2:1");
  auto s = synth_cut_vertex(g, past, 1);
  CHECK(s.strategy.schedule[0] == parse_key_list("v:6:1"));
  CHECK(run(g, past, s.strategy).contained());

  for (std::int64_t r = 1; r <= 4; ++r) {
    auto wide = sorted(ball(g, g.base(), 3).members);
    CHECK(run(g, wide, synth_cut_vertex(g, wide, r).strategy).contained());
  }
  CHECK_THROWS_AS(synth_cut_vertex(make_graph("square"), parse_key_list("(0,0)"), 1), Error);
}

TEST_CASE("minimax oracle ground truth") {
  auto z = make_graph("lattice:d=1");
  auto x0 = parse_key_list("(0)");
  auto res = minimax_oracle(z, x0, 1, 4);
  REQUIRE(res.verdict == OracleResult::Verdict::containable);
  CHECK(res.burned == 2);
  Strategy s;
  s.budget = BudgetSeq::constant(1);
  s.schedule = res.witness;
  auto t = run(z, x0, s);
  CHECK(t.contained());
  CHECK(t.burned_total == 2);

  auto sq = make_graph("square");
  CHECK(minimax_oracle(sq, parse_key_list("(0,0)"), 1, 4).verdict == OracleResult::Verdict::boundary_reached);
  auto tree = make_graph("tree:delta=3");
  CHECK(minimax_oracle(tree, std::vector<VertexKey>{tree.base()}, 1, 4).verdict ==
        OracleResult::Verdict::boundary_reached);
}

TEST_CASE("oracle witnesses replay on the untruncated graph") {
  auto sq = make_graph("square");
  auto x0 = parse_key_list("(0,0)");
  auto res = minimax_oracle(sq, x0, 4, 3);
  REQUIRE(res.verdict == OracleResult::Verdict::containable);
  Strategy s;
  s.budget = BudgetSeq::constant(4);
  s.schedule = res.witness;
  auto t = run(sq, x0, s);
  CHECK(t.contained());
  CHECK(static_cast<std::int64_t>(t.burned_total) == res.burned);

  auto small = minimax_oracle(sq, x0, 1, 3, {.node_cap = 5});
  CHECK(small.verdict == OracleResult::Verdict::inconclusive);
}
