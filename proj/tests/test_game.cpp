#include <doctest.h>

#include <random>

#include "firegraph/error.hpp"
#include "firegraph/families.hpp"
#include "firegraph/game.hpp"
#include "firegraph/synth.hpp"
#include "oracles.hpp"

using namespace firegraph;

namespace {

VertexKey k(const char* t) { return parse_key(t); }
std::vector<VertexKey> ks(const char* t) { return parse_key_list(t); }

std::set<VertexKey> as_set(const VertexSet& s) { return {s.begin(), s.end()}; }

Strategy schedule(std::int64_t r, BudgetSeq f, std::vector<std::vector<VertexKey>> w) {
  Strategy s;
  s.spread_radius = r;
  s.budget = std::move(f);
  s.schedule = std::move(w);
  return s;
}

}  // namespace

TEST_CASE("single steps") {
  auto z = make_graph("lattice:d=1");
  FireState s0;
  s0.burning.insert(k("(0)"));
  auto s1 = step(z, s0, {}, 1);
  CHECK(as_set(s1.burning) == std::set<VertexKey>{k("(-1)"), k("(0)"), k("(1)")});
  CHECK(s1.turn == 1);

  auto w1 = ks("(1)"), w2 = ks("(-2)");
  auto a = step(z, s0, w1, 1);
  auto b = step(z, a, w2, 1);
  CHECK(as_set(b.burning) == std::set<VertexKey>{k("(-1)"), k("(0)")});
  CHECK(as_set(step(z, b, {}, 1).burning) == as_set(b.burning));

  auto sq = make_graph("square");
  FireState q0;
  q0.burning.insert(k("(0,0)"));
  auto cut = sq.neighbors(k("(0,0)"));
  CHECK(as_set(step(sq, q0, cut, 1).burning) == as_set(q0.burning));
}

TEST_CASE("protection rules") {
  auto z = make_graph("lattice:d=1");
  FireSimulation sim(z, ks("(0)"), 1);
  CHECK_THROWS_AS(sim.advance(ks("(0)")), Error);
  sim.advance(ks("(3)"));
  try {
    sim.advance(ks("(3);(5)"));
    FAIL("overlap accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::protection_overlap);
    CHECK(e.detail() == std::vector<std::string>{"(3)"});
  }
  CHECK_THROWS_AS(sim.advance(ks("(5);(5)")), Error);
  CHECK(sim.state().turn == 1);

  auto s = schedule(1, BudgetSeq::constant(1), {ks("(3);(4)")});
  try {
    s.check_budget();
    FAIL("budget accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::budget_exceeded);
    CHECK(e.detail() == std::vector<std::string>{"1"});
  }
}

TEST_CASE("spread agrees with explicit path enumeration") {
  std::mt19937 rng(2024);
  for (const char* f : {"square", "tri", "hex", "tree:delta=3", "hyper37"}) {
    auto g = make_graph(f);
    auto region = sorted(ball(g, g.base(), 2).members);
    std::uniform_int_distribution<std::size_t> pick(0, region.size() - 1);
    for (std::int64_t r = 1; r <= 3; ++r) {
      for (int trial = 0; trial < 4; ++trial) {
        CAPTURE(f);
        CAPTURE(r);
        FireState st;
        st.burning.insert(g.base());
        if (trial % 2) st.burning.insert(region[pick(rng)]);
        std::vector<VertexKey> w;
        for (int i = 0; i < 3; ++i) {
          auto v = region[pick(rng)];
          if (!st.burning.contains(v) && std::find(w.begin(), w.end(), v) == w.end()) w.push_back(v);
        }
        auto next = step(g, st, w, r);
        std::set<VertexKey> blocked(w.begin(), w.end());
        CHECK(as_set(next.burning) == oracle::spread_by_paths(g, as_set(st.burning), blocked, r));
      }
    }
  }
}

TEST_CASE("incremental simulation agrees with step") {
  auto g = make_graph("tri");
  std::vector<std::vector<VertexKey>> moves{ks("(3,0);(0,3)"), ks("(-3,-3);(3,3)"), {}, ks("(9,0)")};
  FireSimulation sim(g, ks("(0,0)"), 2);
  FireState st;
  st.burning.insert(k("(0,0)"));
  for (const auto& w : moves) {
    const auto before = as_set(sim.state().burning);
    sim.advance(w);
    st = step(g, st, w, 2);
    CHECK(as_set(sim.state().burning) == as_set(st.burning));
    for (const auto& v : before) CHECK(sim.state().burning.contains(v));
  }
}

TEST_CASE("runs: escape, containment, determinism and serialization") {
  auto sq = make_graph("square");
  RunOptions opts;
  opts.radius_cap = 6;
  auto escape = run(sq, ks("(0,0)"), schedule(1, BudgetSeq::constant(0), {}), opts);
  CHECK(escape.outcome == Outcome::cap_exceeded);
  CHECK_FALSE(escape.contained());
  for (std::size_t n = 0; n < escape.turns.size(); ++n) {
    CHECK(escape.turns[n].burning_count == 2 * (n + 1) * (n + 1) + 2 * (n + 1) + 1);
  }

  auto z = make_graph("lattice:d=1");
  auto won = run(z, ks("(0)"), schedule(1, BudgetSeq::constant(1), {ks("(1)"), ks("(-2)")}));
  CHECK(won.contained());
  CHECK(won.burned_total == 2);

  auto text = to_jsonl(won);
  CHECK(replay_jsonl(text) == text);
  CHECK(to_jsonl(parse_trace(text)) == text);
  auto again = run(z, ks("(0)"), schedule(1, BudgetSeq::constant(1), {ks("(1)"), ks("(-2)")}));
  CHECK(to_jsonl(again) == text);

  auto idle = run(z, ks("(0)"), schedule(1, BudgetSeq::constant(1), {ks("(1)")}), RunOptions{.stall_window = 3});
  CHECK(idle.outcome == Outcome::budget_exhausted);
}

TEST_CASE("cut-vertex strategy on the subexp graph") {
  auto g = make_graph("subexp");
  auto x0 = ks("v:0:1");
  for (std::int64_t r = 1; r <= 3; ++r) {
    auto s = synth_cut_vertex(g, x0, r);
    auto t = run(g, x0, s.strategy);
    CHECK(t.contained());
    CHECK(s.strategy.protected_total() == 1);
  }
}

TEST_CASE("subset heredity") {
  auto tri = make_graph("tri");
  auto synth = synth_second_difference(tri, 2);
  REQUIRE(run(tri, synth.x0, synth.strategy).contained());
  std::mt19937 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<VertexKey> sub;
    for (const auto& v : synth.x0)
      if (rng() % 2) sub.push_back(v);
    if (sub.empty()) sub.push_back(synth.x0.front());
    auto t = run(tri, sub, synth.strategy);
    CHECK(t.contained());
  }
}

TEST_CASE("scale_up sums budgets over blocks of turns") {
  auto f = BudgetSeq::polynomial(1, 1);
  auto up = scale_up(schedule(1, f, {}), 2);
  CHECK(up.budget.at(1) == 3);
  CHECK(up.budget.at(2) == 7);
  for (std::int64_t r = 1; r <= 5; ++r) {
    auto c = scale_up(schedule(1, BudgetSeq::constant(3), {}), r);
    for (std::int64_t n = 1; n <= 50; ++n) CHECK(c.budget.at(n) == 3 * r);
  }
  CHECK_THROWS_AS(scale_up(schedule(1, BudgetSeq::list({3, 1}), {}), 2), Error);
  CHECK_THROWS_AS(scale_up(schedule(2, BudgetSeq::constant(1), {}), 2), Error);
}

TEST_CASE("scaling on Z") {
  auto z = make_graph("lattice:d=1");
  auto base = schedule(1, BudgetSeq::constant(1), {ks("(1)"), ks("(-2)")});
  auto up = scale_up(base, 2);
  REQUIRE(up.schedule.size() == 1);
  CHECK(up.schedule[0] == ks("(-2);(1)"));
  CHECK(run(z, ks("(0)"), up).contained());

  auto unit = schedule(1, BudgetSeq::constant(1), {ks("(2)"), ks("(-3)")});
  CHECK(scale_down(z, unit, BudgetSeq::constant(1), ks("(0)")).schedule == unit.schedule);

  // contains B({0}, 2) with spread 2; the radius-1 split contains {0}
  auto wide = schedule(2, BudgetSeq::constant(2), {ks("(-4);(3)")});
  REQUIRE(run(z, ks("(-2);(-1);(0);(1);(2)"), wide).contained());
  auto down = scale_down(z, wide, BudgetSeq::constant(1), ks("(0)"));
  CHECK(down.schedule == std::vector<std::vector<VertexKey>>{ks("(-4)"), ks("(3)")});
  CHECK(run(z, ks("(0)"), down).contained());

  auto bad = schedule(2, BudgetSeq::constant(2), {ks("(1);(5)")});
  CHECK_THROWS_AS(scale_down(z, bad, BudgetSeq::constant(1), ks("(0)")), Error);
  auto crowded = schedule(2, BudgetSeq::constant(3), {ks("(-4);(3);(7)")});
  CHECK_THROWS_AS(scale_down(z, crowded, BudgetSeq::constant(1), ks("(0)")), Error);
}

TEST_CASE("restricting a strategy to a subgraph") {
  auto l3 = make_graph("lattice:d=3");
  auto synth = synth_sphere_poly(l3, 3, 2, 0);
  auto same = restrict_strategy(synth.strategy, [](const VertexKey&) { return true; });
  CHECK(same.schedule == synth.strategy.schedule);

  auto in_slab = [](const VertexKey& v) { return v.payload[2] == 0; };
  auto slab = restrict_graph(l3, in_slab, "slab");
  auto sub = restrict_strategy(synth.strategy, in_slab);
  CHECK(run(slab, synth.x0, sub).contained());

  auto none = restrict_strategy(synth.strategy, [](const VertexKey& v) { return v.payload[0] > 1000; });
  CHECK(none.schedule.empty());
}
