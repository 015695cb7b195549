#include <doctest.h>

#include <random>

#include "firegraph/error.hpp"
#include "firegraph/families.hpp"
#include "firegraph/flow.hpp"
#include "firegraph/growth.hpp"
#include "oracles.hpp"

using namespace firegraph;

TEST_CASE("profiles") {
  auto sq = profile(make_graph("square"), 3);
  CHECK(sq.beta == std::vector<std::int64_t>{1, 5, 13, 25});
  CHECK(sq.sphere == std::vector<std::int64_t>{1, 4, 8, 12});
  CHECK(sq.beta1 == std::vector<std::int64_t>{1, 4, 8, 12});
  CHECK(sq.beta2 == std::vector<std::int64_t>{0, 3, 4, 4});
  CHECK(profile(make_graph("orthant:d=3"), 3).sphere == std::vector<std::int64_t>{1, 3, 6, 10});
  CHECK(profile(make_graph("subexp"), 2).beta[2] == 4);
  for (std::int64_t d = 2; d <= 5; ++d) {
    auto p = profile(make_graph("orthant:d=" + std::to_string(d)), 10);
    for (std::int64_t n = 0; n <= 10; ++n) {
      CHECK(p.beta[static_cast<std::size_t>(n)] == oracle::binomial(n + d, d));
    }
  }
}

TEST_CASE("faulhaber sums") {
  CHECK(faulhaber(4, 3) == 30);
  CHECK(faulhaber(3, 2) == 6);
  for (std::int64_t n = 0; n < 30; ++n) CHECK(faulhaber(n, 1) == n);
  for (std::int64_t d = 1; d <= 5; ++d) {
    for (std::int64_t n = 0; n <= 20; ++n) CHECK(Rational(faulhaber(n, d)) == oracle::faulhaber_closed(n, d - 1));
  }
  CHECK_THROWS_AS(faulhaber(1'000'000, 10), Error);
}

TEST_CASE("max-flow basics") {
  MaxFlow f(4);
  f.add_edge(0, 1, 3);
  f.add_edge(0, 2, 2);
  f.add_edge(1, 2, 5);
  f.add_edge(1, 3, 2);
  f.add_edge(2, 3, 3);
  CHECK(f.run(0, 3) == 5);
  auto side = f.reachable_from(0);
  CHECK(side[0]);
  CHECK_FALSE(side[3]);
}

TEST_CASE("expansion examples") {
  auto tree = make_graph("tree:delta=4");
  for (std::int64_t n = 0; n <= 4; ++n) {
    auto rep = check_expansion(tree, n, Rational(3));
    CHECK(rep.holds);
    if (n > 0) CHECK_FALSE(rep.witness.empty());
    if (n > 0) CHECK(rep.witness_forward == 3 * static_cast<std::int64_t>(rep.witness.size()));
  }
  auto h = make_graph("hyper37");
  for (std::int64_t n = 1; n <= 5; ++n) CHECK(check_expansion(h, n, Rational(2)).holds);
  auto z = check_expansion(make_graph("lattice:d=1"), 3, Rational(2));
  CHECK_FALSE(z.holds);
  CHECK_FALSE(z.witness.empty());
  CHECK(z.witness_forward * 1 < 2 * static_cast<std::int64_t>(z.witness.size()));
}

TEST_CASE("flow verdicts match subset enumeration") {
  const char* families[] = {"lattice:d=1", "square", "tri", "hex", "strong", "orthant:d=3",
                            "tree:delta=3", "tree:delta=4", "hyper37", "subexp"};
  const Rational lambdas[] = {Rational(1), Rational(3, 2), Rational(2), Rational(5, 2), Rational(3), Rational(4, 3)};
  std::size_t compared = 0;
  for (const char* f : families) {
    auto g = make_graph(f);
    auto p = profile(g, 8);
    for (std::int64_t n = 0; n < 8; ++n) {
      if (p.sphere[static_cast<std::size_t>(n)] > 14) break;
      for (const auto& lam : lambdas) {
        CAPTURE(f);
        CAPTURE(n);
        CAPTURE(to_string(lam));
        auto rep = check_expansion(g, n, lam);
        const auto num = static_cast<std::int64_t>(numerator(lam));
        const auto den = static_cast<std::int64_t>(denominator(lam));
        CHECK(rep.holds == oracle::expansion_by_subsets(g, n, num, den));
        ++compared;
      }
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("homogeneous growth checks") {
  for (const auto& rep : check_homogeneous(make_graph("orthant:d=2"), 0, 8)) CHECK(rep.holds);
  for (const auto& rep : check_homogeneous(make_graph("orthant:d=3"), 0, 6)) CHECK(rep.holds);
  for (const auto& rep : check_homogeneous(make_graph("tree:delta=3"), 0, 6)) {
    CHECK(rep.holds);
    if (rep.level > 0) CHECK(rep.lambda == Rational(2));
  }
  auto lam = check_homogeneous(make_graph("orthant:d=2"), 0, 3);
  CHECK(lam[2].lambda == Rational(4, 3));
  CHECK_NOTHROW(check_homogeneous(make_graph("square"), 0, 4));
}

TEST_CASE("series tails") {
  CHECK(geometric_tail(1, 0, Rational(2)) == 1);
  CHECK(geometric_tail(1, 1, Rational(2)) == 2);
  CHECK(geometric_tail(1, 2, Rational(2)) == 6);
  CHECK(geometric_tail(5, 2, Rational(2)) == 30);
  // sum k^3 / 3^k = 33/8
  CHECK(geometric_tail(1, 3, Rational(3)) == Rational(33, 8));
  CHECK(budget_tail(BudgetSeq::constant(1), Rational(2)) == Rational(1));
  CHECK(budget_tail(BudgetSeq::list({4, 1}), Rational(2)) == Rational(5, 2));
  CHECK_FALSE(budget_tail(BudgetSeq::exponential(1, 3), Rational(2)).has_value());

  auto s3 = profile(make_graph("orthant:d=3"), 12).sphere;
  auto conv = ratio_series(BudgetSeq::constant(1), s3);
  CHECK(conv.verdict == SeriesVerdict::converges);
  CHECK(conv.shape.kind == SphereShape::Kind::polynomial);
  CHECK(conv.shape.degree == 2);
  CHECK(conv.prefix[0] == Rational(1, 3));
  CHECK(ratio_series(BudgetSeq::polynomial(1, 1), s3).verdict == SeriesVerdict::diverges);
  auto odd = ratio_series(BudgetSeq::constant(1), {1, 2, 7, 3, 11, 4, 2, 9, 5, 1});
  CHECK(odd.verdict == SeriesVerdict::unknown);
}

TEST_CASE("rearranged sums") {
  auto same = rearrange_check({2, 3, 5}, {2, 3, 5}, {1, 2, 4});
  CHECK(same.holds);
  CHECK(same.lhs == same.rhs);
  auto ex = rearrange_check({2, 0}, {1, 1}, {1, 2});
  CHECK(ex.holds);
  CHECK(ex.lhs == Rational(3, 2));
  CHECK(ex.rhs == Rational(2));
  try {
    rearrange_check({1, 1}, {2, 0}, {1, 2});
    FAIL("dominance accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::hypothesis_violation);
    CHECK(e.detail() == std::vector<std::string>{"1"});
  }
  CHECK_THROWS_AS(rearrange_check({1, 1}, {1, 1}, {2, 1}), Error);
  CHECK_THROWS_AS(rearrange_check({1, 1}, {1, 1}, {0, 1}), Error);
}

TEST_CASE("rearranged sums on random prefix-dominant triples") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t len = 1 + rng() % 12;
    std::vector<std::int64_t> f(len), p(len), s(len);
    std::int64_t fs = 0, ps = 0, last = 1 + static_cast<std::int64_t>(rng() % 3);
    for (std::size_t i = 0; i < len; ++i) {
      f[i] = static_cast<std::int64_t>(rng() % 6);
      fs += f[i];
      p[i] = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(fs - ps + 1));
      ps += p[i];
      last += static_cast<std::int64_t>(rng() % 4);
      s[i] = last;
    }
    CHECK(rearrange_check(f, p, s).holds);
  }
}

TEST_CASE("degree estimates") {
  auto sq = degree_estimate(profile(make_graph("square"), 12));
  REQUIRE(sq.degree.has_value());
  CHECK(*sq.degree == 2);
  auto l3 = degree_estimate(profile(make_graph("lattice:d=3"), 10));
  REQUIRE(l3.degree.has_value());
  CHECK(*l3.degree == 3);
  auto tree = degree_estimate(profile(make_graph("tree:delta=3"), 12));
  CHECK((tree.super_polynomial || tree.inconclusive));
  CHECK_FALSE(tree.degree.has_value());
  CHECK_FALSE(sq.note.empty());
}
