#include <doctest.h>

#include "firegraph/certify.hpp"
#include "firegraph/error.hpp"
#include "firegraph/families.hpp"

using namespace firegraph;

TEST_CASE("expansion certificates on hyper37") {
  auto c0 = certify_expansion_impossible("hyper37", Rational(2), BudgetSeq::constant(1), {.level_from = 1, .level_to = 5});
  CHECK(c0.issued);
  CHECK(c0.tail_bound == Rational(1));
  CHECK(c0.radius == 1);
  CHECK(c0.s_r == 7);
  CHECK(c0.levels.size() == 5);
  for (const auto& rep : c0.levels) CHECK(rep.holds);
  CHECK(c0.graph_audit.ok());
  CHECK_FALSE(c0.structural_premises.empty());
  CHECK(c0.to_json()["complete"] == true);

  auto c1 = certify_expansion_impossible("hyper37", Rational(2), BudgetSeq::polynomial(1, 1));
  CHECK(c1.issued);
  CHECK(c1.tail_bound == Rational(2));
  CHECK(c1.radius == 1);
}

TEST_CASE("expansion certificates on trees") {
  for (const char* budget : {"1", "poly:1,1", "poly:5,2", "poly:2,4"}) {
    CAPTURE(budget);
    auto c = certify_expansion_impossible("tree:delta=3", Rational(2), BudgetSeq::parse(budget));
    CHECK(c.issued);
    REQUIRE(c.tail_bound.has_value());
    REQUIRE(c.radius.has_value());
    CHECK(Rational(c.s_r) > *c.tail_bound);
    CHECK(3 * (std::int64_t{1} << (*c.radius - 1)) == c.s_r);
    if (*c.radius > 1) CHECK(Rational(3 * (std::int64_t{1} << (*c.radius - 2))) <= *c.tail_bound);
  }
  auto c = certify_expansion_impossible("tree:delta=3", Rational(2), BudgetSeq::polynomial(5, 2));
  CHECK(c.tail_bound == Rational(30));
  CHECK(c.radius == 5);
}

TEST_CASE("expansion certificates refuse when they should") {
  auto z = certify_expansion_impossible("lattice:d=1", Rational(2), BudgetSeq::constant(1));
  CHECK_FALSE(z.issued);
  CHECK_FALSE(z.refusal.empty());
  CHECK(z.to_json()["verdict"] == "refused");
  auto big = certify_expansion_impossible("tree:delta=3", Rational(2), BudgetSeq::exponential(1, 3));
  CHECK_FALSE(big.issued);
  auto over = certify_expansion_impossible("tree:delta=3", Rational(3), BudgetSeq::constant(1));
  CHECK_FALSE(over.issued);
  CHECK_THROWS_AS(certify_expansion_impossible("hyper37", Rational(1), BudgetSeq::constant(1)), Error);
}

TEST_CASE("certificate fires survive greedy protection") {
  struct Case {
    const char* family;
    Rational lambda;
    const char* budget;
  };
  for (const auto& cs : {Case{"hyper37", Rational(2), "1"}, Case{"hyper37", Rational(2), "poly:1,1"},
                         Case{"tree:delta=3", Rational(2), "2"}, Case{"tree:delta=4", Rational(3), "poly:1,1"}}) {
    CAPTURE(cs.family);
    CAPTURE(cs.budget);
    auto f = BudgetSeq::parse(cs.budget);
    auto c = certify_expansion_impossible(cs.family, cs.lambda, f);
    REQUIRE(c.issued);
    auto g = make_graph(cs.family);
    auto x0 = sorted(ball(g, g.base(), *c.radius).members);
    auto rep = greedy_baseline(g, x0, f, 20);
    CHECK(rep.still_spreading);
    auto book = c.to_json()["audit"]["bookkeeping"];
    CHECK(book["expansion_inequality_holds"] == true);
    if (book.contains("rearranged_sums")) CHECK(book["rearranged_sums"]["holds"] == true);
  }
}

TEST_CASE("greedy baseline stops spreading on small instances") {
  auto z = make_graph("lattice:d=1");
  auto rep = greedy_baseline(z, parse_key_list("(0)"), BudgetSeq::constant(2), 20);
  CHECK_FALSE(rep.still_spreading);
  CHECK(rep.burned == 1);
}

TEST_CASE("divergence verdicts") {
  auto d3 = certify_divergence_required("orthant:d=3", BudgetSeq::constant(1), 8);
  CHECK(d3.conclusion == Conclusion::impossible);
  CHECK(d3.homogeneous_on_range);
  CHECK(d3.structural_homogeneity.has_value());
  auto d5 = certify_divergence_required("orthant:d=5", BudgetSeq::polynomial(1, 2), 8);
  CHECK(d5.conclusion == Conclusion::impossible);
  auto lin = certify_divergence_required("orthant:d=3", BudgetSeq::polynomial(1, 1), 8);
  CHECK(lin.conclusion == Conclusion::no_obstruction);
  auto grid = certify_divergence_required("lattice:d=3", BudgetSeq::constant(1), 6);
  CHECK(grid.conclusion != Conclusion::impossible);
  auto weird = certify_divergence_required("tree:delta=3", BudgetSeq::exponential(1, 2), 6);
  CHECK(weird.conclusion != Conclusion::impossible);
  try {
    certify_divergence_required("orthant:d=3", BudgetSeq::list({3, 1}), 6);
    FAIL("decreasing budget accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_monotone_budget);
  }
}

TEST_CASE("never impossible when the series verdict is unknown") {
  for (const char* fam : {"orthant:d=2", "orthant:d=3", "tree:delta=3", "hyper37", "square"}) {
    for (const char* budget : {"1", "poly:1,1", "exp:1,2", "list:1,5,9"}) {
      CAPTURE(fam);
      CAPTURE(budget);
      auto v = certify_divergence_required(fam, BudgetSeq::parse(budget), 6);
      if (v.series.verdict == SeriesVerdict::unknown) CHECK(v.conclusion != Conclusion::impossible);
      if (!v.structural_homogeneity) CHECK(v.conclusion != Conclusion::impossible);
    }
  }
}

TEST_CASE("lattice classification") {
  struct Row {
    std::int64_t d, q;
    LatticeClass cls;
  };
  for (const auto& row : {Row{2, 0, LatticeClass::containable}, Row{3, 0, LatticeClass::impossible},
                          Row{5, 2, LatticeClass::impossible}, Row{4, 2, LatticeClass::containable},
                          Row{1, 0, LatticeClass::containable}, Row{6, 0, LatticeClass::impossible},
                          Row{7, 5, LatticeClass::containable}, Row{9, 6, LatticeClass::impossible}}) {
    CAPTURE(row.d);
    CAPTURE(row.q);
    CHECK(classify_lattice(row.d, row.q).cls == row.cls);
  }
  auto c = classify_lattice(2, 0, true);
  CHECK(c.witness["outcome"] == "contained");
  auto i = classify_lattice(3, 0, true);
  REQUIRE(i.certificate.has_value());
  CHECK(i.certificate->conclusion == Conclusion::impossible);
}

TEST_CASE("certificates re-check, tampering is caught") {
  auto doc = certify_expansion_impossible("hyper37", Rational(2), BudgetSeq::constant(1)).to_json();
  CHECK(check_certificate(doc) == doc);
  auto bad = doc;
  bad["chosen_radius"] = 2;
  try {
    check_certificate(bad);
    FAIL("tampered certificate accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::check_failed);
  }
  auto div = certify_divergence_required("orthant:d=3", BudgetSeq::constant(1), 6).to_json();
  CHECK(check_certificate(div) == div);
  auto lat = classify_lattice(3, 0, true).to_json();
  CHECK(check_certificate(lat) == lat);
  CHECK_THROWS_AS(check_certificate(Json{{"type", "nonsense"}}), Error);
}
