#include "firegraph/certify.hpp"

#include <algorithm>

#include "firegraph/error.hpp"
#include "firegraph/families.hpp"
#include "firegraph/synth.hpp"

namespace firegraph {

namespace {

constexpr std::size_t smoke_cap = 50'000;

Json report_json(const ExpansionReport& r) {
  return Json{{"level", r.level},
              {"lambda", to_string(r.lambda)},
              {"holds", r.holds},
              {"sphere_size", r.sphere_size},
              {"next_size", r.next_size},
              {"flow", r.flow},
              {"required_flow", r.required_flow},
              {"witness", keys_json(r.witness)},
              {"witness_forward", r.witness_forward}};
}

Json reports_json(const std::vector<ExpansionReport>& reports) {
  Json out = Json::array();
  for (const auto& r : reports) out.push_back(report_json(r));
  return out;
}

// Expansion on every level follows from the layer structure of these families.
std::optional<std::string> expansion_premise(const FamilySpec& spec, const Rational& lambda) {
  if (spec.kind == FamilyKind::tree) {
    const std::int64_t delta = spec.param("delta");
    if (lambda <= delta - 1) {
      return "tree:delta=" + std::to_string(delta) + ": each vertex of S_n has exactly " +
             std::to_string(delta - 1) + " private neighbors in S_{n+1} for n >= 1 (" +
             std::to_string(delta) + " at the root), so |A*| >= " + std::to_string(delta - 1) +
             "|A| on every level";
    }
  }
  if (spec.kind == FamilyKind::hyper37 && lambda <= 2) {
    return "hyper37: every layer vertex has at least one private child and each consecutive "
           "pair on the layer cycle shares one more, so |A*| >= 2|A| on every level";
  }
  return std::nullopt;
}

std::optional<std::string> homogeneity_premise(const FamilySpec& spec) {
  if (spec.kind == FamilyKind::orthant) {
    return "orthant:d=" + std::to_string(spec.param("d")) +
           ": the nonnegative orthant of the lattice has homogeneous growth from the origin";
  }
  if (spec.kind == FamilyKind::tree) {
    return "tree:delta=" + std::to_string(spec.param("delta")) +
           ": every sphere subset T has |T*| = (delta-1)|T| = (s_{n+1}/s_n)|T| for n >= 1";
  }
  return std::nullopt;
}

// Greedy play on B(g_0, r) with the t_k / t*_k / p_k bookkeeping of the
// expansion argument.
Json bookkeeping(const LazyGraph& g, std::int64_t r, const Rational& lambda, const BudgetSeq& f,
                 std::int64_t turns) {
  auto x0 = sorted(ball(g, g.base(), r).members);
  BallGrower dist(g, std::span<const VertexKey>(&g.base(), 1), smoke_cap * 8);
  FireSimulation sim(g, x0, 1, smoke_cap);

  Json rows = Json::array();
  std::vector<std::int64_t> fs, ps, ss;
  std::vector<VertexKey> t_prev;
  for (const auto& v : x0) {
    if (*dist.find(v, r) == r) t_prev.push_back(v);
  }
  bool inequality_holds = true;
  std::string stopped = "turns";
  std::int64_t played = 0;
  std::vector<VertexKey> frontier = x0;
  for (std::int64_t k = 1; k <= turns; ++k) {
    std::vector<VertexKey> w;
    try {
      dist.grow_to(r + k);
      // threatened vertices and their onward spread
      VertexSet threatened;
      for (const auto& v : frontier) {
        for (const auto& u : g.neighbors(v)) {
          if (!sim.state().burning.contains(u) && !sim.state().protected_set.contains(u)) threatened.insert(u);
        }
      }
      std::vector<std::pair<std::int64_t, VertexKey>> scored;
      for (const auto& u : threatened) {
        std::int64_t s = 0;
        for (const auto& x : g.neighbors(u)) {
          if (!sim.state().burning.contains(x) && !sim.state().protected_set.contains(x)) ++s;
        }
        scored.emplace_back(-s, u);
      }
      std::sort(scored.begin(), scored.end());
      const auto take = std::min<std::int64_t>(f.at(k), static_cast<std::int64_t>(scored.size()));
      for (std::int64_t i = 0; i < take; ++i) w.push_back(scored[static_cast<std::size_t>(i)].second);
      std::sort(w.begin(), w.end());

      VertexSet fwd;
      for (const auto& v : t_prev) {
        for (const auto& u : g.neighbors(v)) {
          if (dist.distance_of(u) == r + k) fwd.insert(u);
        }
      }
      const auto& fresh = sim.advance(w);
      frontier = fresh;
      std::vector<VertexKey> t_now;
      for (const auto& v : fresh) {
        if (dist.distance_of(v) == r + k) t_now.push_back(v);
      }
      const auto t_star = static_cast<std::int64_t>(fwd.size());
      const auto t = static_cast<std::int64_t>(t_now.size());
      const bool ok = Rational(t_star) >= lambda * static_cast<std::int64_t>(t_prev.size());
      inequality_holds = inequality_holds && ok;
      rows.push_back(Json{{"k", k},
                          {"t_prev", t_prev.size()},
                          {"t_star", t_star},
                          {"t", t},
                          {"p", t_star - t},
                          {"expansion_holds", ok}});
      fs.push_back(f.at(k));
      ps.push_back(t_star - t);
      ss.push_back(static_cast<std::int64_t>(dist.layer(r + k).size()));
      t_prev = std::move(t_now);
      played = k;
      if (fresh.empty()) {
        stopped = "contained";
        break;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::resource_limit) throw;
      stopped = "cap";
      break;
    }
  }
  Json out{{"initial_radius", r},
           {"turns_requested", turns},
           {"turns_played", played},
           {"stopped", stopped},
           {"burned", sim.state().burning.size()},
           {"protected", sim.state().protected_set.size()},
           {"rows", rows},
           {"expansion_inequality_holds", inequality_holds}};
  if (!fs.empty()) {
    try {
      auto rc = rearrange_check(fs, ps, ss);
      out["rearranged_sums"] = Json{{"holds", rc.holds},
                                    {"lhs", to_string(rc.lhs)},
                                    {"rhs", to_string(rc.rhs)}};
    } catch (const Error& e) {
      out["rearranged_sums"] = Json{{"holds", nullptr}, {"reason", e.what()}};
    }
  }
  return out;
}

}  // namespace

GreedyReport greedy_baseline(const LazyGraph& g, std::span<const VertexKey> x0, const BudgetSeq& f,
                             std::int64_t turns) {
  GreedyReport rep;
  FireSimulation sim(g, x0, 1, smoke_cap * 10);
  std::vector<VertexKey> frontier(x0.begin(), x0.end());
  for (std::int64_t k = 1; k <= turns; ++k) {
    const auto& st = sim.state();
    auto free = [&](const VertexKey& u) {
      return !st.burning.contains(u) && !st.protected_set.contains(u);
    };
    VertexSet threatened;
    for (const auto& v : frontier) {
      for (const auto& u : g.neighbors(v)) {
        if (free(u)) threatened.insert(u);
      }
    }
    std::vector<std::pair<std::int64_t, VertexKey>> scored;
    for (const auto& u : threatened) {
      std::int64_t s = 0;
      for (const auto& x : g.neighbors(u)) s += free(x) ? 1 : 0;
      scored.emplace_back(-s, u);
    }
    std::sort(scored.begin(), scored.end());
    const auto take = std::min<std::int64_t>(f.at(k), static_cast<std::int64_t>(scored.size()));
    std::vector<VertexKey> w;
    for (std::int64_t i = 0; i < take; ++i) w.push_back(scored[static_cast<std::size_t>(i)].second);
    std::sort(w.begin(), w.end());
    try {
      frontier = sim.advance(w);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::resource_limit) throw;
      break;  // still spreading past the cap
    }
    rep.schedule.push_back(std::move(w));
    rep.turns = k;
    if (frontier.empty()) {
      rep.still_spreading = false;
      break;
    }
  }
  rep.burned = sim.state().burning.size();
  rep.protected_total = sim.state().protected_set.size();
  return rep;
}

Json ImpossibilityCertificate::to_json() const {
  Json audit_json{{"vertices_checked", graph_audit.vertices_checked},
                  {"max_degree", graph_audit.max_degree},
                  {"problems", graph_audit.problems}};
  Json doc{{"type", "expansion"},
           {"inputs",
            Json{{"family", family},
                 {"lambda", to_string(lambda)},
                 {"budget", budget.to_string()},
                 {"level_from", options.level_from},
                 {"level_to", options.level_to},
                 {"smoke_turns", options.smoke_turns}}},
           {"family", family},
           {"root", to_string(root)},
           {"lambda", to_string(lambda)},
           {"levels_checked", Json::array({level_from, level_to})},
           {"level_reports", reports_json(levels)},
           {"budget", budget.to_string()},
           {"budget_class", budget.growth_class().to_string()},
           {"tail_bound", tail_bound ? Json(to_string(*tail_bound)) : Json(nullptr)},
           {"chosen_radius", radius ? Json(*radius) : Json(nullptr)},
           {"s_r", s_r}};
  if (radius && tail_bound) {
    doc["audit"] = Json{{"s_r", s_r},
                        {"tail_bound", to_string(*tail_bound)},
                        {"margin", to_string(Rational(s_r) - *tail_bound)},
                        {"bookkeeping", bookkeeping}};
  } else {
    doc["audit"] = nullptr;
  }
  doc["graph_audit"] = audit_json;
  doc["machine_checked"] = machine_checked;
  doc["structural_premises"] = structural_premises;
  doc["complete"] = issued && !structural_premises.empty();
  doc["verdict"] = issued ? "certified" : "refused";
  doc["refusal"] = issued ? Json(nullptr) : Json(refusal);
  return doc;
}

ImpossibilityCertificate certify_expansion_impossible(std::string_view family, const Rational& lambda,
                                                      const BudgetSeq& budget,
                                                      const CertifyOptions& options) {
  if (lambda <= 1) throw Error(ErrorCode::invalid_argument, "lambda must exceed 1");
  if (options.level_from < 0 || options.level_to < options.level_from) {
    throw Error(ErrorCode::invalid_argument, "bad level range");
  }
  if (!budget.serializable()) throw Error(ErrorCode::invalid_argument, "budget must have a text form");
  const FamilySpec spec = FamilySpec::parse(family);
  const LazyGraph g = make_graph(spec);

  ImpossibilityCertificate cert;
  cert.family = spec.to_string();
  cert.root = g.base();
  cert.lambda = lambda;
  cert.level_from = options.level_from;
  cert.level_to = options.level_to;
  cert.budget = budget;
  cert.options = options;
  cert.graph_audit = audit_graph(g, std::min<std::int64_t>(options.level_to + 1, 6));

  BallGrower grower(g, std::span<const VertexKey>(&cert.root, 1));
  bool all_hold = true;
  for (std::int64_t n = options.level_from; n <= options.level_to; ++n) {
    cert.levels.push_back(check_expansion(g, grower, n, lambda));
    all_hold = all_hold && cert.levels.back().holds;
  }
  cert.machine_checked.push_back("max-flow expansion |A*| >= " + to_string(lambda) +
                                 "|A| for all A in S_n, n = " + std::to_string(options.level_from) +
                                 ".." + std::to_string(options.level_to));
  if (!cert.graph_audit.ok()) {
    cert.refusal = "neighbor oracle audit failed";
    return cert;
  }
  if (!all_hold) {
    auto bad = std::find_if(cert.levels.begin(), cert.levels.end(),
                            [](const ExpansionReport& r) { return !r.holds; });
    cert.refusal = "expansion fails at level " + std::to_string(bad->level);
    return cert;
  }
  cert.tail_bound = budget_tail(budget, lambda);
  if (!cert.tail_bound) {
    cert.refusal = "sum f_k / lambda^k diverges or has no closed form";
    return cert;
  }
  cert.machine_checked.push_back("exact tail sum_k f_k / lambda^k = " + to_string(*cert.tail_bound));

  for (std::int64_t r = 1;; ++r) {
    grower.grow_to(r);
    const auto s = static_cast<std::int64_t>(grower.layer(r).size());
    if (s == 0) {
      cert.refusal = "graph is finite";
      return cert;
    }
    if (Rational(s) > *cert.tail_bound) {
      cert.radius = r;
      cert.s_r = s;
      break;
    }
  }
  cert.machine_checked.push_back("s_" + std::to_string(*cert.radius) + " = " +
                                 std::to_string(cert.s_r) + " > tail bound");
  if (auto premise = expansion_premise(spec, lambda)) {
    cert.structural_premises.push_back(*premise);
  }
  cert.bookkeeping = bookkeeping(g, *cert.radius, lambda, budget, options.smoke_turns);
  cert.issued = true;
  return cert;
}

std::string to_string(Conclusion conclusion) {
  switch (conclusion) {
    case Conclusion::no_obstruction: return "no obstruction";
    case Conclusion::impossible: return "impossible";
    case Conclusion::unknown: return "unknown";
  }
  return "unknown";
}

Json DivergenceVerdict::to_json() const {
  Json prefix = Json::array();
  for (const auto& p : series.prefix) prefix.push_back(to_string(p));
  return Json{{"type", "divergence"},
              {"inputs", Json{{"family", family}, {"budget", budget.to_string()}, {"horizon", horizon}}},
              {"family", family},
              {"budget", budget.to_string()},
              {"budget_class", series.budget_class.to_string()},
              {"homogeneity",
               Json{{"levels", Json::array({0, horizon - 1})},
                    {"holds", homogeneous_on_range},
                    {"reports", reports_json(homogeneity)}}},
              {"structural_homogeneity",
               structural_homogeneity ? Json(*structural_homogeneity) : Json(nullptr)},
              {"series",
               Json{{"prefix_sums", prefix},
                    {"sphere_shape", series.shape.to_string()},
                    {"verdict", to_string(series.verdict)},
                    {"reason", series.reason}}},
              {"conclusion", to_string(conclusion)},
              {"reason", reason}};
}

DivergenceVerdict certify_divergence_required(std::string_view family, const BudgetSeq& budget,
                                              std::int64_t horizon) {
  if (horizon < 2) throw Error(ErrorCode::invalid_argument, "horizon must be at least 2");
  if (!budget.serializable()) throw Error(ErrorCode::invalid_argument, "budget must have a text form");
  if (auto bad = budget.first_decrease()) {
    throw Error(ErrorCode::non_monotone_budget,
                "budget decreases after turn " + std::to_string(*bad), {std::to_string(*bad)});
  }
  const FamilySpec spec = FamilySpec::parse(family);
  const LazyGraph g = make_graph(spec);
  DivergenceVerdict v;
  v.family = spec.to_string();
  v.budget = budget;
  v.horizon = horizon;
  v.homogeneity = check_homogeneous(g, 0, horizon - 1);
  v.homogeneous_on_range = std::all_of(v.homogeneity.begin(), v.homogeneity.end(),
                                       [](const ExpansionReport& r) { return r.holds; });
  v.structural_homogeneity = homogeneity_premise(spec);
  v.series = ratio_series(budget, profile(g, horizon).sphere);

  if (v.series.verdict == SeriesVerdict::unknown) {
    v.reason = "series verdict unknown: " + v.series.reason;
  } else if (v.series.verdict == SeriesVerdict::diverges) {
    v.conclusion = Conclusion::no_obstruction;
    v.reason = "sum f_n / s_n diverges; divergence is necessary, not sufficient";
  } else if (!v.homogeneous_on_range) {
    v.reason = "series converges but homogeneity fails on the checked range";
  } else if (!v.structural_homogeneity) {
    v.reason = "series converges; homogeneity beyond the checked range is not established";
  } else {
    v.conclusion = Conclusion::impossible;
    v.reason = "homogeneous growth and sum f_n / s_n converges";
  }
  return v;
}

std::string to_string(LatticeClass cls) {
  return cls == LatticeClass::containable ? "containable" : "impossible";
}

Json LatticeVerdict::to_json() const {
  return Json{{"type", "lattice"},
              {"inputs", Json{{"d", d}, {"q", q}, {"evidence", evidence}}},
              {"d", d},
              {"q", q},
              {"verdict", to_string(cls)},
              {"reason", reason},
              {"witness", witness},
              {"certificate", certificate ? certificate->to_json() : Json(nullptr)}};
}

LatticeVerdict classify_lattice(std::int64_t d, std::int64_t q, bool with_evidence) {
  if (d < 1 || d > 16) throw Error(ErrorCode::invalid_argument, "d must be in 1..16");
  if (q < 0) throw Error(ErrorCode::invalid_argument, "q must be nonnegative");
  LatticeVerdict v;
  v.d = d;
  v.q = q;
  v.evidence = with_evidence;
  if (q >= d - 2) {
    v.cls = LatticeClass::containable;
    v.reason = "q >= d-2: polynomial growth of degree d gives an O(n^{d-2}) sphere strategy";
    if (with_evidence && d <= 6) {
      const LazyGraph g = make_graph("lattice:d=" + std::to_string(d));
      const std::int64_t deg = std::max<std::int64_t>(d, 2);
      const std::int64_t c = 2 * d + 1;
      auto res = synth_sphere_poly(g, deg, c, 1);
      auto trace = run(g, res.x0, res.strategy);
      v.witness = res.info;
      v.witness["budget"] = res.strategy.budget.to_string();
      v.witness["outcome"] = to_string(trace.outcome);
      v.witness["burned_total"] = trace.burned_total;
    }
  } else {
    v.cls = LatticeClass::impossible;
    v.reason = "q <= d-3: the orthant subgraph has homogeneous growth with s_n of degree d-1, "
               "so sum n^q / s_n converges; containment passes to subgraphs";
    if (with_evidence && d <= 6) {
      v.certificate = certify_divergence_required("orthant:d=" + std::to_string(d),
                                                  BudgetSeq::polynomial(1, q), 2 * d + 4);
    }
  }
  return v;
}

Json check_certificate(const Json& document) {
  if (!document.is_object() || !document.contains("type") || !document.contains("inputs")) {
    throw Error(ErrorCode::parse_error, "not a certificate document");
  }
  const std::string type = document.at("type").get<std::string>();
  const Json& in = document.at("inputs");
  Json regenerated;
  if (type == "expansion") {
    CertifyOptions o;
    o.level_from = in.at("level_from").get<std::int64_t>();
    o.level_to = in.at("level_to").get<std::int64_t>();
    o.smoke_turns = in.at("smoke_turns").get<std::int64_t>();
    regenerated = certify_expansion_impossible(in.at("family").get<std::string>(),
                                               parse_rational(in.at("lambda").get<std::string>()),
                                               BudgetSeq::parse(in.at("budget").get<std::string>()), o)
                      .to_json();
  } else if (type == "divergence") {
    regenerated = certify_divergence_required(in.at("family").get<std::string>(),
                                              BudgetSeq::parse(in.at("budget").get<std::string>()),
                                              in.at("horizon").get<std::int64_t>())
                      .to_json();
  } else if (type == "lattice") {
    regenerated = classify_lattice(in.at("d").get<std::int64_t>(), in.at("q").get<std::int64_t>(),
                                   in.at("evidence").get<bool>())
                      .to_json();
  } else {
    throw Error(ErrorCode::parse_error, "unknown certificate type '" + type + "'");
  }
  if (regenerated.dump() != document.dump()) {
    throw Error(ErrorCode::check_failed, "certificate does not match its regeneration");
  }
  return regenerated;
}

}  // namespace firegraph
