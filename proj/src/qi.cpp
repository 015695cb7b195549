#include "firegraph/qi.hpp"

#include <algorithm>
#include <charconv>

#include "firegraph/error.hpp"
#include "firegraph/families.hpp"
#include "firegraph/synth.hpp"

namespace firegraph {

namespace {

VertexKey same(const VertexKey& v) { return v; }

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw Error(ErrorCode::parse_error, "bad integer in " + std::string(what) + ": '" +
                                            std::string(text) + "'");
  }
  return v;
}

}  // namespace

QiMapPair make_qi_pair(std::string_view name) {
  LazyGraph square = make_graph("square");
  if (name == "identity") {
    return {"identity", square, square, same, same, 1, *square.degree_bound()};
  }
  if (name == "grid-strong") {
    LazyGraph strong = make_graph("strong");
    return {"grid-strong", square, strong, same, same, 2, *strong.degree_bound()};
  }
  if (name.starts_with("grid-power:")) {
    const std::int64_t k = parse_int(name.substr(11), "pair");
    if (k < 1 || k > 16) throw Error(ErrorCode::invalid_argument, "power must be in 1..16");
    LazyGraph h = make_graph("power:k=" + std::to_string(k) + "(square)");
    return {std::string(name), square, h, same, same, k, *h.degree_bound()};
  }
  throw Error(ErrorCode::parse_error, "unknown pair '" + std::string(name) +
                                          "' (expected identity, grid-strong, grid-power:k)");
}

std::vector<VertexPair> sample_pairs(const LazyGraph& graph, std::int64_t radius) {
  auto members = sorted(ball(graph, graph.base(), radius).members);
  std::vector<VertexPair> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) out.emplace_back(members[i], members[j]);
  }
  return out;
}

QiReport verify_qi(const QiMapPair& pair, std::span<const VertexPair> g_pairs,
                   std::span<const VertexPair> h_pairs, std::int64_t cap) {
  QiReport rep;
  bool first[4] = {true, true, true, true};
  auto record = [&](int which, std::int64_t slack, const std::string& where) {
    if (first[which] || slack < rep.worst_slack[which]) rep.worst_slack[which] = slack;
    first[which] = false;
    if (slack < 0) rep.violations.push_back(where);
  };
  const std::int64_t c = pair.c;
  auto dist = [&](const LazyGraph& graph, const VertexKey& a, const VertexKey& b) {
    return distance(graph, a, b, cap);
  };

  VertexSet g_seen, h_seen;
  for (const auto& [a, b] : g_pairs) {
    ++rep.g_pairs;
    g_seen.insert(a);
    g_seen.insert(b);
    auto dg = dist(pair.g, a, b);
    auto dh = dist(pair.h, pair.phi(a), pair.phi(b));
    if (!dg || !dh) {
      ++rep.skipped;
      continue;
    }
    record(0, c * *dg + c - *dh, "phi distortion at " + to_string(a) + "," + to_string(b));
  }
  for (const auto& [a, b] : h_pairs) {
    ++rep.h_pairs;
    h_seen.insert(a);
    h_seen.insert(b);
    auto dh = dist(pair.h, a, b);
    auto dg = dist(pair.g, pair.psi(a), pair.psi(b));
    if (!dg || !dh) {
      ++rep.skipped;
      continue;
    }
    record(1, c * *dh + c - *dg, "psi distortion at " + to_string(a) + "," + to_string(b));
  }
  for (const auto& v : sorted(g_seen)) {
    auto d = dist(pair.g, v, pair.psi(pair.phi(v)));
    record(2, d ? c - *d : -1, "psi phi moves " + to_string(v) + " too far");
  }
  for (const auto& v : sorted(h_seen)) {
    auto d = dist(pair.h, v, pair.phi(pair.psi(v)));
    record(3, d ? c - *d : -1, "phi psi moves " + to_string(v) + " too far");
  }
  return rep;
}

SourceProvider source_by_name(std::string_view name) {
  if (name == "second-diff") {
    return [](const LazyGraph& g, std::int64_t radius) {
      return synth_second_difference(g, radius).strategy;
    };
  }
  if (name == "sphere-poly" || name.starts_with("sphere-poly:")) {
    std::int64_t d = 2, c = 3;
    if (name.size() > 11) {
      auto rest = name.substr(12);
      auto comma = rest.find(',');
      if (comma == std::string_view::npos) {
        throw Error(ErrorCode::parse_error, "sphere-poly source expects d,c");
      }
      d = parse_int(rest.substr(0, comma), "source");
      c = parse_int(rest.substr(comma + 1), "source");
    }
    return [d, c](const LazyGraph& g, std::int64_t radius) {
      return synth_sphere_poly(g, d, c, radius).strategy;
    };
  }
  throw Error(ErrorCode::parse_error,
              "unknown source '" + std::string(name) + "' (expected second-diff, sphere-poly[:d,c])");
}

TransferResult transfer(const QiMapPair& pair, const SourceProvider& source,
                        std::string source_name, const VertexKey& h0, std::int64_t q,
                        const TransferOptions& options) {
  if (q < 0) throw Error(ErrorCode::invalid_argument, "q must be nonnegative");
  const std::int64_t c = pair.c;
  TransferResult res;
  res.r = c * c + 2 * c;
  res.delta = pair.delta;
  res.g0 = pair.psi(h0);

  const LazyGraph g = pair.g.with_base(res.g0);
  const LazyGraph h = pair.h.with_base(h0);
  const std::int64_t x_radius = 2 * c * (q + 2);
  res.x0 = sorted(ball(g, res.g0, x_radius).members);
  res.y0 = sorted(ball(h, h0, q).members);

  try {
    res.source = source(g, x_radius);
  } catch (const Error& e) {
    throw Error(ErrorCode::source_failure, "source strategy failed: " + std::string(e.what()),
                e.detail());
  }
  res.scaled = scale_up(res.source, 2 * c);

  const BudgetSeq b = BudgetSeq::scaled(res.scaled.budget, sat_pow(res.delta, res.r + 1));
  res.strategy.spread_radius = 1;
  res.strategy.budget = b;

  FireSimulation fire_g(g, res.x0, 2 * c);
  FireSimulation fire_h(h, res.y0, 1);
  const auto turns_g = static_cast<std::int64_t>(res.scaled.schedule.size());

  auto lemma = [&](std::int64_t k, std::span<const VertexKey> ys, const VertexSet& x_prev) {
    for (const auto& y : ys) {
      const VertexKey gy = pair.psi(y);
      if (!x_prev.contains(gy)) {
        res.lemma_holds = false;
        if (!res.lemma_failure_turn) res.lemma_failure_turn = k;
        res.lemma_detail.push_back("turn " + std::to_string(k) + ": " + to_string(y));
      }
    }
  };

  std::int64_t idle = 0;
  for (std::int64_t k = 1;; ++k) {
    static const std::vector<VertexKey> none;
    const auto& w = k <= turns_g ? res.scaled.schedule[static_cast<std::size_t>(k - 1)] : none;

    const VertexSet& y_prev = fire_h.state().burning;
    const VertexSet& p_prev = fire_h.state().protected_set;
    VertexSet qk;
    for (const auto& v : w) {
      for (const auto& u : ball(h, pair.phi(v), res.r).members) {
        if (!y_prev.contains(u) && !p_prev.contains(u)) qk.insert(u);
      }
    }
    std::vector<VertexKey> qv = sorted(qk);
    res.q_sizes.push_back(qv.size());
    if (static_cast<std::int64_t>(qv.size()) > b.at(k)) res.budget_respected = false;

    const VertexSet x_prev = fire_g.state().burning;
    const auto& fresh = fire_h.advance(qv);
    if (k == 1) {
      auto all = sorted(fire_h.state().burning);
      lemma(k, all, x_prev);
    } else {
      lemma(k, fresh, x_prev);
    }
    fire_g.advance(w);
    const bool quiet = fresh.empty();
    res.strategy.schedule.push_back(std::move(qv));

    if (k >= turns_g) {
      if (quiet) break;
      if (++idle > options.max_idle_turns) break;
    }
  }
  res.strategy.normalize();

  // G-side fire under the scaled schedule; it must settle as well.
  {
    RunOptions ro;
    ro.stall_window = options.max_idle_turns;
    res.source_contained = run(g, res.x0, res.scaled, ro).contained();
  }

  RunOptions ro;
  ro.stall_window = options.max_idle_turns;
  res.trace = run(h, res.y0, res.strategy, ro);
  res.trace.family = pair.h.name();
  res.trace.provenance = Json{{"pair", pair.name},
                              {"c", c},
                              {"r", res.r},
                              {"delta", res.delta},
                              {"source", std::move(source_name)},
                              {"h0", to_string(h0)},
                              {"q", q},
                              {"source_budget", res.scaled.budget.to_string()}};

  if (!res.q_sizes.empty()) {
    const auto n = static_cast<std::int64_t>(res.q_sizes.size());
    auto prof = profile(h, n);
    std::vector<std::int64_t> p, f, s;
    for (std::int64_t k = 1; k <= n; ++k) {
      p.push_back(static_cast<std::int64_t>(res.q_sizes[static_cast<std::size_t>(k - 1)]));
      f.push_back(b.at(k));
      s.push_back(prof.sphere[static_cast<std::size_t>(k)]);
    }
    try {
      res.rearrange = rearrange_check(f, p, s);
    } catch (const Error&) {
      // sphere sizes of H not monotone here; the audit does not apply
    }
  }
  return res;
}

GrowthClass asymptotic_class(const BudgetSeq& b) { return b.growth_class(); }

}  // namespace firegraph
