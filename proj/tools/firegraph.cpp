#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "firegraph/certify.hpp"
#include "firegraph/error.hpp"
#include "firegraph/families.hpp"
#include "firegraph/qi.hpp"
#include "firegraph/server.hpp"
#include "firegraph/service.hpp"
#include "firegraph/synth.hpp"

using namespace firegraph;

namespace {

enum Exit { ok = 0, other = 1, usage = 2, invalid_input = 3, rule_violation = 4, resource = 5, check_failed = 6 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::parse_error:
    case ErrorCode::not_found:
    case ErrorCode::source_failure: return invalid_input;
    case ErrorCode::protection_overlap:
    case ErrorCode::budget_exceeded:
    case ErrorCode::non_monotone_budget:
    case ErrorCode::partition_infeasible:
    case ErrorCode::hypothesis_violation: return rule_violation;
    case ErrorCode::resource_limit:
    case ErrorCode::scan_cap_exceeded: return resource;
    case ErrorCode::check_failed: return check_failed;
  }
  return other;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::not_found, "cannot read '" + path + "'", {path});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write '" + out_path + "'", {out_path});
  out << text;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) throw Error(ErrorCode::parse_error, "levels must look like a..b");
  try {
    return {std::stoll(text.substr(0, dots)), std::stoll(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse_error, "levels must look like a..b");
  }
}

// A strategy file is either a trace (its header carries the schedule) or a
// JSON object {"r", "budget", "schedule"}.
Strategy load_strategy(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.substr(0, text.find('\n'));
  Json head;
  try {
    head = Json::parse(first);
  } catch (const Json::exception&) {
    head = Json::parse(text);
  }
  if (head.value("type", "") == "header") return parse_trace(text).strategy;
  Strategy s;
  s.spread_radius = head.value("r", std::int64_t{1});
  s.budget = BudgetSeq::parse(head.at("budget").get<std::string>());
  for (const auto& w : head.at("schedule")) s.schedule.push_back(keys_from_json(w));
  return s;
}

struct Common {
  std::string family = "square";
  std::string x0 = "ball:0";
  std::string out;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"firegraph: firefighter containment on infinite graphs"};
  app.require_subcommand(1);
  Common common;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Play a schedule and write the JSON-lines trace");
  std::string budget = "0", strategy_path;
  std::int64_t radius = 1;
  std::optional<std::int64_t> stall, radius_cap;
  sim->add_option("--family", common.family, "family spec")->required();
  sim->add_option("--x0", common.x0, "ball:m or ';'-separated keys");
  sim->add_option("--budget", budget, "budget sequence");
  sim->add_option("--r", radius, "spread radius");
  sim->add_option("--strategy", strategy_path, "trace or strategy JSON to play");
  sim->add_option("--stall", stall, "empty turns allowed after the schedule");
  sim->add_option("--radius-cap", radius_cap, "fire leaving B(X_0, cap) ends the run");
  sim->add_option("--out", common.out, "output file (default stdout)");

  // synth
  auto* syn = app.add_subcommand("synth", "Synthesize a containment strategy and replay it");
  std::string method;
  std::int64_t sd = 2, sc = 3, sm = 1, sn = 1;
  syn->add_option("--method", method, "sphere-poly | second-diff | cut-vertex")->required();
  syn->add_option("--family", common.family, "family spec");
  syn->add_option("--d", sd, "sphere-poly: growth degree");
  syn->add_option("--c", sc, "sphere-poly: growth constant");
  syn->add_option("--m", sm, "sphere-poly: initial ball radius");
  syn->add_option("--n", sn, "second-diff: initial ball radius");
  syn->add_option("--x0", common.x0, "cut-vertex: initial fire");
  syn->add_option("--r", radius, "cut-vertex: spread radius");
  syn->add_option("--out", common.out, "output file (default stdout)");

  // oracle
  auto* ora = app.add_subcommand("oracle", "Exact game search on a finite truncation");
  std::int64_t of = 1, oR = 4;
  std::optional<std::int64_t> cand;
  std::size_t node_cap = 2'000'000;
  ora->add_option("--family", common.family, "family spec")->required();
  ora->add_option("--x0", common.x0, "initial fire");
  ora->add_option("--f", of, "constant budget");
  ora->add_option("--R", oR, "truncation radius");
  ora->add_option("--candidate-radius", cand, "only protect within this distance of the fire");
  ora->add_option("--node-cap", node_cap, "search node limit");

  // growth
  auto* gro = app.add_subcommand("growth", "Growth profile table");
  std::int64_t horizon = 8;
  std::string format = "text";
  gro->add_option("--family", common.family, "family spec")->required();
  gro->add_option("--N", horizon, "horizon");
  gro->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));

  // expansion
  auto* exp = app.add_subcommand("expansion", "Max-flow sphere expansion checks");
  std::string lambda, levels = "0..5";
  bool homogeneous = false;
  exp->add_option("--family", common.family, "family spec")->required();
  exp->add_option("--lambda", lambda, "target ratio p/q");
  exp->add_option("--levels", levels, "level range a..b");
  exp->add_flag("--homogeneous", homogeneous, "use lambda_n = s_{n+1}/s_n");

  // transfer
  auto* tra = app.add_subcommand("transfer", "Transfer a strategy across a quasi-isometry");
  std::string pair_name = "grid-strong", source = "second-diff", h0_text;
  std::int64_t tq = 0;
  tra->add_option("--pair", pair_name, "identity | grid-strong | grid-power:k");
  tra->add_option("--q", tq, "radius of the H-side initial ball");
  tra->add_option("--source", source, "second-diff | sphere-poly[:d,c]");
  tra->add_option("--h0", h0_text, "center of the H-side ball (default the base vertex)");
  tra->add_option("--out", common.out, "output file (default stdout)");

  // certify
  auto* cer = app.add_subcommand("certify", "Emit an impossibility certificate or verdict");
  std::string kind, cbudget = "1";
  std::int64_t cd = 3, cq = 0, chorizon = 12, smoke = 20;
  bool evidence = true;
  cer->add_option("--kind", kind, "expansion | divergence | lattice")
      ->required()
      ->check(CLI::IsMember({"expansion", "divergence", "lattice"}));
  cer->add_option("--family", common.family, "family spec");
  cer->add_option("--lambda", lambda, "expansion ratio p/q");
  cer->add_option("--budget", cbudget, "budget sequence");
  cer->add_option("--levels", levels, "expansion: checked level range a..b");
  cer->add_option("--smoke-turns", smoke, "expansion: greedy turns recorded in the audit");
  cer->add_option("--horizon", chorizon, "divergence: levels examined");
  cer->add_option("--d", cd, "lattice dimension");
  cer->add_option("--q", cq, "budget degree");
  cer->add_option("--evidence", evidence, "lattice: attach witness or divergence check");
  cer->add_option("--out", common.out, "output file (default stdout)");

  // check
  auto* chk = app.add_subcommand("check", "Re-validate a certificate or trace file");
  std::string check_path;
  chk->add_option("file", check_path, "certificate (.json) or trace (.jsonl)")->required();

  // serve
  auto* srv = app.add_subcommand("serve", "HTTP JSON game sessions");
  int port = 8080;
  std::string host = "127.0.0.1";
  srv->add_option("--port", port, "port");
  srv->add_option("--host", host, "bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : usage;
  }

  try {
    if (*sim) {
      const LazyGraph g = make_graph(common.family);
      const auto x0 = parse_x0(g, common.x0);
      Strategy s;
      if (!strategy_path.empty()) {
        s = load_strategy(strategy_path);
        if (sim->count("--budget")) s.budget = BudgetSeq::parse(budget);
        if (sim->count("--r")) s.spread_radius = radius;
      } else {
        s.budget = BudgetSeq::parse(budget);
        s.spread_radius = radius;
      }
      require_vertices(g, x0);
      for (const auto& w : s.schedule) require_vertices(g, w);
      RunOptions o;
      o.stall_window = stall;
      o.radius_cap = radius_cap;
      emit(to_jsonl(run(g, x0, std::move(s), o)), common.out);
    } else if (*syn) {
      const LazyGraph g = make_graph(syn->count("--family") ? common.family
                                     : method == "cut-vertex" ? std::string("subexp")
                                                              : common.family);
      SynthResult res;
      if (method == "sphere-poly") {
        res = synth_sphere_poly(g, sd, sc, sm);
      } else if (method == "second-diff") {
        res = synth_second_difference(g, sn);
      } else if (method == "cut-vertex") {
        res = synth_cut_vertex(g, parse_x0(g, common.x0), radius);
      } else {
        throw Error(ErrorCode::parse_error, "unknown method '" + method + "'");
      }
      auto trace = run(g, res.x0, res.strategy);
      trace.provenance = res.info;
      emit(to_jsonl(trace), common.out);
    } else if (*ora) {
      const LazyGraph g = make_graph(common.family);
      const auto x0 = parse_x0(g, common.x0);
      OracleOptions o;
      o.node_cap = node_cap;
      o.candidate_radius = cand;
      auto res = minimax_oracle(g, x0, of, oR, o);
      Json out{{"family", g.name()},
               {"x0", keys_json(x0)},
               {"f", of},
               {"R", oR},
               {"verdict", to_string(res.verdict)},
               {"burned", res.burned},
               {"turns", res.turns},
               {"nodes", res.nodes},
               {"ball_size", res.ball_size},
               {"exhaustive", res.exhaustive},
               {"note", res.note}};
      Json witness = Json::array();
      for (const auto& w : res.witness) witness.push_back(keys_json(w));
      out["witness"] = witness;
      if (!res.witness.empty()) {
        Strategy s;
        s.budget = BudgetSeq::constant(of);
        s.schedule = res.witness;
        auto t = run(g, x0, s);
        out["replay"] = Json{{"outcome", to_string(t.outcome)}, {"burned_total", t.burned_total}};
      }
      std::cout << out.dump(2) << "\n";
    } else if (*gro) {
      const LazyGraph g = make_graph(common.family);
      auto p = profile(g, horizon);
      if (format == "json") {
        std::cout << Json{{"family", g.name()},
                          {"root", to_string(p.root)},
                          {"N", p.horizon},
                          {"beta", p.beta},
                          {"beta1", p.beta1},
                          {"beta2", p.beta2},
                          {"s", p.sphere}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << "# " << g.name() << " rooted at " << to_string(p.root) << "\n";
        std::cout << "n\tbeta\tbeta1\tbeta2\ts\n";
        for (std::int64_t n = 0; n <= p.horizon; ++n) {
          const auto i = static_cast<std::size_t>(n);
          std::cout << n << "\t" << p.beta[i] << "\t" << p.beta1[i] << "\t"
                    << (n == 0 ? std::string("-") : std::to_string(p.beta2[i])) << "\t" << p.sphere[i]
                    << "\n";
        }
      }
    } else if (*exp) {
      const LazyGraph g = make_graph(common.family);
      auto [a, b] = parse_range(levels);
      std::vector<ExpansionReport> reps;
      if (homogeneous) {
        reps = check_homogeneous(g, a, b);
      } else {
        if (lambda.empty()) throw Error(ErrorCode::invalid_argument, "--lambda or --homogeneous is required");
        BallGrower grower(g, std::span<const VertexKey>(&g.base(), 1));
        for (auto n = a; n <= b; ++n) reps.push_back(check_expansion(g, grower, n, parse_rational(lambda)));
      }
      Json out = Json::array();
      bool all = true;
      for (const auto& r : reps) {
        all = all && r.holds;
        out.push_back(Json{{"level", r.level},
                           {"lambda", to_string(r.lambda)},
                           {"holds", r.holds},
                           {"sphere_size", r.sphere_size},
                           {"next_size", r.next_size},
                           {"flow", r.flow},
                           {"required_flow", r.required_flow},
                           {"witness", keys_json(r.witness)},
                           {"witness_forward", r.witness_forward}});
      }
      std::cout << Json{{"family", g.name()}, {"all_hold", all}, {"levels", out}}.dump(2) << "\n";
    } else if (*tra) {
      auto pair = make_qi_pair(pair_name);
      const VertexKey h0 = h0_text.empty() ? pair.h.base() : parse_key(h0_text);
      require_vertices(pair.h, std::span<const VertexKey>(&h0, 1));
      auto res = transfer(pair, source_by_name(source), source, h0, tq);
      res.trace.provenance["lemma_holds"] = res.lemma_holds;
      res.trace.provenance["budget_respected"] = res.budget_respected;
      res.trace.provenance["q_sizes"] = res.q_sizes;
      emit(to_jsonl(res.trace), common.out);
      std::cerr << Json{{"outcome", to_string(res.trace.outcome)},
                        {"lemma_holds", res.lemma_holds},
                        {"budget_respected", res.budget_respected},
                        {"budget", res.strategy.budget.to_string()},
                        {"class", asymptotic_class(res.strategy.budget).to_string()}}
                       .dump()
                << "\n";
      if (!res.lemma_holds || !res.budget_respected || !res.trace.contained()) return check_failed;
    } else if (*cer) {
      Json doc;
      if (kind == "expansion") {
        if (lambda.empty()) throw Error(ErrorCode::invalid_argument, "--lambda is required");
        CertifyOptions o;
        std::tie(o.level_from, o.level_to) = parse_range(levels);
        o.smoke_turns = smoke;
        doc = certify_expansion_impossible(common.family, parse_rational(lambda), BudgetSeq::parse(cbudget), o)
                  .to_json();
      } else if (kind == "divergence") {
        doc = certify_divergence_required(common.family, BudgetSeq::parse(cbudget), chorizon).to_json();
      } else {
        doc = classify_lattice(cd, cq, evidence).to_json();
      }
      emit(doc.dump(2) + "\n", common.out);
    } else if (*chk) {
      const std::string text = read_file(check_path);
      const auto first = text.substr(0, text.find('\n'));
      Json head;
      try {
        head = Json::parse(first);
      } catch (const Json::exception&) {
        head = Json::parse(text);
      }
      if (head.value("type", "") == "header") {
        if (replay_jsonl(text) != text) throw Error(ErrorCode::check_failed, "trace does not replay identically");
        std::cout << Json{{"ok", true}, {"kind", "trace"}}.dump() << "\n";
      } else {
        Json doc = Json::parse(text);
        Json regenerated = check_certificate(doc);
        if (regenerated.dump(2) + "\n" != text) {
          throw Error(ErrorCode::check_failed, "certificate file differs from its regeneration byte for byte");
        }
        std::cout << Json{{"ok", true}, {"kind", doc.at("type")}}.dump() << "\n";
      }
    } else if (*srv) {
      SessionManager sessions;
      std::cerr << "listening on " << host << ":" << port << "\n";
      if (!serve(host, port, sessions)) throw Error(ErrorCode::invalid_argument, "cannot bind port");
    }
  } catch (const Error& e) {
    std::cerr << error_json(e).dump() << "\n";
    return exit_code(e.code());
  } catch (const Json::exception& e) {
    std::cerr << error_json(Error(ErrorCode::parse_error, e.what())).dump() << "\n";
    return invalid_input;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "internal"}, {"message", e.what()}, {"detail", Json::array()}}.dump() << "\n";
    return other;
  }
  return ok;
}
