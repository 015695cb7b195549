#include "firegraph/game.hpp"

#include <algorithm>
#include <sstream>

#include "firegraph/error.hpp"
#include "firegraph/families.hpp"

namespace firegraph {

void Strategy::normalize() {
  for (auto& w : schedule) std::sort(w.begin(), w.end());
  while (!schedule.empty() && schedule.back().empty()) schedule.pop_back();
}

void Strategy::check_budget() const {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto n = static_cast<std::int64_t>(i + 1);
    const auto size = static_cast<std::int64_t>(schedule[i].size());
    const std::int64_t limit = budget.at(n);
    if (size > limit) {
      throw Error(ErrorCode::budget_exceeded,
                  "turn " + std::to_string(n) + " protects " + std::to_string(size) +
                      " vertices but the budget allows " + std::to_string(limit),
                  {std::to_string(n)});
    }
  }
}

std::size_t Strategy::protected_total() const {
  std::size_t total = 0;
  for (const auto& w : schedule) total += w.size();
  return total;
}

void validate_protection(const FireState& state, std::span<const VertexKey> w) {
  std::vector<std::string> burning, already, repeated;
  VertexSet seen;
  for (const auto& v : w) {
    if (!seen.insert(v).second) repeated.push_back(to_string(v));
    if (state.burning.contains(v)) burning.push_back(to_string(v));
    if (state.protected_set.contains(v)) already.push_back(to_string(v));
  }
  if (!burning.empty()) {
    throw Error(ErrorCode::protection_overlap, "cannot protect a burning vertex", burning);
  }
  if (!already.empty()) {
    throw Error(ErrorCode::protection_overlap, "vertex is already protected", already);
  }
  if (!repeated.empty()) {
    throw Error(ErrorCode::protection_overlap, "vertex listed twice in one turn", repeated);
  }
}

FireState step(const LazyGraph& g, const FireState& state, std::span<const VertexKey> w,
               std::int64_t r) {
  if (r < 1) throw Error(ErrorCode::invalid_argument, "spread radius must be positive");
  validate_protection(state, w);
  FireState next = state;
  ++next.turn;
  next.protected_set.insert(w.begin(), w.end());
  std::vector<VertexKey> frontier(state.burning.begin(), state.burning.end());
  for (std::int64_t depth = 0; depth < r && !frontier.empty(); ++depth) {
    std::vector<VertexKey> reached;
    for (const auto& v : frontier) {
      for (auto& u : g.neighbors(v)) {
        if (next.protected_set.contains(u) || next.burning.contains(u)) continue;
        next.burning.insert(u);
        reached.push_back(std::move(u));
      }
    }
    frontier = std::move(reached);
  }
  return next;
}

FireSimulation::FireSimulation(const LazyGraph& g, std::span<const VertexKey> x0, std::int64_t r,
                               std::size_t cap)
    : graph_(&g), r_(r), cap_(cap) {
  if (r < 1) throw Error(ErrorCode::invalid_argument, "spread radius must be positive");
  state_.burning.insert(x0.begin(), x0.end());
  for (const auto& v : state_.burning) {
    if (is_active(v)) active_.push_back(v);
  }
  std::sort(active_.begin(), active_.end());
}

bool FireSimulation::is_active(const VertexKey& v) const {
  for (const auto& u : graph_->neighbors(v)) {
    if (!state_.burning.contains(u) && !state_.protected_set.contains(u)) return true;
  }
  return false;
}

const std::vector<VertexKey>& FireSimulation::advance(std::span<const VertexKey> w) {
  validate_protection(state_, w);
  ++state_.turn;
  state_.protected_set.insert(w.begin(), w.end());
  newly_.clear();
  // a path leaving the fire starts at some active vertex, so those suffice as sources
  std::vector<VertexKey> frontier = active_;
  for (std::int64_t depth = 0; depth < r_ && !frontier.empty(); ++depth) {
    std::vector<VertexKey> reached;
    for (const auto& v : frontier) {
      for (auto& u : graph_->neighbors(v)) {
        if (state_.protected_set.contains(u) || state_.burning.contains(u)) continue;
        state_.burning.insert(u);
        newly_.push_back(u);
        reached.push_back(std::move(u));
      }
    }
    if (state_.burning.size() > cap_) {
      throw Error(ErrorCode::resource_limit,
                  "fire exceeded the member cap of " + std::to_string(cap_) + " vertices");
    }
    frontier = std::move(reached);
  }
  std::vector<VertexKey> active;
  for (const auto* list : {&active_, &newly_}) {
    for (const auto& v : *list) {
      if (is_active(v)) active.push_back(v);
    }
  }
  std::sort(active.begin(), active.end());
  active_ = std::move(active);
  std::sort(newly_.begin(), newly_.end());
  return newly_;
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::contained: return "contained";
    case Outcome::budget_exhausted: return "budget_exhausted";
    case Outcome::cap_exceeded: return "cap_exceeded";
  }
  return "?";
}

Outcome parse_outcome(std::string_view text) {
  if (text == "contained") return Outcome::contained;
  if (text == "budget_exhausted") return Outcome::budget_exhausted;
  if (text == "cap_exceeded") return Outcome::cap_exceeded;
  throw Error(ErrorCode::parse_error, "unknown outcome '" + std::string(text) + "'");
}

GameTrace run(const LazyGraph& g, std::span<const VertexKey> x0, Strategy strategy,
              const RunOptions& options) {
  strategy.normalize();
  strategy.check_budget();
  const std::int64_t r = strategy.spread_radius;
  if (r < 1) throw Error(ErrorCode::invalid_argument, "spread radius must be positive");

  GameTrace trace;
  trace.family = g.name();
  trace.x0.assign(x0.begin(), x0.end());
  std::sort(trace.x0.begin(), trace.x0.end());
  trace.x0.erase(std::unique(trace.x0.begin(), trace.x0.end()), trace.x0.end());
  trace.stall_window = options.stall_window;
  trace.radius_cap = options.radius_cap.value_or(256 * r);
  const auto schedule_length = static_cast<std::int64_t>(strategy.schedule.size());

  FireSimulation sim(g, trace.x0, r, options.member_cap);
  std::optional<BallGrower> reach;  // B(X_0, radius_cap), grown on demand
  std::int64_t last_growth = 0;
  const std::vector<VertexKey> none;

  for (std::int64_t n = 1;; ++n) {
    const auto& w = n <= schedule_length ? strategy.schedule[static_cast<std::size_t>(n - 1)] : none;
    try {
      sim.advance(w);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::resource_limit) throw;
      trace.outcome = Outcome::cap_exceeded;
      break;
    }
    TurnRecord record{n, w, sim.state().burning.size(), sim.frontier_count()};
    if (options.on_turn) options.on_turn(sim, record);
    trace.turns.push_back(std::move(record));
    const auto& newly = sim.newly_burned();
    if (!newly.empty()) last_growth = n;

    if (n >= schedule_length && newly.empty()) {
      trace.outcome = Outcome::contained;
      trace.containment_time = last_growth;
      break;
    }
    if (r * n > trace.radius_cap) {
      bool escaped = false;
      try {
        if (!reach) reach.emplace(g, trace.x0, options.member_cap);
        for (const auto& v : newly) {
          if (!reach->find(v, trace.radius_cap)) {
            escaped = true;
            break;
          }
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::resource_limit) throw;
        escaped = true;
      }
      if (escaped) {
        trace.outcome = Outcome::cap_exceeded;
        break;
      }
    }
    if (options.stall_window && n >= schedule_length && n - schedule_length >= *options.stall_window) {
      trace.outcome = Outcome::budget_exhausted;
      break;
    }
  }
  trace.burned_total = sim.state().burning.size();
  trace.final_state = sim.state();
  trace.strategy = std::move(strategy);
  return trace;
}

Json keys_json(std::span<const VertexKey> keys) {
  Json out = Json::array();
  for (const auto& k : keys) out.push_back(to_string(k));
  return out;
}

std::vector<VertexKey> keys_from_json(const Json& array) {
  if (!array.is_array()) throw Error(ErrorCode::parse_error, "expected an array of vertex keys");
  std::vector<VertexKey> out;
  for (const auto& item : array) {
    if (!item.is_string()) throw Error(ErrorCode::parse_error, "vertex keys must be strings");
    out.push_back(parse_key(item.get<std::string>()));
  }
  return out;
}

std::string to_jsonl(const GameTrace& trace) {
  if (!trace.strategy.budget.serializable()) {
    throw Error(ErrorCode::invalid_argument, "callback budgets cannot be serialized");
  }
  Json header;
  header["type"] = "header";
  header["family"] = trace.family;
  header["x0"] = keys_json(trace.x0);
  header["r"] = trace.strategy.spread_radius;
  header["budget"] = trace.strategy.budget.to_string();
  header["stall_window"] = trace.stall_window ? Json(*trace.stall_window) : Json(nullptr);
  header["radius_cap"] = trace.radius_cap;
  Json schedule = Json::array();
  for (const auto& w : trace.strategy.schedule) schedule.push_back(keys_json(w));
  header["schedule"] = std::move(schedule);
  if (!trace.provenance.is_null()) header["provenance"] = trace.provenance;

  std::string out = header.dump() + "\n";
  for (const auto& t : trace.turns) {
    Json line;
    line["type"] = "turn";
    line["turn"] = t.turn;
    line["protected"] = keys_json(t.protected_now);
    line["burning_count"] = t.burning_count;
    line["frontier_count"] = t.frontier_count;
    out += line.dump() + "\n";
  }
  Json footer;
  footer["type"] = "footer";
  footer["outcome"] = to_string(trace.outcome);
  footer["containment_time"] = trace.containment_time ? Json(*trace.containment_time) : Json(nullptr);
  footer["burned_total"] = trace.burned_total;
  out += footer.dump() + "\n";
  return out;
}

GameTrace parse_trace(std::string_view text) {
  GameTrace trace;
  bool have_header = false, have_footer = false;
  std::istringstream in{std::string(text)};
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Json j = Json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        have_header = true;
        trace.family = j.at("family").get<std::string>();
        trace.x0 = keys_from_json(j.at("x0"));
        trace.strategy.spread_radius = j.at("r").get<std::int64_t>();
        trace.strategy.budget = BudgetSeq::parse(j.at("budget").get<std::string>());
        if (!j.at("stall_window").is_null()) trace.stall_window = j["stall_window"].get<std::int64_t>();
        trace.radius_cap = j.at("radius_cap").get<std::int64_t>();
        for (const auto& w : j.at("schedule")) trace.strategy.schedule.push_back(keys_from_json(w));
        if (j.contains("provenance")) trace.provenance = j["provenance"];
      } else if (type == "turn") {
        TurnRecord t;
        t.turn = j.at("turn").get<std::int64_t>();
        t.protected_now = keys_from_json(j.at("protected"));
        t.burning_count = j.at("burning_count").get<std::size_t>();
        t.frontier_count = j.at("frontier_count").get<std::size_t>();
        trace.turns.push_back(std::move(t));
      } else if (type == "footer") {
        have_footer = true;
        trace.outcome = parse_outcome(j.at("outcome").get<std::string>());
        if (!j.at("containment_time").is_null()) {
          trace.containment_time = j["containment_time"].get<std::int64_t>();
        }
        trace.burned_total = j.at("burned_total").get<std::size_t>();
      } else {
        throw Error(ErrorCode::parse_error, "unknown trace record type '" + type + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed trace: ") + e.what());
  }
  if (!have_header || !have_footer) {
    throw Error(ErrorCode::parse_error, "trace needs a header and a footer record");
  }
  return trace;
}

std::string replay_jsonl(std::string_view text) {
  GameTrace stored = parse_trace(text);
  LazyGraph g = make_graph(stored.family);
  RunOptions options;
  options.stall_window = stored.stall_window;
  options.radius_cap = stored.radius_cap;
  GameTrace fresh = run(g, stored.x0, stored.strategy, options);
  fresh.provenance = stored.provenance;
  return to_jsonl(fresh);
}

Strategy scale_up(const Strategy& strategy, std::int64_t r) {
  if (r < 1) throw Error(ErrorCode::invalid_argument, "scale factor must be positive");
  if (strategy.spread_radius != 1) {
    throw Error(ErrorCode::invalid_argument, "scale_up expects a radius-1 strategy");
  }
  const auto horizon = static_cast<std::int64_t>(strategy.schedule.size()) * r + 4096;
  if (auto bad = strategy.budget.first_decrease(horizon)) {
    throw Error(ErrorCode::non_monotone_budget,
                "budget decreases after turn " + std::to_string(*bad), {std::to_string(*bad)});
  }
  Strategy out;
  out.spread_radius = r;
  out.budget = strategy.budget.kind() == BudgetSeq::Kind::constant
                   ? BudgetSeq::constant(sat_mul(strategy.budget.c(), r))
                   : BudgetSeq::turn_sum(strategy.budget, r);
  const std::size_t n = strategy.schedule.size();
  const auto ru = static_cast<std::size_t>(r);
  for (std::size_t start = 0; start < n; start += ru) {
    std::vector<VertexKey> u;
    for (std::size_t i = start; i < std::min(n, start + ru); ++i) {
      u.insert(u.end(), strategy.schedule[i].begin(), strategy.schedule[i].end());
    }
    out.schedule.push_back(std::move(u));
  }
  out.normalize();
  return out;
}

Strategy scale_down(const LazyGraph& g, const Strategy& strategy, const BudgetSeq& f,
                    std::span<const VertexKey> x0) {
  const std::int64_t r = strategy.spread_radius;
  if (!strategy.schedule.empty()) {
    auto y0 = ball(g, x0, r);
    std::vector<std::string> inside;
    for (const auto& v : strategy.schedule.front()) {
      if (y0.contains(v)) inside.push_back(to_string(v));
    }
    if (!inside.empty()) {
      throw Error(ErrorCode::protection_overlap,
                  "first turn protects vertices inside B(X_0, r); the strategy must be for that ball",
                  inside);
    }
  }
  Strategy out;
  out.spread_radius = 1;
  out.budget = f;
  for (std::size_t n = 0; n < strategy.schedule.size(); ++n) {
    std::vector<VertexKey> w = strategy.schedule[n];
    std::sort(w.begin(), w.end());
    std::size_t used = 0;
    const auto base = static_cast<std::int64_t>(n) * r;
    for (std::int64_t i = 1; i <= r; ++i) {
      const auto take = std::min<std::size_t>(w.size() - used, static_cast<std::size_t>(f.at(base + i)));
      out.schedule.emplace_back(w.begin() + static_cast<std::ptrdiff_t>(used),
                                w.begin() + static_cast<std::ptrdiff_t>(used + take));
      used += take;
    }
    if (used < w.size()) {
      throw Error(ErrorCode::partition_infeasible,
                  "turn " + std::to_string(n + 1) + " protects " + std::to_string(w.size()) +
                      " vertices, more than the " + std::to_string(used) +
                      " the radius-1 budget allows over its " + std::to_string(r) + " turns",
                  {std::to_string(n + 1)});
    }
  }
  out.normalize();
  return out;
}

Strategy restrict_strategy(const Strategy& strategy,
                           const std::function<bool(const VertexKey&)>& membership) {
  Strategy out = strategy;
  for (auto& w : out.schedule) std::erase_if(w, [&](const VertexKey& v) { return !membership(v); });
  out.normalize();
  return out;
}

}  // namespace firegraph
