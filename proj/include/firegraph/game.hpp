#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "firegraph/budget.hpp"
#include "firegraph/lazy_graph.hpp"

namespace firegraph {

using Json = nlohmann::ordered_json;

/// Schedule W_1..W_N with its budget {f_n} and spread radius r.
struct Strategy {
  std::int64_t spread_radius = 1;
  BudgetSeq budget;
  std::vector<std::vector<VertexKey>> schedule;

  /// Sorts each W_n and drops trailing empty turns.
  void normalize();
  /// Throws budget_exceeded (with the turn index) when some |W_n| > f_n.
  void check_budget() const;
  std::size_t protected_total() const;
};

struct FireState {
  std::int64_t turn = 0;
  VertexSet burning;
  VertexSet protected_set;
};

/// One turn of the game as a pure function: protect W, then spread along
/// paths of length <= r that avoid every protected vertex.
FireState step(const LazyGraph& g, const FireState& state, std::span<const VertexKey> w,
               std::int64_t r);

/// Incremental form of step(): keeps the active part of the fire (burning
/// vertices with a free neighbor) so each turn only searches near the front.
class FireSimulation {
 public:
  FireSimulation(const LazyGraph& g, std::span<const VertexKey> x0, std::int64_t r,
                 std::size_t cap = member_cap());

  /// Validates W against the rules, applies it and spreads. Returns the
  /// vertices that caught fire this turn, in key order.
  const std::vector<VertexKey>& advance(std::span<const VertexKey> w);

  const FireState& state() const noexcept { return state_; }
  std::size_t frontier_count() const noexcept { return active_.size(); }
  const std::vector<VertexKey>& newly_burned() const noexcept { return newly_; }

 private:
  bool is_active(const VertexKey& v) const;

  const LazyGraph* graph_;
  std::int64_t r_;
  std::size_t cap_;
  FireState state_;
  std::vector<VertexKey> active_;
  std::vector<VertexKey> newly_;
};

/// Throws protection_overlap when W repeats a vertex or touches the fire or
/// earlier protection. Offending keys go into Error::detail().
void validate_protection(const FireState& state, std::span<const VertexKey> w);

enum class Outcome { contained, budget_exhausted, cap_exceeded };
std::string to_string(Outcome outcome);
Outcome parse_outcome(std::string_view text);

struct TurnRecord {
  std::int64_t turn = 0;
  std::vector<VertexKey> protected_now;
  std::size_t burning_count = 0;
  std::size_t frontier_count = 0;
};

struct RunOptions {
  /// Empty turns after the schedule before giving up with budget_exhausted.
  std::optional<std::int64_t> stall_window;
  /// Default 256 r. The fire leaving B(X_0, radius_cap) ends the run.
  std::optional<std::int64_t> radius_cap;
  std::size_t member_cap = firegraph::member_cap();
  std::function<void(const FireSimulation&, const TurnRecord&)> on_turn;
};

struct GameTrace {
  std::string family;
  std::vector<VertexKey> x0;
  Strategy strategy;
  std::optional<std::int64_t> stall_window;
  std::int64_t radius_cap = 0;
  Json provenance;  // null when absent
  std::vector<TurnRecord> turns;
  Outcome outcome = Outcome::cap_exceeded;
  std::optional<std::int64_t> containment_time;
  std::size_t burned_total = 0;
  /// Not serialized: the sets at the end of the run.
  FireState final_state;

  bool contained() const noexcept { return outcome == Outcome::contained; }
};

GameTrace run(const LazyGraph& g, std::span<const VertexKey> x0, Strategy strategy,
              const RunOptions& options = {});

/// JSON-lines: header, one record per turn, footer.
std::string to_jsonl(const GameTrace& trace);
GameTrace parse_trace(std::string_view text);

/// Re-runs the trace from its header (the family must be a parseable spec)
/// and returns the regenerated JSON-lines.
std::string replay_jsonl(std::string_view text);

/// (f_n, 1) schedule to (g_n, r): U_n = W_{(n-1)r+1} u ... u W_{nr}.
Strategy scale_up(const Strategy& strategy, std::int64_t r);

/// (g_n, r) schedule for B(X_0, r) to an (f_n, 1) schedule for X_0 by
/// splitting W_{n+1} into pieces of size <= f_{rn+1}, ..., f_{rn+r}.
Strategy scale_down(const LazyGraph& g, const Strategy& strategy, const BudgetSeq& f,
                    std::span<const VertexKey> x0);

/// W_k intersected with the subgraph.
Strategy restrict_strategy(const Strategy& strategy,
                           const std::function<bool(const VertexKey&)>& membership);

Json keys_json(std::span<const VertexKey> keys);
std::vector<VertexKey> keys_from_json(const Json& array);

}  // namespace firegraph
