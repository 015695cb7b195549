#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "firegraph/game.hpp"
#include "firegraph/growth.hpp"

namespace firegraph {

/// Maps phi: G -> H and psi: H -> G with
///   d_H(phi a, phi b) <= c d_G(a, b) + c,   d_G(psi a, psi b) <= c d_H(a, b) + c,
///   d_G(g, psi phi g) <= c,                 d_H(h, phi psi h) <= c.
struct QiMapPair {
  std::string name;
  LazyGraph g;
  LazyGraph h;
  std::function<VertexKey(const VertexKey&)> phi;
  std::function<VertexKey(const VertexKey&)> psi;
  std::int64_t c = 1;
  /// Degree bound of H used in b_n = a_n delta^{r+1}.
  std::int64_t delta = 1;
};

/// "identity" (square grid to itself, c = 1), "grid-strong" (c = 2) and
/// "grid-power:k" (square grid to its k-th power, c = k). All use identity
/// coordinates.
QiMapPair make_qi_pair(std::string_view name);

using VertexPair = std::pair<VertexKey, VertexKey>;

/// Every unordered pair of distinct vertices in B(base, radius), key order.
std::vector<VertexPair> sample_pairs(const LazyGraph& graph, std::int64_t radius);

struct QiReport {
  std::size_t g_pairs = 0, h_pairs = 0;
  /// Smallest (right side - left side) seen for each inequality, in the
  /// order phi-distortion, psi-distortion, psi-phi density, phi-psi density.
  std::int64_t worst_slack[4] = {0, 0, 0, 0};
  std::size_t skipped = 0;  // distances beyond the cap
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

QiReport verify_qi(const QiMapPair& pair, std::span<const VertexPair> g_pairs,
                   std::span<const VertexPair> h_pairs, std::int64_t cap);

/// Produces a radius-1 strategy that contains B(g.base(), radius) in g.
using SourceProvider = std::function<Strategy(const LazyGraph& g, std::int64_t radius)>;

/// "second-diff" or "sphere-poly[:d,c]" (default d = 2, c = 3).
SourceProvider source_by_name(std::string_view name);

struct TransferOptions {
  /// Extra empty turns simulated after the schedule before giving up.
  std::int64_t max_idle_turns = 256;
};

struct TransferResult {
  std::int64_t r = 0;
  std::int64_t delta = 0;
  VertexKey g0;
  std::vector<VertexKey> x0;  // B_G(g0, 2c(q+2))
  std::vector<VertexKey> y0;  // B_H(h0, q)
  Strategy source;            // (f_n, 1) on G
  Strategy scaled;            // (a_n, 2c) on G
  Strategy strategy;          // (b_n, 1) on H
  std::vector<std::size_t> q_sizes;
  bool budget_respected = true;
  /// h in Y_k implies psi h in X_{k-1}, checked every turn.
  bool lemma_holds = true;
  std::optional<std::int64_t> lemma_failure_turn;
  std::vector<std::string> lemma_detail;
  bool source_contained = false;
  /// sum |Q_i| / s_i <= sum b_i / s_i on the turns played, s = sphere sizes of H.
  std::optional<RearrangeResult> rearrange;
  GameTrace trace;  // replay of the H strategy, with provenance
};

/// Builds Q_k = (union over g in W_k of B_H(phi g, r)) minus Y_{k-1} and the
/// earlier Q's, turn by turn alongside the H-side fire, for Y_0 = B_H(h0, q).
TransferResult transfer(const QiMapPair& pair, const SourceProvider& source,
                        std::string source_name, const VertexKey& h0, std::int64_t q,
                        const TransferOptions& options = {});

/// The asymptotic class of a budget; transfer keeps it unchanged.
GrowthClass asymptotic_class(const BudgetSeq& b);

}  // namespace firegraph
