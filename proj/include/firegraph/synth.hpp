#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "firegraph/game.hpp"
#include "firegraph/growth.hpp"

namespace firegraph {

/// A synthesized strategy together with the fire it is meant for.
struct SynthResult {
  Strategy strategy;
  std::vector<VertexKey> x0;
  /// Radius of the protected sphere (sphere methods) or of the cut level.
  std::int64_t sphere_radius = 0;
  std::vector<VertexKey> protected_sphere;
  Json info;
};

struct SpherePolyOptions {
  std::int64_t scan_cap = 10'000;  // largest r - m scanned
};

/// Protect S_r for the first r > m with s_r <= (d-1)(dc+1) p_{r-m,d-1},
/// filling W_k in key order under f_k = (d-1)(dc+1) k^{d-2}. X_0 = B(g_0, m).
/// info.growth_bound reports whether beta_n <= c n^d held over 1..r.
SynthResult synth_sphere_poly(const LazyGraph& g, std::int64_t d, std::int64_t c, std::int64_t m,
                              const SpherePolyOptions& options = {});

/// X_0 = B(g_0, n). Checks that beta'' is nonnegative and nondecreasing from
/// index 1, picks the least m > n with m >= 2n and
/// sum_{k=1..m-n} beta''(2k) >= beta'(n), and protects S_m in key order
/// under f_k = 3 beta''(2k).
SynthResult synth_second_difference(const LazyGraph& g, std::int64_t n,
                                    std::int64_t scan_cap = 10'000);

/// Subexp family only: protect v_{m,1} on turn 1 where m = k(k+1) is the
/// first one-vertex level with m >= (highest level in X_0) + r + 1.
SynthResult synth_cut_vertex(const LazyGraph& g, std::span<const VertexKey> x0, std::int64_t r);

struct OracleOptions {
  std::int64_t spread_radius = 1;
  std::size_t node_cap = 2'000'000;
  /// Only protect free vertices within this distance of the fire. Makes the
  /// search incomplete: a failure is then reported as inconclusive.
  std::optional<std::int64_t> candidate_radius;
};

struct OracleResult {
  enum class Verdict { containable, boundary_reached, inconclusive };
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::vector<VertexKey>> witness;  // schedule W_1..W_N when containable
  std::int64_t burned = 0;
  std::int64_t turns = 0;
  std::size_t nodes = 0;
  std::size_t ball_size = 0;
  bool exhaustive = true;
  std::string note;
};

std::string to_string(OracleResult::Verdict verdict);

/// Exact search of the game on B(X_0, R) with a constant budget f. The fire
/// loses for the protector as soon as it burns a vertex at distance R from
/// X_0. Among winning schedules the one with the fewest burned vertices
/// (then fewest turns, then first in key order) is returned.
OracleResult minimax_oracle(const LazyGraph& g, std::span<const VertexKey> x0, std::int64_t f,
                            std::int64_t truncation_radius, const OracleOptions& options = {});

}  // namespace firegraph
