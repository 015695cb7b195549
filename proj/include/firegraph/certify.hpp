#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "firegraph/game.hpp"
#include "firegraph/growth.hpp"

namespace firegraph {

/// Fixed adversary for smoke tests: each turn protects the f_k free vertices
/// next to the fire with the most free, unburned neighbors (ties by key).
struct GreedyReport {
  std::int64_t turns = 0;
  bool still_spreading = true;
  std::size_t burned = 0;
  std::size_t protected_total = 0;
  std::vector<std::vector<VertexKey>> schedule;
};

GreedyReport greedy_baseline(const LazyGraph& g, std::span<const VertexKey> x0, const BudgetSeq& f,
                             std::int64_t turns);

struct CertifyOptions {
  std::int64_t level_from = 0;
  std::int64_t level_to = 5;
  /// Turns of greedy play recorded in the bookkeeping section.
  std::int64_t smoke_turns = 20;
};

/// Sphere expansion |A*| >= lambda |A| on the checked levels plus an exact
/// tail bound on sum f_k / lambda^k and the least r >= 1 with s_r above it.
struct ImpossibilityCertificate {
  std::string family;
  VertexKey root;
  Rational lambda;
  std::int64_t level_from = 0, level_to = 0;
  std::vector<ExpansionReport> levels;
  BudgetSeq budget;
  std::optional<Rational> tail_bound;
  std::optional<std::int64_t> radius;
  std::int64_t s_r = 0;
  bool issued = false;
  std::string refusal;
  std::vector<std::string> machine_checked;
  std::vector<std::string> structural_premises;
  GraphAudit graph_audit;
  Json bookkeeping;  // greedy play on B(g_0, r): t_k, t*_k, p_k and the rearranged-sum check
  CertifyOptions options;

  Json to_json() const;
};

ImpossibilityCertificate certify_expansion_impossible(std::string_view family, const Rational& lambda,
                                                      const BudgetSeq& budget,
                                                      const CertifyOptions& options = {});

enum class Conclusion { no_obstruction, impossible, unknown };
std::string to_string(Conclusion conclusion);

struct DivergenceVerdict {
  std::string family;
  BudgetSeq budget;
  std::int64_t horizon = 0;
  std::vector<ExpansionReport> homogeneity;
  bool homogeneous_on_range = false;
  /// Name of the argument giving homogeneity on every level, when one exists.
  std::optional<std::string> structural_homogeneity;
  RatioSeries series;
  Conclusion conclusion = Conclusion::unknown;
  std::string reason;

  Json to_json() const;
};

/// Throws non_monotone_budget when f decreases.
DivergenceVerdict certify_divergence_required(std::string_view family, const BudgetSeq& budget,
                                              std::int64_t horizon);

enum class LatticeClass { containable, impossible };
std::string to_string(LatticeClass cls);

struct LatticeVerdict {
  std::int64_t d = 0, q = 0;
  bool evidence = false;
  LatticeClass cls = LatticeClass::containable;
  std::string reason;
  Json witness;                              // synthesized strategy replay, when requested
  std::optional<DivergenceVerdict> certificate;  // orthant divergence check, when requested

  Json to_json() const;
};

/// q >= d-2: containable; q <= d-3: impossible.
LatticeVerdict classify_lattice(std::int64_t d, std::int64_t q, bool with_evidence = false);

/// Regenerates a certificate document from its inputs. Returns the
/// regenerated document; throws check_failed when it differs.
Json check_certificate(const Json& document);

}  // namespace firegraph
