#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "firegraph/lazy_graph.hpp"

namespace firegraph {

enum class FamilyKind {
  lattice,     // L^d, params: d
  orthant,     // L^d_+, params: d
  square,      // Z^2, 4 neighbors
  triangular,  // Z^2 plus the (1,1) diagonal, 6 neighbors
  hexagonal,   // honeycomb on Z^2 (brick wall), 3 neighbors
  strong,      // Z^2 with king moves, 8 neighbors
  tree,        // delta-regular tree, params: delta
  hyper37,     // order-7 triangular tiling of the hyperbolic plane
  subexp,      // the 2^{s_n} level graph with one-firefighter containment
  power,       // G(k) of an inner family, params: k
};

/// Parsed form of the family grammar used on the command line:
///   lattice:d=3  orthant:d=4  square  tri  hex  strong  tree:delta=3
///   hyper37  subexp  power:k=2(<inner>)
struct FamilySpec {
  FamilyKind kind = FamilyKind::square;
  std::map<std::string, std::int64_t> params;
  std::shared_ptr<const FamilySpec> inner;

  static FamilySpec parse(std::string_view text);
  std::string to_string() const;
  /// Throws Error(invalid_argument) when parameters are out of range.
  void validate() const;

  std::int64_t param(const std::string& key) const;
};

LazyGraph make_graph(const FamilySpec& spec);
LazyGraph make_graph(std::string_view spec_text);

/// Exponent of the level sizes of the subexp graph: level n holds 2^{s_n}
/// vertices, s vanishes exactly at n = k(k+1) and ramps by one in between.
std::int64_t level_sequence_subexp(std::int64_t n);

/// Layer n >= 1 of the hyper37 generator. Layer n is a cycle; a vertex with
/// one parent in layer n-1 is a-type, with two parents b-type. a-type
/// vertices get two exclusive children, b-type one, and consecutive vertices
/// share one child, so a_{n+1} = 2 a_n + b_n and b_{n+1} = s_n.
struct Hyper37Layer {
  std::int64_t index = 0;
  std::int64_t size = 0;
  std::int64_t a_count = 0;
  std::int64_t b_count = 0;
  std::int64_t next_size = 0;
  /// parents[i]: indices in layer n-1 (one or two; layer 1 points at the root)
  std::vector<std::vector<std::int64_t>> parents;
  /// children of vertex i: the cyclic interval of layer n+1 starting at
  /// child_first[i] of length child_count[i] (4 for a-type, 3 for b-type)
  std::vector<std::int64_t> child_first;
  std::vector<std::int64_t> child_count;
};

Hyper37Layer hyper37_layer(std::int64_t n);

}  // namespace firegraph
