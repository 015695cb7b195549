#pragma once

#include <boost/container/small_vector.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace firegraph {

/// Coordinate system of a key. Families sharing a vertex set share a kind,
/// so e.g. the square grid, strong grid and power graphs of the square grid
/// all use integer tuples and identity maps between them are free.
enum class KeyKind : std::uint8_t {
  tuple,      // integer lattice coordinates: "(x,y,...)"
  tree_path,  // root path digits: "t/", "t/0/2"
  layered,    // (layer, index within the layer cycle): "h:2:5"
  subexp,     // (level n, x in 1..2^{s_n}): "v:4:2"
};

struct VertexKey {
  using Payload = boost::container::small_vector<std::int64_t, 4>;

  KeyKind kind = KeyKind::tuple;
  Payload payload;

  static VertexKey tuple(std::initializer_list<std::int64_t> coords);
  static VertexKey tuple(std::span<const std::int64_t> coords);
  static VertexKey tree(std::span<const std::int64_t> path);
  static VertexKey layered(std::int64_t layer, std::int64_t index);
  static VertexKey subexp(std::int64_t level, std::int64_t x);

  friend bool operator==(const VertexKey&, const VertexKey&) = default;

  // shortlex inside a kind: shorter payloads first, then lexicographic
  friend std::strong_ordering operator<=>(const VertexKey& a, const VertexKey& b);
};

struct VertexKeyHash {
  std::size_t operator()(const VertexKey& key) const noexcept;
};

using VertexSet = std::unordered_set<VertexKey, VertexKeyHash>;

std::string to_string(const VertexKey& key);

/// Inverse of to_string. Throws Error(parse_error) on malformed text.
VertexKey parse_key(std::string_view text);

/// Parses a ';'-separated key list.
std::vector<VertexKey> parse_key_list(std::string_view text);

std::vector<VertexKey> sorted(const VertexSet& set);
std::vector<std::string> to_strings(std::span<const VertexKey> keys);

}  // namespace firegraph
