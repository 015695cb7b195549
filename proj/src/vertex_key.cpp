#include "firegraph/vertex_key.hpp"

#include <algorithm>
#include <charconv>

#include "firegraph/error.hpp"

namespace firegraph {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::resource_limit: return "resource_limit";
    case ErrorCode::protection_overlap: return "protection_overlap";
    case ErrorCode::budget_exceeded: return "budget_exceeded";
    case ErrorCode::non_monotone_budget: return "non_monotone_budget";
    case ErrorCode::partition_infeasible: return "partition_infeasible";
    case ErrorCode::hypothesis_violation: return "hypothesis_violation";
    case ErrorCode::scan_cap_exceeded: return "scan_cap_exceeded";
    case ErrorCode::source_failure: return "source_failure";
    case ErrorCode::check_failed: return "check_failed";
    case ErrorCode::not_found: return "not_found";
  }
  return "unknown";
}

VertexKey VertexKey::tuple(std::initializer_list<std::int64_t> coords) {
  VertexKey key;
  key.kind = KeyKind::tuple;
  key.payload.assign(coords.begin(), coords.end());
  return key;
}

VertexKey VertexKey::tuple(std::span<const std::int64_t> coords) {
  VertexKey key;
  key.kind = KeyKind::tuple;
  key.payload.assign(coords.begin(), coords.end());
  return key;
}

VertexKey VertexKey::tree(std::span<const std::int64_t> path) {
  VertexKey key;
  key.kind = KeyKind::tree_path;
  key.payload.assign(path.begin(), path.end());
  return key;
}

VertexKey VertexKey::layered(std::int64_t layer, std::int64_t index) {
  VertexKey key;
  key.kind = KeyKind::layered;
  key.payload = {layer, index};
  return key;
}

VertexKey VertexKey::subexp(std::int64_t level, std::int64_t x) {
  VertexKey key;
  key.kind = KeyKind::subexp;
  key.payload = {level, x};
  return key;
}

std::strong_ordering operator<=>(const VertexKey& a, const VertexKey& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.payload.size() <=> b.payload.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.payload.begin(), a.payload.end(),
                                                b.payload.begin(), b.payload.end());
}

std::size_t VertexKeyHash::operator()(const VertexKey& key) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(key.kind);
  for (std::int64_t v : key.payload) {
    std::uint64_t x = static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    h ^= x;
  }
  h ^= key.payload.size() * 0x94d049bb133111ebULL;
  return static_cast<std::size_t>(h ^ (h >> 31));
}

std::string to_string(const VertexKey& key) {
  std::string out;
  switch (key.kind) {
    case KeyKind::tuple:
      out = "(";
      for (std::size_t i = 0; i < key.payload.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(key.payload[i]);
      }
      out += ')';
      break;
    case KeyKind::tree_path:
      out = "t/";
      for (std::size_t i = 0; i < key.payload.size(); ++i) {
        if (i) out += '/';
        out += std::to_string(key.payload[i]);
      }
      break;
    case KeyKind::layered:
      out = "h:" + std::to_string(key.payload[0]) + ":" + std::to_string(key.payload[1]);
      break;
    case KeyKind::subexp:
      out = "v:" + std::to_string(key.payload[0]) + ":" + std::to_string(key.payload[1]);
      break;
  }
  return out;
}

namespace {

[[noreturn]] void bad_key(std::string_view text) {
  throw Error(ErrorCode::parse_error, "malformed vertex key '" + std::string(text) + "'",
              {std::string(text)});
}

std::vector<std::int64_t> parse_ints(std::string_view body, char sep, std::string_view whole) {
  std::vector<std::int64_t> out;
  if (body.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = body.find(sep, pos);
    std::string_view part = body.substr(pos, next == std::string_view::npos ? std::string_view::npos
                                                                              : next - pos);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) bad_key(whole);
    out.push_back(value);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

}  // namespace

VertexKey parse_key(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') {
    auto coords = parse_ints(text.substr(1, text.size() - 2), ',', text);
    if (coords.empty()) bad_key(text);
    return VertexKey::tuple(std::span<const std::int64_t>(coords));
  }
  if (text.starts_with("t/")) {
    auto path = parse_ints(text.substr(2), '/', text);
    for (auto d : path) {
      if (d < 0) bad_key(text);
    }
    return VertexKey::tree(path);
  }
  if (text.starts_with("h:") || text.starts_with("v:")) {
    auto parts = parse_ints(text.substr(2), ':', text);
    if (parts.size() != 2) bad_key(text);
    return text.front() == 'h' ? VertexKey::layered(parts[0], parts[1])
                               : VertexKey::subexp(parts[0], parts[1]);
  }
  bad_key(text);
}

std::vector<VertexKey> parse_key_list(std::string_view text) {
  std::vector<VertexKey> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(';', pos);
    auto part = trim(text.substr(pos, next == std::string_view::npos ? std::string_view::npos
                                                                       : next - pos));
    if (!part.empty()) out.push_back(parse_key(part));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::vector<VertexKey> sorted(const VertexSet& set) {
  std::vector<VertexKey> out(set.begin(), set.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> to_strings(std::span<const VertexKey> keys) {
  std::vector<std::string> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(to_string(k));
  return out;
}

}  // namespace firegraph
