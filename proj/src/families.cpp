#include "firegraph/families.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <mutex>

#include "firegraph/error.hpp"

namespace firegraph {

namespace {

[[noreturn]] void bad_spec(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::parse_error, "bad family spec '" + std::string(text) + "': " + why);
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    bad_spec(whole, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

void parse_params(std::string_view text, std::string_view whole,
                  std::map<std::string, std::int64_t>& out) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                             : comma - pos);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) bad_spec(whole, "parameter without '='");
    out[std::string(item.substr(0, eq))] = parse_int(item.substr(eq + 1), whole);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
}

struct KindName {
  FamilyKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 10> kind_names{{
    {FamilyKind::lattice, "lattice"},
    {FamilyKind::orthant, "orthant"},
    {FamilyKind::square, "square"},
    {FamilyKind::triangular, "tri"},
    {FamilyKind::hexagonal, "hex"},
    {FamilyKind::strong, "strong"},
    {FamilyKind::tree, "tree"},
    {FamilyKind::hyper37, "hyper37"},
    {FamilyKind::subexp, "subexp"},
    {FamilyKind::power, "power"},
}};

std::string_view kind_name(FamilyKind kind) {
  for (const auto& kn : kind_names) {
    if (kn.kind == kind) return kn.name;
  }
  return "?";
}

// --- integer-lattice style families -------------------------------------

std::vector<VertexKey> offsets_neighbors(const VertexKey& v,
                                         std::span<const std::array<std::int64_t, 2>> offsets) {
  if (v.kind != KeyKind::tuple || v.payload.size() != 2) {
    throw Error(ErrorCode::invalid_argument, "expected a 2D lattice key, got " + to_string(v));
  }
  std::vector<VertexKey> out;
  out.reserve(offsets.size());
  for (const auto& [dx, dy] : offsets) {
    out.push_back(VertexKey::tuple({v.payload[0] + dx, v.payload[1] + dy}));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexKey> lattice_neighbors(const VertexKey& v, std::size_t d, bool orthant) {
  if (v.kind != KeyKind::tuple || v.payload.size() != d) {
    throw Error(ErrorCode::invalid_argument,
                "expected a " + std::to_string(d) + "-tuple key, got " + to_string(v));
  }
  std::vector<VertexKey> out;
  out.reserve(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::int64_t step : {-1, 1}) {
      VertexKey w = v;
      w.payload[i] += step;
      if (orthant && w.payload[i] < 0) continue;
      out.push_back(std::move(w));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- hyper37 -------------------------------------------------------------

class Hyper37Tiling {
 public:
  static Hyper37Tiling& instance() {
    static Hyper37Tiling tiling;
    return tiling;
  }

  std::shared_ptr<const Hyper37Layer> layer(std::int64_t n) {
    if (n < 1) throw Error(ErrorCode::invalid_argument, "hyper37 layers start at 1");
    std::lock_guard lock(mutex_);
    while (static_cast<std::int64_t>(layers_.size()) < n) {
      layers_.push_back(layers_.empty() ? first_layer() : next_layer(*layers_.back()));
    }
    return layers_[static_cast<std::size_t>(n - 1)];
  }

 private:
  static void assign_children(Hyper37Layer& layer) {
    const auto s = static_cast<std::size_t>(layer.size);
    layer.child_first.resize(s);
    layer.child_count.resize(s);
    std::int64_t offset = 0;
    std::vector<std::int64_t> offsets(s);
    for (std::size_t i = 0; i < s; ++i) {
      offsets[i] = offset;
      const std::int64_t exclusive = layer.parents[i].size() == 1 ? 2 : 1;
      layer.child_count[i] = exclusive + 2;
      offset += exclusive + 1;
    }
    layer.next_size = offset;
    for (std::size_t i = 0; i < s; ++i) {
      layer.child_first[i] = (offsets[i] - 1 + offset) % offset;
    }
  }

  static std::shared_ptr<const Hyper37Layer> first_layer() {
    auto layer = std::make_shared<Hyper37Layer>();
    layer->index = 1;
    layer->size = 7;
    layer->a_count = 7;
    layer->b_count = 0;
    layer->parents.assign(7, std::vector<std::int64_t>{0});
    assign_children(*layer);
    return layer;
  }

  static std::shared_ptr<const Hyper37Layer> next_layer(const Hyper37Layer& prev) {
    auto layer = std::make_shared<Hyper37Layer>();
    layer->index = prev.index + 1;
    layer->size = prev.next_size;
    layer->parents.reserve(static_cast<std::size_t>(layer->size));
    for (std::int64_t i = 0; i < prev.size; ++i) {
      const std::int64_t exclusive = prev.parents[static_cast<std::size_t>(i)].size() == 1 ? 2 : 1;
      for (std::int64_t e = 0; e < exclusive; ++e) layer->parents.push_back({i});
      layer->parents.push_back({i, (i + 1) % prev.size});
    }
    for (const auto& p : layer->parents) (p.size() == 1 ? layer->a_count : layer->b_count)++;
    assign_children(*layer);
    return layer;
  }

  std::mutex mutex_;
  std::vector<std::shared_ptr<const Hyper37Layer>> layers_;
};

std::vector<VertexKey> hyper37_neighbors(const VertexKey& v) {
  if (v.kind != KeyKind::layered) {
    throw Error(ErrorCode::invalid_argument, "expected a hyper37 key, got " + to_string(v));
  }
  const std::int64_t n = v.payload[0], i = v.payload[1];
  std::vector<VertexKey> out;
  if (n == 0) {
    if (i != 0) throw Error(ErrorCode::invalid_argument, "no such hyper37 vertex " + to_string(v));
    for (std::int64_t j = 0; j < 7; ++j) out.push_back(VertexKey::layered(1, j));
    return out;
  }
  if (n < 0) throw Error(ErrorCode::invalid_argument, "no such hyper37 vertex " + to_string(v));
  auto layer = Hyper37Tiling::instance().layer(n);
  if (i < 0 || i >= layer->size) {
    throw Error(ErrorCode::invalid_argument, "no such hyper37 vertex " + to_string(v));
  }
  const auto idx = static_cast<std::size_t>(i);
  out.reserve(7);
  out.push_back(VertexKey::layered(n, (i + layer->size - 1) % layer->size));
  out.push_back(VertexKey::layered(n, (i + 1) % layer->size));
  for (std::int64_t p : layer->parents[idx]) out.push_back(VertexKey::layered(n - 1, p));
  for (std::int64_t c = 0; c < layer->child_count[idx]; ++c) {
    out.push_back(VertexKey::layered(n + 1, (layer->child_first[idx] + c) % layer->next_size));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- subexp ----------------------------------------------------------------

std::vector<VertexKey> subexp_neighbors(const VertexKey& v) {
  if (v.kind != KeyKind::subexp) {
    throw Error(ErrorCode::invalid_argument, "expected a subexp key, got " + to_string(v));
  }
  const std::int64_t n = v.payload[0], x = v.payload[1];
  const std::int64_t s = n >= 0 ? level_sequence_subexp(n) : -1;
  if (n < 0 || x < 1 || s >= 62 || x > (std::int64_t{1} << s)) {
    throw Error(ErrorCode::invalid_argument, "no such subexp vertex " + to_string(v));
  }
  std::vector<VertexKey> out;
  for (std::int64_t m : {n - 1, n + 1}) {
    if (m < 0) continue;
    if (level_sequence_subexp(m) == s + 1) {
      out.push_back(VertexKey::subexp(m, 2 * x - 1));
      out.push_back(VertexKey::subexp(m, 2 * x));
    } else {
      out.push_back(VertexKey::subexp(m, (x + 1) / 2));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- tree --------------------------------------------------------------------

std::vector<VertexKey> tree_neighbors(const VertexKey& v, std::int64_t delta) {
  if (v.kind != KeyKind::tree_path) {
    throw Error(ErrorCode::invalid_argument, "expected a tree key, got " + to_string(v));
  }
  const bool root = v.payload.empty();
  for (std::size_t i = 0; i < v.payload.size(); ++i) {
    const std::int64_t limit = i == 0 ? delta : delta - 1;
    if (v.payload[i] < 0 || v.payload[i] >= limit) {
      throw Error(ErrorCode::invalid_argument, "no such tree vertex " + to_string(v));
    }
  }
  std::vector<VertexKey> out;
  if (!root) {
    VertexKey parent = v;
    parent.payload.pop_back();
    out.push_back(std::move(parent));
  }
  const std::int64_t children = root ? delta : delta - 1;
  for (std::int64_t c = 0; c < children; ++c) {
    VertexKey child = v;
    child.payload.push_back(c);
    out.push_back(std::move(child));
  }
  std::sort(out.begin(), out.end());
  return out;
}

constexpr std::array<std::array<std::int64_t, 2>, 4> square_offsets{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
constexpr std::array<std::array<std::int64_t, 2>, 6> tri_offsets{
    {{-1, 0}, {1, 0}, {0, -1}, {0, 1}, {1, 1}, {-1, -1}}};
constexpr std::array<std::array<std::int64_t, 2>, 8> strong_offsets{
    {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};

}  // namespace

std::int64_t level_sequence_subexp(std::int64_t n) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "level index must be nonnegative");
  // largest k with k(k+1) <= n
  std::int64_t k = 0;
  while ((k + 1) * (k + 2) <= n) ++k;
  const std::int64_t t = n - k * (k + 1);
  return std::min(t, 2 * (k + 1) - t);
}

Hyper37Layer hyper37_layer(std::int64_t n) { return *Hyper37Tiling::instance().layer(n); }

FamilySpec FamilySpec::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  FamilySpec spec;
  std::string_view head = text, rest;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    head = text.substr(0, colon);
    rest = text.substr(colon + 1);
  }
  bool found = false;
  for (const auto& kn : kind_names) {
    if (kn.name == head) {
      spec.kind = kn.kind;
      found = true;
    }
  }
  if (!found) bad_spec(text, "unknown family '" + std::string(head) + "'");
  if (spec.kind == FamilyKind::power) {
    auto open = rest.find('(');
    if (open == std::string_view::npos || rest.back() != ')') bad_spec(text, "power needs (<inner>)");
    parse_params(rest.substr(0, open), text, spec.params);
    spec.inner = std::make_shared<const FamilySpec>(
        FamilySpec::parse(rest.substr(open + 1, rest.size() - open - 2)));
  } else {
    parse_params(rest, text, spec.params);
  }
  spec.validate();
  return spec;
}

std::int64_t FamilySpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) {
    throw Error(ErrorCode::invalid_argument,
                "family '" + std::string(kind_name(kind)) + "' needs parameter " + key);
  }
  return it->second;
}

void FamilySpec::validate() const {
  auto expect_only = [&](std::initializer_list<std::string_view> keys) {
    for (const auto& [k, v] : params) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
        throw Error(ErrorCode::invalid_argument, "unexpected parameter '" + k + "' for " +
                                                     std::string(kind_name(kind)));
      }
    }
  };
  switch (kind) {
    case FamilyKind::lattice:
    case FamilyKind::orthant:
      expect_only({"d"});
      if (param("d") < 1 || param("d") > 16) {
        throw Error(ErrorCode::invalid_argument, "lattice dimension must be in 1..16");
      }
      break;
    case FamilyKind::tree:
      expect_only({"delta"});
      if (param("delta") < 2) throw Error(ErrorCode::invalid_argument, "tree needs delta >= 2");
      break;
    case FamilyKind::power:
      expect_only({"k"});
      if (param("k") < 1) throw Error(ErrorCode::invalid_argument, "power needs k >= 1");
      if (!inner) throw Error(ErrorCode::invalid_argument, "power needs an inner family");
      inner->validate();
      break;
    default:
      expect_only({});
  }
}

std::string FamilySpec::to_string() const {
  std::string out(kind_name(kind));
  if (!params.empty()) {
    out += ':';
    bool first = true;
    for (const auto& [k, v] : params) {
      if (!first) out += ',';
      first = false;
      out += k + "=" + std::to_string(v);
    }
  }
  if (kind == FamilyKind::power) out += "(" + inner->to_string() + ")";
  return out;
}

LazyGraph make_graph(const FamilySpec& spec) {
  spec.validate();
  const std::string name = spec.to_string();
  switch (spec.kind) {
    case FamilyKind::lattice:
    case FamilyKind::orthant: {
      const auto d = static_cast<std::size_t>(spec.param("d"));
      const bool orthant = spec.kind == FamilyKind::orthant;
      std::vector<std::int64_t> origin(d, 0);
      return LazyGraph(name, VertexKey::tuple(std::span<const std::int64_t>(origin)),
                       static_cast<std::int64_t>(2 * d),
                       [d, orthant](const VertexKey& v) { return lattice_neighbors(v, d, orthant); });
    }
    case FamilyKind::square:
      return LazyGraph(name, VertexKey::tuple({0, 0}), 4,
                       [](const VertexKey& v) { return offsets_neighbors(v, square_offsets); });
    case FamilyKind::triangular:
      return LazyGraph(name, VertexKey::tuple({0, 0}), 6,
                       [](const VertexKey& v) { return offsets_neighbors(v, tri_offsets); });
    case FamilyKind::strong:
      return LazyGraph(name, VertexKey::tuple({0, 0}), 8,
                       [](const VertexKey& v) { return offsets_neighbors(v, strong_offsets); });
    case FamilyKind::hexagonal:
      return LazyGraph(name, VertexKey::tuple({0, 0}), 3, [](const VertexKey& v) {
        if (v.kind != KeyKind::tuple || v.payload.size() != 2) {
          throw Error(ErrorCode::invalid_argument, "expected a 2D lattice key, got " + to_string(v));
        }
        const std::int64_t x = v.payload[0], y = v.payload[1];
        const std::int64_t vertical = ((x + y) % 2 == 0) ? 1 : -1;
        std::vector<VertexKey> out{VertexKey::tuple({x - 1, y}), VertexKey::tuple({x + 1, y}),
                                   VertexKey::tuple({x, y + vertical})};
        std::sort(out.begin(), out.end());
        return out;
      });
    case FamilyKind::tree: {
      const std::int64_t delta = spec.param("delta");
      return LazyGraph(name, VertexKey::tree({}), delta,
                       [delta](const VertexKey& v) { return tree_neighbors(v, delta); });
    }
    case FamilyKind::hyper37:
      return LazyGraph(name, VertexKey::layered(0, 0), 7, hyper37_neighbors);
    case FamilyKind::subexp:
      return LazyGraph(name, VertexKey::subexp(0, 1), 4, subexp_neighbors);
    case FamilyKind::power: {
      auto graph = power_graph(make_graph(*spec.inner), spec.param("k"));
      return LazyGraph(name, graph.base(), graph.degree_bound(),
                       [graph](const VertexKey& v) { return graph.neighbors(v); });
    }
  }
  throw Error(ErrorCode::invalid_argument, "unhandled family");
}

LazyGraph make_graph(std::string_view spec_text) { return make_graph(FamilySpec::parse(spec_text)); }

}  // namespace firegraph
