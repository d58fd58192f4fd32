#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <string_view>
#include <tuple>

namespace batemanlab {

/// Symbolic generator tags. Every tag has exactly one adjoint partner.
enum class Tag : std::uint8_t {
  x1, x2, p1, p2,          // normal-mode phase space (self-adjoint)
  a1, a2, a1d, a2d,        // bosons and their adjoints
  b1, b2, b1d, b2d,        // overdamped partners of a_k
  A1, A2, A1d, A2d,        // pseudo-bosonic lowering operators
  B1, B2, B1d, B2d,        // pseudo-bosonic raising operators
  x, y, px, py,            // Bateman coordinates (self-adjoint)
};

inline constexpr std::size_t tag_count = 24;

enum class Kind : std::uint8_t { position, momentum, creation_like, annihilation_like };

struct GeneratorInfo {
  Tag tag;
  std::string_view name;
  int mode;
  Kind kind;
  Tag adjoint;
};

namespace detail {

inline constexpr std::array<GeneratorInfo, tag_count> generator_table{{
    {Tag::x1, "x1", 1, Kind::position, Tag::x1},
    {Tag::x2, "x2", 2, Kind::position, Tag::x2},
    {Tag::p1, "p1", 1, Kind::momentum, Tag::p1},
    {Tag::p2, "p2", 2, Kind::momentum, Tag::p2},
    {Tag::a1, "a1", 1, Kind::annihilation_like, Tag::a1d},
    {Tag::a2, "a2", 2, Kind::annihilation_like, Tag::a2d},
    {Tag::a1d, "a1d", 1, Kind::creation_like, Tag::a1},
    {Tag::a2d, "a2d", 2, Kind::creation_like, Tag::a2},
    {Tag::b1, "b1", 1, Kind::creation_like, Tag::b1d},
    {Tag::b2, "b2", 2, Kind::creation_like, Tag::b2d},
    {Tag::b1d, "b1d", 1, Kind::annihilation_like, Tag::b1},
    {Tag::b2d, "b2d", 2, Kind::annihilation_like, Tag::b2},
    {Tag::A1, "A1", 1, Kind::annihilation_like, Tag::A1d},
    {Tag::A2, "A2", 2, Kind::annihilation_like, Tag::A2d},
    {Tag::A1d, "A1d", 1, Kind::creation_like, Tag::A1},
    {Tag::A2d, "A2d", 2, Kind::creation_like, Tag::A2},
    {Tag::B1, "B1", 1, Kind::creation_like, Tag::B1d},
    {Tag::B2, "B2", 2, Kind::creation_like, Tag::B2d},
    {Tag::B1d, "B1d", 1, Kind::annihilation_like, Tag::B1},
    {Tag::B2d, "B2d", 2, Kind::annihilation_like, Tag::B2},
    {Tag::x, "x", 1, Kind::position, Tag::x},
    {Tag::y, "y", 2, Kind::position, Tag::y},
    {Tag::px, "px", 1, Kind::momentum, Tag::px},
    {Tag::py, "py", 2, Kind::momentum, Tag::py},
}};

constexpr int kind_rank(Kind k) {
  switch (k) {
    case Kind::position: return 0;
    case Kind::momentum: return 1;
    case Kind::creation_like: return 2;
    case Kind::annihilation_like: return 3;
  }
  return 4;
}

constexpr bool name_less(std::string_view a, std::string_view b) { return a < b; }

// Position of every tag in the normal-form order: kind, then mode, then name.
constexpr std::array<int, tag_count> compute_ranks() {
  std::array<int, tag_count> ranks{};
  for (std::size_t i = 0; i < tag_count; ++i) {
    int r = 0;
    const auto& gi = generator_table[i];
    for (std::size_t j = 0; j < tag_count; ++j) {
      const auto& gj = generator_table[j];
      const auto kj = kind_rank(gj.kind), ki = kind_rank(gi.kind);
      if (kj < ki || (kj == ki && gj.mode < gi.mode) ||
          (kj == ki && gj.mode == gi.mode && name_less(gj.name, gi.name))) {
        ++r;
      }
    }
    ranks[i] = r;
  }
  return ranks;
}

inline constexpr std::array<int, tag_count> tag_ranks = compute_ranks();

}  // namespace detail

constexpr std::size_t index(Tag t) { return static_cast<std::size_t>(t); }
constexpr const GeneratorInfo& info(Tag t) { return detail::generator_table[index(t)]; }
constexpr Tag adjoint(Tag t) { return info(t).adjoint; }
constexpr std::string_view name(Tag t) { return info(t).name; }
constexpr int mode(Tag t) { return info(t).mode; }
constexpr Kind kind(Tag t) { return info(t).kind; }

/// Rank in the normal-form order (creation-like before annihilation-like,
/// position before momentum, mode 1 before mode 2, ties by name).
constexpr int order_rank(Tag t) { return detail::tag_ranks[index(t)]; }

inline std::optional<Tag> tag_from_name(std::string_view s) {
  for (const auto& g : detail::generator_table) {
    if (g.name == s) return g.tag;
  }
  return std::nullopt;
}

using TagSet = std::bitset<tag_count>;

inline TagSet make_tag_set(std::initializer_list<Tag> tags) {
  TagSet s;
  for (Tag t : tags) s.set(index(t));
  return s;
}

}  // namespace batemanlab
