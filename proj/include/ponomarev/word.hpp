#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ponomarev {

/// Address of a cube in the nested hierarchy: a sequence of cube vertices
/// v_1..v_k, each in {-1,+1}^n. Stored as one bit mask per level, bit i set
/// when coordinate i is +1.
class VertexWord {
 public:
  using Mask = std::uint32_t;
  static constexpr int kMaxDimension = 32;

  VertexWord() = default;
  explicit VertexWord(int n);
  VertexWord(int n, std::vector<Mask> levels);

  /// Word whose levels are the n-bit digits of `index`, level 1 most
  /// significant. Requires n * depth <= 64.
  static VertexWord from_index(int n, int depth, std::uint64_t index);
  /// Parses "++|-+" style strings. Throws ConfigError on malformed input.
  static VertexWord parse(std::string_view text);

  int dimension() const noexcept { return n_; }
  int depth() const noexcept { return static_cast<int>(levels_.size()); }
  bool empty() const noexcept { return levels_.empty(); }

  /// Sign (+1 or -1) of coordinate `coord` of vertex v_level, level in [1, depth].
  int sign(int level, int coord) const;
  Mask mask(int level) const { return levels_.at(level - 1); }
  const std::vector<Mask>& masks() const noexcept { return levels_; }

  void push_back(Mask m);
  VertexWord child(Mask m) const;
  VertexWord prefix(int j) const;
  bool has_prefix(const VertexWord& other) const;

  std::uint64_t index() const;
  std::string to_string() const;

  friend bool operator==(const VertexWord&, const VertexWord&) = default;
  friend auto operator<=>(const VertexWord&, const VertexWord&) = default;

 private:
  int n_ = 0;
  std::vector<Mask> levels_;
};

/// Calls fn(word) for every word of the given depth, in index order.
void for_each_word(int n, int depth,
                   const std::function<void(const VertexWord&)>& fn);

}  // namespace ponomarev

template <>
struct std::hash<ponomarev::VertexWord> {
  std::size_t operator()(const ponomarev::VertexWord& w) const noexcept {
    std::size_t h = std::hash<int>{}(w.dimension());
    for (auto m : w.masks()) h = h * 1000003u ^ std::hash<std::uint32_t>{}(m);
    return h;
  }
};
