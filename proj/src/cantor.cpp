#include "ponomarev/cantor.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "ponomarev/errors.hpp"

namespace ponomarev {

namespace {

double half_edge(const SequencePack& pack, Side side, int k) {
  return side == Side::domain ? pack.r(k) : pack.rt(k);
}

void check_depth(const SequencePack& pack, int k) {
  if (k > pack.depth())
    throw DepthError("word depth " + std::to_string(k) +
                     " exceeds pack depth " + std::to_string(pack.depth()));
}

}  // namespace

Point center(const VertexWord& word, const SequencePack& pack, Side side) {
  if (word.dimension() != pack.dimension())
    throw DomainError("center: word and pack dimensions differ");
  check_depth(pack, word.depth());
  Point z = Point::Zero(pack.dimension());
  for (int i = 1; i <= word.depth(); ++i) {
    const double step = 0.5 * half_edge(pack, side, i - 1);
    for (int c = 0; c < pack.dimension(); ++c) z[c] += step * word.sign(i, c);
  }
  return z;
}

CubePair cubes(const VertexWord& word, const SequencePack& pack, Side side) {
  const int k = word.depth();
  if (k < 1) throw DepthError("cubes: word depth must be >= 1");
  return {center(word, pack, side), half_edge(pack, side, k),
          0.5 * half_edge(pack, side, k - 1), side};
}

VertexWord::Mask child_mask(const Point& x, const Point& z) {
  VertexWord::Mask m = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] > z[i]) m |= VertexWord::Mask{1} << i;
  return m;
}

Location locate(const Point& x, const SequencePack& pack, int max_depth,
                Side side) {
  const int n = pack.dimension();
  if (x.size() != n) throw DomainError("locate: point has wrong dimension");
  if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1.0)
    throw DomainError("locate: point outside [-1,1]^n");
  if (max_depth < 0 || max_depth > pack.depth())
    throw DepthError("locate: max_depth out of range");

  VertexWord word(n);
  Point z = Point::Zero(n);
  for (int k = 1; k <= max_depth; ++k) {
    const auto m = child_mask(x, z);
    const double step = 0.5 * half_edge(pack, side, k - 1);
    for (int c = 0; c < n; ++c) z[c] += (m >> c) & 1u ? step : -step;
    word.push_back(m);
    if ((x - z).cwiseAbs().maxCoeff() > half_edge(pack, side, k))
      return {Region::annulus, std::move(word)};
  }
  return {Region::core, std::move(word)};
}

std::vector<double> DyadicCube::corner() const {
  std::vector<double> c(corner_index.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = std::ldexp(static_cast<double>(corner_index[i]), -level);
  return c;
}

double DyadicCube::size() const { return std::ldexp(1.0, -level); }

double DyadicCube::measure() const {
  return std::ldexp(1.0, -level * static_cast<int>(corner_index.size()));
}

DyadicCube code_z(const VertexWord& word) {
  if (word.depth() > 63) throw DepthError("code_z: depth above 63");
  DyadicCube cube;
  cube.level = word.depth();
  cube.corner_index.assign(word.dimension(), 0);
  for (int c = 0; c < word.dimension(); ++c)
    for (int j = 1; j <= word.depth(); ++j)
      cube.corner_index[c] =
          (cube.corner_index[c] << 1) | (word.sign(j, c) > 0 ? 1u : 0u);
  return cube;
}

VertexWord dyadic_preimage(std::span<const double> corner, int k) {
  if (corner.empty()) throw PrecisionError("dyadic_preimage: empty corner");
  if (k < 0 || k > 53) throw PrecisionError("dyadic_preimage: level out of range");
  const int n = static_cast<int>(corner.size());
  std::vector<std::uint64_t> idx(n);
  for (int c = 0; c < n; ++c) {
    double scaled = std::ldexp(corner[c], k);
    if (!(corner[c] >= 0.0 && corner[c] < 1.0) || scaled != std::floor(scaled))
      throw PrecisionError("dyadic_preimage: coordinate " + std::to_string(c) +
                           " is not a level-" + std::to_string(k) +
                           " grid point in [0,1)");
    idx[c] = static_cast<std::uint64_t>(scaled);
  }
  VertexWord word(n);
  for (int j = 1; j <= k; ++j) {
    VertexWord::Mask m = 0;
    for (int c = 0; c < n; ++c)
      if ((idx[c] >> (k - j)) & 1u) m |= VertexWord::Mask{1} << c;
    word.push_back(m);
  }
  return word;
}

bool touches_dyadic_boundary(const VertexWord& word, int level) {
  if (level < 0 || level >= word.depth()) return false;
  for (int c = 0; c < word.dimension(); ++c) {
    const int first = word.sign(level + 1, c);
    bool constant = true;
    for (int j = level + 2; j <= word.depth() && constant; ++j)
      constant = word.sign(j, c) == first;
    if (constant) return true;
  }
  return false;
}

void write_cube_table_csv(std::ostream& out, const SequencePack& pack,
                          int max_depth, Side side) {
  check_depth(pack, max_depth);
  const int n = pack.dimension();
  out << "depth,word";
  for (int c = 0; c < n; ++c) out << ",z" << c + 1;
  out << ",inner_half_edge,outer_half_edge\n";
  out.precision(17);
  for (int k = 1; k <= max_depth; ++k) {
    for_each_word(n, k, [&](const VertexWord& w) {
      auto cp = cubes(w, pack, side);
      out << k << ',' << w.to_string();
      for (int c = 0; c < n; ++c) out << ',' << cp.center[c];
      out << ',' << cp.inner_half_edge << ',' << cp.outer_half_edge << '\n';
    });
  }
}

}  // namespace ponomarev
