#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ponomarev/sequence.hpp"
#include "ponomarev/word.hpp"

namespace ponomarev {

using Point = Eigen::VectorXd;

/// Which hierarchy a geometric query refers to: the domain cubes (half-edges
/// r_k, around centers z_v) or the target cubes (rt_k, around zt_v).
enum class Side { domain, target };

/// z_v = sum_{i=1}^{k} (r_{i-1}/2) v_i, or the same with rt on the target side.
Point center(const VertexWord& word, const SequencePack& pack, Side side);

struct CubePair {
  Point center;
  double inner_half_edge;  ///< r_k (Q_v)
  double outer_half_edge;  ///< r_{k-1}/2 (Q'_v)
  Side side;
};

/// Inner and outer cube of a word of depth 1..K.
CubePair cubes(const VertexWord& word, const SequencePack& pack, Side side);

enum class Region { annulus, core };

/// Where a point sits in the hierarchy. An annulus location at depth k means
/// r_k < |x - z_v|_inf <= r_{k-1}/2 for the word's center; a core location
/// means |x - z_v|_inf <= r_K at the maximal depth searched.
struct Location {
  Region region;
  VertexWord word;
  int depth() const { return word.depth(); }
};

/// Child vertex selected by coordinate signs of (x - z). Ties (x_i == z_i)
/// pick -1, the lexicographically smallest vertex.
VertexWord::Mask child_mask(const Point& x, const Point& z);

/// Descends the hierarchy of `side` from the unit cube. Inner cubes are
/// closed, annuli half-open on their inner face. Throws DomainError for x
/// outside [-1,1]^n and DepthError for max_depth outside [0, K].
Location locate(const Point& x, const SequencePack& pack, int max_depth,
                Side side = Side::domain);

/// Closed dyadic cube prod_i [c_i 2^-k, (c_i + 1) 2^-k] with integer corner
/// indices c_i.
struct DyadicCube {
  std::vector<std::uint64_t> corner_index;
  int level = 0;

  std::vector<double> corner() const;
  double size() const;
  /// Lebesgue measure 2^(-n k).
  double measure() const;
  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

/// Finite-depth coding map: coordinate i of the corner is the binary number
/// 0.b_1 b_2 ... b_k with b_j = (1 + sign_i(v_j))/2.
DyadicCube code_z(const VertexWord& word);

/// Inverse of code_z on level-k dyadic cubes. Throws PrecisionError when a
/// corner coordinate is not a grid point of level k in [0,1).
VertexWord dyadic_preimage(std::span<const double> corner, int k);

/// Finite-depth stand-in for the exceptional set of the coding map: true
/// when, in some coordinate, the bits after `level` are all equal, i.e. the
/// word's dyadic cube touches the boundary of its level-`level` ancestor.
bool touches_dyadic_boundary(const VertexWord& word, int level);

/// CSV table of every cube of depth 1..max_depth: depth, word, center
/// coordinates, inner and outer half-edge.
void write_cube_table_csv(std::ostream& out, const SequencePack& pack,
                          int max_depth, Side side);

}  // namespace ponomarev
