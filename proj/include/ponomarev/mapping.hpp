#pragma once

#include <Eigen/Core>
#include <string>

#include "ponomarev/cantor.hpp"
#include "ponomarev/sequence.hpp"

namespace ponomarev {

struct Derivative {
  Eigen::MatrixXd matrix;
  Region region;
  int depth;
  /// Coordinate attaining |x - z_v|_inf on an annulus; -1 on a core.
  int active_coordinate;
};

struct Evaluation {
  Point image;
  Location location;
};

/// Depth-K truncation f_K of the nested-cube homeomorphism of [-1,1]^n.
///
/// On the annulus Q'_v \ Q_v of a depth-k word the map is radial in the sup
/// norm about z_v,
///   f(x) = zt_v + (alpha_k m + beta_k) (x - z_v)/m,   m = |x - z_v|_inf,
/// and on the deepest inner cubes it is the homothety
///   f(x) = zt_v + (rt_K / r_K)(x - z_v).
/// Outside the cores f_K agrees with the limit map; on a core it is within
/// truncation_error() = 2 sqrt(n) rt_K of it. Immutable and safe to share
/// between threads.
class PonomarevMap {
 public:
  /// Throws ConstructionError if the pack violates an invariant.
  static PonomarevMap build(SequencePack pack, std::string provenance = "custom");

  int dimension() const noexcept { return pack_.dimension(); }
  int depth() const noexcept { return pack_.depth(); }
  const SequencePack& pack() const noexcept { return pack_; }
  const std::string& provenance() const noexcept { return provenance_; }
  double truncation_error() const noexcept { return truncation_error_; }

  Point eval(const Point& x) const;
  Evaluation eval_detailed(const Point& x) const;
  /// Inverse of eval, by the same descent on the target hierarchy.
  Point eval_inverse(const Point& y) const;
  Evaluation eval_inverse_detailed(const Point& y) const;

  /// Throws RidgeSetError when the sup-norm argmax is not unique (relative
  /// gap below 1e-12).
  Derivative derivative(const Point& x) const;
  /// alpha_k (alpha_k + beta_k/m)^(n-1) on annuli, (b_K/a_K)^n on cores.
  double jacobian_det(const Point& x) const;
  /// Max-of-partials |Df|: alpha_k + beta_k/m on annuli, b_K/a_K on cores.
  double gradient_magnitude(const Point& x) const;

  /// Radial branch of a word of depth k evaluated at x (no region check).
  Point annulus_image(const VertexWord& word, const Point& x) const;
  /// Homothety branch of a word of depth k evaluated at x (no region check).
  Point core_image(const VertexWord& word, const Point& x) const;

  PonomarevMap truncated(int depth) const;

 private:
  PonomarevMap(SequencePack pack, std::string provenance);

  struct Descent {
    Location location;
    Point z;   // domain center of location.word
    Point zt;  // target center of location.word
  };
  Descent descend(const Point& p, Side side) const;

  SequencePack pack_;
  std::string provenance_;
  double truncation_error_;
};

}  // namespace ponomarev
