#pragma once

#include <span>
#include <string>
#include <vector>

namespace ponomarev {

/// The parameter sequences of one construction, truncated at depth K:
/// a_k, b_k with derived half-edges r_k = 2^-k a_k (domain),
/// rt_k = 2^-k b_k (target) and radial coefficients alpha_k, beta_k solving
///
///   alpha_k r_k       + beta_k = rt_k
///   alpha_k r_{k-1}/2 + beta_k = rt_{k-1}/2.
///
/// The system is solved in difference form, (b_{k-1} - b_k)/(a_{k-1} - a_k),
/// with the b-differences taken exactly for standard packs, so a standard
/// pack yields alpha_k = 1/2 and beta_k = 2^(-k-1) to rounding.
class SequencePack {
 public:
  /// b_k = (1 + a_k)/2.
  static SequencePack standard(int n, std::vector<double> a);
  static SequencePack custom(int n, std::vector<double> a, std::vector<double> b);
  /// Standard pack with a_k = 1/(k+1).
  static SequencePack reciprocal(int n, int depth);
  /// a_k = b_k = 1/(k+1); the resulting map is the identity.
  static SequencePack identity(int n, int depth);

  int dimension() const noexcept { return n_; }
  int depth() const noexcept { return static_cast<int>(a_.size()) - 1; }
  bool is_standard() const noexcept { return standard_; }

  double a(int k) const { return a_.at(k); }
  double b(int k) const { return b_.at(k); }
  double r(int k) const { return r_.at(k); }
  double rt(int k) const { return rt_.at(k); }
  /// Defined for 1 <= k <= depth.
  double alpha(int k) const { return alpha_.at(k); }
  double beta(int k) const { return beta_.at(k); }

  std::span<const double> a_values() const noexcept { return a_; }
  std::span<const double> b_values() const noexcept { return b_; }

  /// Same pack truncated at depth k.
  SequencePack prefix(int k) const;

  /// Copy with alpha_k shifted by delta, breaking the gluing equations.
  /// Used for fault injection; the result fails validate().
  SequencePack with_alpha_offset(int k, double delta) const;

  struct Residual {
    double inner_ulps;  ///< |alpha r_k + beta - rt_k| in ulps of rt_k
    double outer_ulps;  ///< |alpha r_{k-1}/2 + beta - rt_{k-1}/2| in ulps
  };
  Residual gluing_residual(int k) const;
  double max_gluing_residual_ulps() const;

  /// Empty when the pack satisfies every invariant; otherwise a description
  /// of the first violation.
  std::string first_violation(double max_gluing_ulps = 4.0) const;
  /// Throws ConstructionError on the first violation.
  void validate(double max_gluing_ulps = 4.0) const;

 private:
  SequencePack(int n, std::vector<double> a, std::vector<double> b,
               bool standard);

  int n_ = 0;
  bool standard_ = false;
  std::vector<double> a_, b_, r_, rt_, alpha_, beta_;
};

/// Distance |x - y| measured in units of ulp(|y|).
double ulp_distance(double x, double y);

}  // namespace ponomarev
