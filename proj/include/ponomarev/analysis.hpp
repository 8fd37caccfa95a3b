#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ponomarev/cantor.hpp"
#include "ponomarev/gauge.hpp"
#include "ponomarev/mapping.hpp"
#include "ponomarev/sequence.hpp"

namespace ponomarev {

// --- Lebesgue measure of the level sets --------------------------------

/// Measure of the union of the 2^(nk) depth-k inner cubes:
/// 2^(nk) (2 r_k)^n = 2^n a_k^n on the domain side, 2^n b_k^n on the target.
double lebesgue_level(const SequencePack& pack, int k, Side side);

/// Measure of one annulus Q'_v \ Q_v at depth k >= 1.
double annulus_measure(const SequencePack& pack, int k, Side side = Side::domain);

/// Largest max-of-partials |Df| on a depth-k annulus: alpha_k + beta_k/r_k.
double annulus_gradient_bound(const SequencePack& pack, int k);

// --- Hausdorff cover sums ------------------------------------------------

struct CoverReport {
  int depth = 0;
  double count = 0;     ///< 2^(nk)
  double per_cube = 0;  ///< h(c_n r_k)
  double total = 0;     ///< count * per_cube, exact
  double ratio_to_one = 0;
};

/// Upper cover sum of the depth-k inner cubes with Euclidean diameters
/// c_n r_k, c_n = 2 sqrt(n).
CoverReport hausdorff_upper_sum(const GaugeSpec& h, const SequencePack& pack,
                                int k);

struct Ball {
  VertexWord center_word;  ///< the ball is centered at z_{center_word}
  double radius;
};

struct BallProbe {
  Ball ball;
  double gauge_value = 0;       ///< h(diam B) = h(2 radius)
  std::uint64_t contained = 0;  ///< depth-l inner cubes inside the ball
  double dominated_sum = 0;     ///< contained * h(c_n r_l)
  int minimal_depth = -1;       ///< least m with some Q_u, u in V^m, inside the ball
  std::uint64_t intersecting = 0;  ///< #{u in V^m : Q_u meets the ball}
};

struct LowerProbeReport {
  int depth = 0;  ///< reference depth l
  std::vector<BallProbe> balls;
  double cover_sum = 0;            ///< sum_j h(diam B_j)
  double reference_upper_sum = 0;  ///< upper sum at depth l
  double ratio = 0;                ///< cover_sum / reference_upper_sum
  std::uint64_t max_intersecting = 0;
};

/// Lower-bound probe: evaluates the ball cover against the depth-l cubes.
/// Every depth-l inner cube must lie inside some ball (open cube in open
/// ball), otherwise CoverageError. Requires n * l <= 30.
LowerProbeReport hausdorff_lower_probe(const GaugeSpec& h,
                                       const SequencePack& pack,
                                       std::span<const Ball> cover, int l);

/// One ball circumscribing each depth-m inner cube (radius sqrt(n) r_m).
std::vector<Ball> canonical_cover(const SequencePack& pack, int m);

/// One ball per depth-m word, centered at the center of a random depth
/// `point_depth` descendant (an approximation of a point of C_A), with
/// radius c_n r_m (1 + u), u uniform in [0, spread). Deterministic in `seed`.
std::vector<Ball> random_cover(const SequencePack& pack, int m, int point_depth,
                               double spread, std::uint64_t seed);

// --- Shell integrals -------------------------------------------------------

/// Radial integrand phi(t) of a sup-norm shell integral.
struct RadialIntegrand {
  enum class Kind { constant, inverse_power, radial_gradient };
  Kind kind = Kind::constant;
  double c = 1.0;                       ///< constant value
  double q = 0.0;                       ///< phi = t^-q
  double alpha = 0, beta = 0, p = 1.0;  ///< phi = (alpha + beta/t)^p

  static RadialIntegrand constant(double c);
  static RadialIntegrand inverse_power(double q);
  static RadialIntegrand radial_gradient(double alpha, double beta, double p);

  double operator()(double t) const;
  bool has_closed_form() const;
};

enum class ShellMethod { automatic, quadrature, closed_form };

/// Integral of phi(|x|_inf) over Q(0,R) \ Q(0,r):
///   n 2^n int_r^R phi(t) t^(n-1) dt.
/// `automatic` uses the closed form for constants, inverse powers and
/// integer-exponent gradients, adaptive Gauss-Kronrod otherwise. Throws
/// ToleranceError when quadrature misses rel_tol.
double shell_integral(const RadialIntegrand& phi, double r, double R, int n,
                      ShellMethod method = ShellMethod::automatic,
                      double rel_tol = 1e-10);

// --- Norms -----------------------------------------------------------------

/// Log-spaced grid of `count` points from lo to hi inclusive.
std::vector<double> log_spaced_grid(double lo, double hi, int count);
/// Default grand-norm grid: 64 log-spaced points in [1e-4, n-1].
std::vector<double> default_eps_grid(int n);

struct NormReport {
  std::vector<double> eps;
  std::vector<double> values;  ///< eps * int |Df_K|^(n-eps)
  std::vector<double> bounds;  ///< bound_constant (a_0^eps - a_K^eps) + eps 2^n a_K^eps
  double sup = 0;
  std::string convention = "max_partials";
  int depth = 0;
  double bound_constant = 0;  ///< n 2^n
  /// partial_sums[i][k-1]: eps_i times the annulus terms up to depth k.
  std::vector<std::vector<double>> partial_sums;
};

/// Grand-Sobolev probe for maps built from a standard pack. Uses the
/// max-of-partials convention |Df| = alpha_k + beta_k/t on annuli and adds
/// the depth-K core term, so values are exact for f_K.
NormReport grand_norm_report(const PonomarevMap& map,
                             std::span<const double> eps_grid);

struct SobolevReport {
  double p = 0;
  std::vector<double> annulus_terms;  ///< 2^(nk) int_{annulus_k} |Df|^p
  std::vector<double> partial_sums;   ///< cumulative annulus terms
  double core_term = 0;               ///< 2^(nK) (2 r_K)^n (b_K/a_K)^p
  double total = 0;                   ///< int |Df_K|^p over the cube
};

SobolevReport sobolev_norm(const PonomarevMap& map, double p);

// --- Coding map ------------------------------------------------------------

struct PushforwardEntry {
  VertexWord word;
  DyadicCube cube;
  double ratio;  ///< descendant share of the depth-k upper sum
  bool exact;    ///< ratio == cube.measure() bit for bit
};

struct PushforwardReport {
  int k = 0, j = 0;
  std::vector<PushforwardEntry> entries;
  bool all_exact = true;
};

/// For each depth-j word u, the share of the depth-k upper sum carried by
/// the descendants of u, compared with the Lebesgue measure 2^(-jn) of the
/// dyadic cube code_z(u). Requires n * k <= 24.
PushforwardReport pushforward_check(const SequencePack& pack,
                                    const GaugeSpec& h, int k, int j);

/// Counts sampled depth-k words v for which the target word of f(z_v)
/// differs from v, i.e. where coded target != coded domain.
std::size_t coding_mismatches(const PonomarevMap& map, int k,
                              std::size_t samples, std::uint64_t seed);

}  // namespace ponomarev
