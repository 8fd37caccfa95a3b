#pragma once

#include <optional>
#include <vector>

namespace ponomarev {

enum class TauFamily { constant, log, iterated_log, log_power, composed };

/// Slowly varying factor tau of a gauge h(t) = t^n tau(t).
///
/// Families (L(t) = log(shift + 1/t)):
///   constant      tau = value
///   log           tau = L(t)
///   log_power     tau = L(t)^exponent
///   iterated_log  tau = (log o ... o log)(shift + 1/t)^exponent, `iterations` logs
///   composed      tau = product of `factors`
///
/// Every family is clamped below at 1. When `shift` is unset the smallest
/// shift that keeps the family >= 1 without clamping is used (e for one
/// log, e^e for two, and so on).
struct TauSpec {
  TauFamily family = TauFamily::constant;
  double value = 1.0;
  int iterations = 1;
  double exponent = 1.0;
  std::optional<double> shift;
  std::vector<TauSpec> factors;

  static TauSpec constant(double c);
  static TauSpec log(std::optional<double> shift = {});
  static TauSpec log_power(double exponent, std::optional<double> shift = {});
  static TauSpec iterated_log(int iterations, double exponent,
                              std::optional<double> shift = {});
  static TauSpec composed(std::vector<TauSpec> factors);

  /// Throws ConfigError on out-of-range parameters.
  void validate() const;
  double resolved_shift() const;
  /// True when lim_{t->0+} tau(t) = infinity.
  bool unbounded_at_zero() const;
};

struct TauValue {
  double value;
  bool clamped;  ///< the raw family value fell below 1 and was lifted to 1
};

TauValue eval_tau_checked(const TauSpec& tau, double t);
double eval_tau(const TauSpec& tau, double t);

enum class RawFamily {
  power,      ///< t^alpha
  power_log,  ///< t^alpha * log(shift + 1/t)^(-exponent)
  exp_inv,    ///< exp(-1/t)
};

struct RawGauge {
  RawFamily family = RawFamily::power;
  double alpha = 1.0;
  double exponent = 1.0;
  double shift = 2.718281828459045;

  void validate() const;
};

/// A gauge function h with h(0) = 0, continuous and non-decreasing.
/// With `tau` set, h(t) = t^n tau(t); with `raw` set, h is the raw family;
/// with neither, h(t) = t^n.
struct GaugeSpec {
  int n = 2;
  std::optional<TauSpec> tau;
  std::optional<RawGauge> raw;

  void validate() const;
};

double eval_h(const GaugeSpec& spec, double t);

/// Dimensional constant c_n = 2 sqrt(n): Euclidean diameter of a cube of
/// unit half-edge.
double diameter_constant(int n);

/// First crossing t_p in (0,1] of g(t) = t^n tau(p t) - 1 from negative to
/// non-negative. Scans a log grid (256 points per decade over 12 decades)
/// then bisects to full precision. Throws NoRootError when g < 0 on the
/// whole grid, HypothesisViolated when g >= 0 already at 1e-12, and
/// ToleranceError when |g(t_p)| > tol.
double tau_root(const TauSpec& tau, double p, int n, double tol = 1e-12);

/// a_0 = 1, a_k = tau_root(tau, 2^-k, n) for 1 <= k <= depth.
std::vector<double> thm1_sequence(const TauSpec& tau, int n, int depth,
                                  double tol = 1e-12);

/// a_0 = 1 and, for k >= 1, a_k <= a_{k-1}/2 with
/// h(c_n 2^-k a_k) <= safety * 2^(-2nk).
std::vector<double> thm2_sequence(const GaugeSpec& h, int depth,
                                  double safety = 0.5);

}  // namespace ponomarev
