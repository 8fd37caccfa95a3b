// Independent reference implementations used by the tests. They share no
// code with the library: extended precision for gauges and roots, plain
// rejection sampling for shell integrals.
#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

/// (log o ... o log)(shift + 1/t)^s, `m` logs, lifted to 1 when below 1.
inline Real iterated_log_tau(Real t, int m, Real s, Real shift) {
  Real v = log(shift + 1 / t);
  for (int i = 1; i < m; ++i) {
    if (v <= 1) return 1;
    v = log(v);
  }
  if (v < 1) return 1;
  return pow(v, s);
}

/// h(t) = t^n max(1, log log(shift + 1/t))^s.
inline double log_log_h(double t, int n, double s, double shift) {
  const Real tt = t;
  return static_cast<double>(pow(tt, n) * iterated_log_tau(tt, 2, s, shift));
}

/// First sign change of g on a log grid over [1e-12, 1] with
/// `per_decade` points per decade, refined by bisection until the bracket
/// is below `tol` relative.
inline double first_crossing(const std::function<Real(Real)>& g, int per_decade,
                             double tol) {
  const int count = 12 * per_decade;
  Real prev_t = Real(1e-12);
  if (g(prev_t) >= 0) return -1;
  for (int i = 1; i <= count; ++i) {
    Real t = pow(Real(10), Real(-12) + Real(12) * i / count);
    if (g(t) >= 0) {
      Real lo = prev_t, hi = t;
      while ((hi - lo) / hi > tol) {
        Real mid = (lo + hi) / 2;
        (g(mid) >= 0 ? hi : lo) = mid;
      }
      return static_cast<double>(hi);
    }
    prev_t = t;
  }
  return -2;
}

struct MonteCarlo {
  double mean;
  double std_error;
};

/// Integral of phi(|x|_inf) over Q(0,R) \ Q(0,r) in dimension n by uniform
/// sampling of the outer cube and rejection of the inner one.
inline MonteCarlo shell_monte_carlo(const std::function<double(double)>& phi,
                                    double r, double R, int n, std::size_t samples,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-R, R);
  double sum = 0, sum_sq = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    double m = 0;
    for (int c = 0; c < n; ++c) m = std::max(m, std::abs(u(rng)));
    const double v = m > r ? phi(m) : 0.0;
    sum += v;
    sum_sq += v * v;
  }
  const double volume = std::pow(2 * R, n);
  const double mean = sum / samples;
  const double var = std::max(0.0, sum_sq / samples - mean * mean);
  return {volume * mean, volume * std::sqrt(var / samples)};
}

}  // namespace oracle
