#include "ponomarev/gauge.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ponomarev/errors.hpp"

namespace ponomarev {

namespace {

// log(shift + 1/t) without overflowing 1/t for tiny t.
double log_shift_inverse(double shift, double t) {
  if (shift * t >= 1.0) return std::log(shift + 1.0 / t);
  return std::log1p(shift * t) - std::log(t);
}

// exp iterated m times starting at 1: e, e^e, e^(e^e), ...
double natural_shift(int iterations) {
  double s = 1.0;
  for (int i = 0; i < iterations; ++i) s = std::exp(s);
  return s;
}

constexpr int kDecades = 12;
constexpr int kPointsPerDecade = 256;

}  // namespace

TauSpec TauSpec::constant(double c) {
  TauSpec s;
  s.family = TauFamily::constant;
  s.value = c;
  return s;
}

TauSpec TauSpec::log(std::optional<double> shift) {
  TauSpec s;
  s.family = TauFamily::log;
  s.shift = shift;
  return s;
}

TauSpec TauSpec::log_power(double exponent, std::optional<double> shift) {
  TauSpec s;
  s.family = TauFamily::log_power;
  s.exponent = exponent;
  s.shift = shift;
  return s;
}

TauSpec TauSpec::iterated_log(int iterations, double exponent,
                              std::optional<double> shift) {
  TauSpec s;
  s.family = TauFamily::iterated_log;
  s.iterations = iterations;
  s.exponent = exponent;
  s.shift = shift;
  return s;
}

TauSpec TauSpec::composed(std::vector<TauSpec> factors) {
  TauSpec s;
  s.family = TauFamily::composed;
  s.factors = std::move(factors);
  return s;
}

double TauSpec::resolved_shift() const {
  if (shift) return *shift;
  return family == TauFamily::iterated_log ? natural_shift(iterations)
                                           : std::numbers::e;
}

void TauSpec::validate() const {
  switch (family) {
    case TauFamily::constant:
      if (!(value >= 1.0) || !std::isfinite(value))
        throw ConfigError("tau: constant value must be finite and >= 1");
      return;
    case TauFamily::composed:
      if (factors.empty()) throw ConfigError("tau: composed needs factors");
      for (const auto& f : factors) f.validate();
      return;
    case TauFamily::iterated_log:
      if (iterations < 1) throw ConfigError("tau: iterations must be >= 1");
      [[fallthrough]];
    case TauFamily::log_power:
      if (!(exponent >= 0.0) || !std::isfinite(exponent))
        throw ConfigError("tau: exponent must be finite and >= 0");
      [[fallthrough]];
    case TauFamily::log:
      // 1 ulp of slack so a literal 2.718281828459045 is accepted.
      if (!(resolved_shift() >= std::numbers::e * (1 - 1e-15)) ||
          !std::isfinite(resolved_shift()))
        throw ConfigError("tau: shift must be finite and >= e");
      return;
  }
}

bool TauSpec::unbounded_at_zero() const {
  switch (family) {
    case TauFamily::constant:
      return false;
    case TauFamily::log:
      return true;
    case TauFamily::log_power:
    case TauFamily::iterated_log:
      return exponent > 0.0;
    case TauFamily::composed:
      for (const auto& f : factors)
        if (f.unbounded_at_zero()) return true;
      return false;
  }
  return false;
}

TauValue eval_tau_checked(const TauSpec& tau, double t) {
  if (!(t > 0.0) || std::isnan(t))
    throw DomainError("tau is defined on (0, inf), got t = " +
                      std::to_string(t));
  switch (tau.family) {
    case TauFamily::constant:
      return {tau.value, false};
    case TauFamily::log: {
      double v = log_shift_inverse(tau.resolved_shift(), t);
      return v < 1.0 ? TauValue{1.0, true} : TauValue{v, false};
    }
    case TauFamily::log_power: {
      double v = log_shift_inverse(tau.resolved_shift(), t);
      if (v < 1.0) return {1.0, true};
      return {std::pow(v, tau.exponent), false};
    }
    case TauFamily::iterated_log: {
      double v = log_shift_inverse(tau.resolved_shift(), t);
      for (int i = 1; i < tau.iterations; ++i) {
        if (v <= 1.0) return {1.0, true};
        v = std::log(v);
      }
      if (v < 1.0) return {1.0, true};
      return {std::pow(v, tau.exponent), false};
    }
    case TauFamily::composed: {
      TauValue out{1.0, false};
      for (const auto& f : tau.factors) {
        auto v = eval_tau_checked(f, t);
        out.value *= v.value;
        out.clamped = out.clamped || v.clamped;
      }
      return out;
    }
  }
  return {1.0, false};
}

double eval_tau(const TauSpec& tau, double t) {
  return eval_tau_checked(tau, t).value;
}

void RawGauge::validate() const {
  switch (family) {
    case RawFamily::power:
      if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ConfigError("raw gauge: alpha must be finite and > 0");
      return;
    case RawFamily::power_log:
      if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ConfigError("raw gauge: alpha must be finite and > 0");
      if (!(exponent >= 0.0) || !std::isfinite(exponent))
        throw ConfigError("raw gauge: exponent must be finite and >= 0");
      if (!(shift >= std::numbers::e * (1 - 1e-15)))
        throw ConfigError("raw gauge: shift must be >= e");
      return;
    case RawFamily::exp_inv:
      return;
  }
}

void GaugeSpec::validate() const {
  if (n < 2 || n > 32) throw ConfigError("gauge: n must be in [2, 32]");
  if (tau && raw) throw ConfigError("gauge: give either tau or raw, not both");
  if (tau) tau->validate();
  if (raw) raw->validate();
}

double eval_h(const GaugeSpec& spec, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError("gauge argument must be finite and >= 0");
  if (t == 0.0) return 0.0;
  double v = 0.0;
  if (spec.raw) {
    const auto& r = *spec.raw;
    switch (r.family) {
      case RawFamily::power:
        v = std::pow(t, r.alpha);
        break;
      case RawFamily::power_log:
        v = std::pow(t, r.alpha) *
            std::pow(log_shift_inverse(r.shift, t), -r.exponent);
        break;
      case RawFamily::exp_inv:
        v = std::exp(-1.0 / t);
        break;
    }
  } else {
    v = std::pow(t, spec.n);
    if (spec.tau) v *= eval_tau(*spec.tau, t);
  }
  if (!std::isfinite(v))
    throw RangeError("gauge overflow at t = " + std::to_string(t));
  return v;
}

double diameter_constant(int n) { return 2.0 * std::sqrt(double(n)); }

double tau_root(const TauSpec& tau, double p, int n, double tol) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("tau_root: p must be in (0,1]");
  if (!(tol > 0.0)) throw DomainError("tau_root: tol must be > 0");
  auto g = [&](double t) { return std::pow(t, n) * eval_tau(tau, p * t) - 1.0; };

  const int count = kDecades * kPointsPerDecade;
  auto grid = [&](int i) {
    if (i == count) return 1.0;
    return std::pow(10.0, -kDecades + double(i) / kPointsPerDecade);
  };

  if (g(grid(0)) >= 0.0)
    throw HypothesisViolated(
        "tau_root: t^n tau(pt) >= 1 already at t = 1e-12 (p = " +
        std::to_string(p) + ")");

  double lo = grid(0);
  double hi = 0.0;
  for (int i = 1; i <= count; ++i) {
    double t = grid(i);
    if (g(t) >= 0.0) {
      hi = t;
      break;
    }
    lo = t;
  }
  if (hi == 0.0)
    throw NoRootError("tau_root: t^n tau(pt) < 1 on all of (0,1] for p = " +
                      std::to_string(p));

  // Invariant: g(lo) < 0 <= g(hi).
  for (int it = 0; it < 200; ++it) {
    double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  double glo = g(lo), ghi = g(hi);
  double root = std::abs(glo) < std::abs(ghi) ? lo : hi;
  if (std::min(std::abs(glo), std::abs(ghi)) > tol)
    throw ToleranceError("tau_root: residual above tolerance for p = " +
                         std::to_string(p));
  return root;
}

std::vector<double> thm1_sequence(const TauSpec& tau, int n, int depth,
                                  double tol) {
  if (depth < 1) throw DomainError("thm1_sequence: depth must be >= 1");
  tau.validate();
  std::vector<double> a(depth + 1);
  a[0] = 1.0;
  for (int k = 1; k <= depth; ++k) {
    try {
      a[k] = tau_root(tau, std::ldexp(1.0, -k), n, tol);
    } catch (const NoRootError& e) {
      throw NoRootError(std::string(e.what()) + " (k = " + std::to_string(k) +
                            ")",
                        k);
    }
    if (a[k] > a[k - 1])
      throw ConstructionError("thm1_sequence: a_k increased at k = " +
                              std::to_string(k));
  }
  return a;
}

std::vector<double> thm2_sequence(const GaugeSpec& h, int depth,
                                  double safety) {
  if (depth < 1) throw DomainError("thm2_sequence: depth must be >= 1");
  if (!(safety > 0.0 && safety < 1.0))
    throw DomainError("thm2_sequence: safety must be in (0,1)");
  h.validate();
  const int n = h.n;
  const double cn = diameter_constant(n);
  std::vector<double> a(depth + 1);
  a[0] = 1.0;
  for (int k = 1; k <= depth; ++k) {
    const double target = safety * std::ldexp(1.0, -2 * n * k);
    auto ok = [&](double ak) {
      return eval_h(h, cn * std::ldexp(ak, -k)) <= target;
    };
    double hi = 0.5 * a[k - 1];
    if (ok(hi)) {
      a[k] = hi;
      continue;
    }
    double lo = hi;
    while (!ok(lo)) {
      lo *= 0.5;
      if (lo < std::numeric_limits<double>::min())
        throw ToleranceError("thm2_sequence: no representable a_k at k = " +
                             std::to_string(k));
    }
    hi = 2.0 * lo;
    // ok(lo) && !ok(hi)
    for (int it = 0; it < 200; ++it) {
      double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      if (ok(mid))
        lo = mid;
      else
        hi = mid;
    }
    a[k] = lo;
  }
  return a;
}

}  // namespace ponomarev
