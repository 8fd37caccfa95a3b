#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ponomarev/errors.hpp"
#include "ponomarev/gauge.hpp"
#include "ponomarev/io.hpp"
#include "ponomarev/sequence.hpp"

using namespace ponomarev;

namespace {

GaugeSpec with_tau(int n, TauSpec tau) {
  GaugeSpec g;
  g.n = n;
  g.tau = std::move(tau);
  return g;
}

std::vector<TauSpec> builtin_families() {
  return {TauSpec::constant(1.0),
          TauSpec::constant(3.0),
          TauSpec::log(),
          TauSpec::log_power(0.5),
          TauSpec::log_power(2.0),
          TauSpec::iterated_log(1, 1.0),
          TauSpec::iterated_log(2, 0.5),
          TauSpec::iterated_log(2, 1.0),
          TauSpec::iterated_log(2, 2.0),
          TauSpec::composed({TauSpec::log(), TauSpec::iterated_log(2, 1.0)})};
}

}  // namespace

TEST_CASE("eval_h basics") {
  GaugeSpec plain;
  plain.n = 2;
  CHECK(eval_h(plain, 0.5) == 0.25);
  CHECK(eval_h(plain, 0.0) == 0.0);
  for (const auto& tau : builtin_families()) CHECK(eval_h(with_tau(3, tau), 0.0) == 0.0);
  CHECK_THROWS_AS(eval_h(plain, -1.0), DomainError);
  GaugeSpec steep;
  steep.n = 2;
  steep.raw = RawGauge{RawFamily::power, 400.0};
  CHECK_THROWS_AS(eval_h(steep, 1e300), RangeError);
}

TEST_CASE("log-log gauge against an extended-precision oracle") {
  // log log(4 + 1/t) with shift 4; below t ~ 0.07 the double log exceeds 1.
  const auto tau = TauSpec::iterated_log(2, 1.0, 4.0);
  const auto h = with_tau(2, tau);
  for (double t : {0.1, 0.05, 1e-3, 1e-8, 1e-40}) {
    const double expect = oracle::log_log_h(t, 2, 1.0, 4.0);
    CHECK(eval_h(h, t) == doctest::Approx(expect).epsilon(1e-14));
  }
  // At t = 0.1 the raw value log log 14 = 0.9705 is lifted to 1.
  CHECK(eval_tau_checked(tau, 0.1).clamped);
  CHECK(eval_h(h, 0.1) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK_FALSE(eval_tau_checked(tau, 0.05).clamped);
}

TEST_CASE("tau families: lower bound, monotone, unbounded ladder") {
  for (const auto& tau : builtin_families()) {
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1000; ++i) {
      const double t = std::pow(10.0, -12.0 + 12.0 * i / 1000);
      const double v = eval_tau(tau, t);
      CHECK(v >= 1.0);
      CHECK(v <= prev);
      prev = v;
    }
    if (tau.unbounded_at_zero()) {
      for (int j = 1; j < 12; ++j)
        CHECK(eval_tau(tau, std::pow(10.0, -j - 1)) > eval_tau(tau, std::pow(10.0, -j)));
    }
  }
}

TEST_CASE("natural shift keeps families unclamped on (0,1]") {
  for (const auto& tau : builtin_families())
    for (double t : {1.0, 0.5, 1e-3, 1e-9}) CHECK_FALSE(eval_tau_checked(tau, t).clamped);
  CHECK(TauSpec::log().resolved_shift() == std::numbers::e);
  CHECK(TauSpec::iterated_log(2, 1.0).resolved_shift() ==
        doctest::Approx(std::exp(std::numbers::e)));
}

TEST_CASE("eval_h monotone on 10^4-point grids") {
  std::vector<GaugeSpec> gauges;
  for (const auto& tau : builtin_families()) gauges.push_back(with_tau(2, tau));
  for (auto fam : {RawFamily::power, RawFamily::power_log, RawFamily::exp_inv}) {
    GaugeSpec g;
    g.n = 2;
    g.raw = RawGauge{fam, 1.0};
    gauges.push_back(g);
  }
  for (const auto& g : gauges) {
    double prev = 0;
    for (int i = 0; i < 10000; ++i) {
      const double t = std::pow(10.0, -15.0 + 15.0 * i / 9999);
      const double v = eval_h(g, t);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("tau_root: constant tau has t = C^(-1/n)") {
  for (double c : {1.5, 4.0, 100.0})
    for (double p : {1.0, 0.25, std::ldexp(1.0, -20)})
      CHECK(tau_root(TauSpec::constant(c), p, 2) ==
            doctest::Approx(std::pow(c, -0.5)).epsilon(1e-12));
}

TEST_CASE("tau_root against a finer scan-plus-bisection oracle") {
  const auto tau = TauSpec::log();
  const double t = tau_root(tau, 1.0, 2);
  const double expect = oracle::first_crossing(
      [](oracle::Real s) { return s * s * log(oracle::Real(std::numbers::e) + 1 / s) - 1; },
      2560, 1e-14);
  CHECK(t == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("tau_root invariants over p = 2^0 .. 2^-20") {
  for (const auto& tau : builtin_families()) {
    if (!tau.unbounded_at_zero()) continue;
    for (int n : {2, 3}) {
      double prev = 2.0;
      for (int j = 0; j <= 20; ++j) {
        const double p = std::ldexp(1.0, -j);
        const double tp = tau_root(tau, p, n);
        CHECK(std::abs(std::pow(tp, n) * eval_tau(tau, p * tp) - 1.0) <= 1e-10);
        CHECK(tp <= prev);  // p1 > p2 gives t_p1 >= t_p2
        prev = tp;
        for (int i = 0; i < 64; ++i) {
          const double lo = 1e-12 * tp, hi = tp * (1 - 1e-6);
          const double s = lo * std::pow(hi / lo, i / 63.0);
          CHECK(std::pow(s, n) * eval_tau(tau, p * s) < 1.0);
        }
      }
    }
  }
}

TEST_CASE("tau_root errors") {
  // Huge constant: already >= 1 at 1e-12.
  CHECK_THROWS_AS(tau_root(TauSpec::constant(1e30), 1.0, 2), HypothesisViolated);
  // g(1) = tau(p) - 1 >= 0 for every family, so tau == 1 crosses exactly at 1.
  CHECK(tau_root(TauSpec::constant(1.0), 1.0, 2) == 1.0);
}

TEST_CASE("thm1_sequence") {
  const auto tau = TauSpec::iterated_log(2, 1.0);
  const auto a = thm1_sequence(tau, 2, 30);
  CHECK(a[0] == 1.0);
  for (int k = 1; k <= 30; ++k) {
    CHECK(a[k] <= a[k - 1]);
    CHECK(std::abs(a[k] * a[k] * eval_tau(tau, std::ldexp(a[k], -k)) - 1.0) <= 1e-10);
  }
  // Shift 4 clamps tau at the top levels, so a_1 = a_0 = 1 and the cubes
  // are not strictly nested.
  const auto flat = thm1_sequence(TauSpec::iterated_log(2, 1.0, 4.0), 2, 5);
  CHECK(flat[1] == 1.0);
  CHECK_THROWS_AS(SequencePack::standard(2, flat), ConstructionError);
}

TEST_CASE("thm2_sequence") {
  GaugeSpec half;
  half.n = 2;
  half.raw = RawGauge{RawFamily::power, 1.0};  // t^(n/2)
  const auto a = thm2_sequence(half, 40, 0.5);
  CHECK(a[0] == 1.0);
  for (int k = 1; k <= 40; ++k) {
    CHECK(a[k] <= 0.5 * a[k - 1]);
    CHECK(eval_h(half, diameter_constant(2) * std::ldexp(a[k], -k)) <=
          0.5 * std::ldexp(1.0, -4 * k));
  }
  CHECK_THROWS_AS(thm2_sequence(half, 5, 1.5), DomainError);
}

TEST_CASE("diameter constant") {
  CHECK(diameter_constant(2) == doctest::Approx(2 * std::sqrt(2.0)));
  CHECK(diameter_constant(4) == 4.0);
}

TEST_CASE("gauge JSON round trip and schema") {
  const auto j = Json::parse(
      R"({"n":2,"tau":{"family":"iterated_log","iterations":2,"exponent":1.0,"shift":4.0}})");
  const auto g = gauge_from_json(j);
  REQUIRE(g.tau);
  CHECK(g.tau->family == TauFamily::iterated_log);
  CHECK(g.tau->iterations == 2);
  CHECK(*g.tau->shift == 4.0);
  CHECK(gauge_to_json(g) == j);
  CHECK(gauge_from_json(gauge_to_json(g)).tau->exponent == 1.0);

  const auto raw = Json::parse(R"({"n":2,"raw":{"family":"power","alpha":1.0}})");
  CHECK(gauge_to_json(gauge_from_json(raw)) == raw);

  CHECK_THROWS_AS(gauge_from_json(Json::parse(R"({"n":2,"tau":{"family":"bogus"}})")),
                  ConfigError);
  CHECK_THROWS_AS(gauge_from_json(Json::parse(R"({"tau":{"family":"log"}})")), ConfigError);
  CHECK_THROWS_AS(gauge_from_json(Json::parse(R"({"n":1})")), ConfigError);
  CHECK_THROWS_AS(
      gauge_from_json(Json::parse(R"({"n":2,"tau":{"family":"log","shift":2.0}})")),
      ConfigError);
}
