#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/LU>

#include <cmath>
#include <random>
#include <thread>

#include "ponomarev/errors.hpp"
#include "ponomarev/gauge.hpp"
#include "ponomarev/mapping.hpp"

using namespace ponomarev;

namespace {

Point pt(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

Point uniform_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  Point x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

PonomarevMap reciprocal_map(int n, int K) {
  return PonomarevMap::build(SequencePack::reciprocal(n, K), "reciprocal");
}

}  // namespace

TEST_CASE("build") {
  const auto map = reciprocal_map(2, 20);
  CHECK(map.dimension() == 2);
  CHECK(map.depth() == 20);
  CHECK(map.pack().alpha(1) == 0.5);
  CHECK(map.pack().beta(1) == 0.25);
  CHECK(map.truncation_error() ==
        doctest::Approx(2 * std::sqrt(2.0) * std::ldexp(map.pack().b(20), -20)));
  CHECK_THROWS_AS(PonomarevMap::build(SequencePack::reciprocal(2, 4).with_alpha_offset(1, 1e-3)),
                  ConstructionError);
}

TEST_CASE("eval: boundary, origin, centers") {
  for (int n : {2, 3}) {
    const auto map = reciprocal_map(n, 12);
    std::mt19937_64 rng(1);
    for (int s = 0; s < 1000; ++s) {
      Point x = uniform_point(rng, n);
      x[s % n] = s % 2 ? 1.0 : -1.0;
      const Point y = map.eval(x);
      CHECK((y - x).cwiseAbs().maxCoeff() <= 8 * std::numeric_limits<double>::epsilon());
      CHECK((map.eval_inverse(x) - x).cwiseAbs().maxCoeff() <=
            8 * std::numeric_limits<double>::epsilon());
    }
    CHECK(map.eval(Point::Zero(n)) == Point::Zero(n));
    for (int k = 1; k <= 3; ++k)
      for_each_word(n, k, [&](const VertexWord& w) {
        const Point z = center(w, map.pack(), Side::domain);
        const Point zt = center(w, map.pack(), Side::target);
        CHECK((map.eval(z) - zt).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK((map.eval_inverse(zt) - z).cwiseAbs().maxCoeff() <= 1e-15);
      });
  }
  CHECK_THROWS_AS(reciprocal_map(2, 3).eval(pt({1.1, 0.0})), DomainError);
}

TEST_CASE("inner faces map onto target inner faces") {
  const auto map = reciprocal_map(2, 12);
  const auto& pack = map.pack();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 1; k <= 12; ++k) {
    const auto w = VertexWord::from_index(2, k, rng() % (1ull << (2 * k)));
    const Point z = center(w, pack, Side::domain);
    const Point zt = center(w, pack, Side::target);
    for (int s = 0; s < 50; ++s) {
      Point d = pack.r(k) * pt({u(rng), u(rng)});
      d[s % 2] = s % 4 < 2 ? pack.r(k) : -pack.r(k);
      const Point y = map.annulus_image(w, z + d);
      const double dist = (y - zt).cwiseAbs().maxCoeff();
      // Both centers are of size 1, so their rounding dominates.
      CHECK(std::abs(dist - pack.rt(k)) <= 8 * std::numeric_limits<double>::epsilon());
    }
  }
}

TEST_CASE("radial profile is strictly increasing on annuli") {
  const auto pack = SequencePack::reciprocal(2, 10);
  for (int k = 1; k <= 10; ++k) {
    double prev = -1;
    for (int i = 0; i <= 100; ++i) {
      const double s = pack.r(k) + (0.5 * pack.r(k - 1) - pack.r(k)) * i / 100;
      const double st = pack.alpha(k) * s + pack.beta(k);
      CHECK(st > prev);
      prev = st;
    }
  }
}

TEST_CASE("inverse round trip, n = 2, K = 20") {
  const auto map = reciprocal_map(2, 20);
  std::mt19937_64 rng(3);
  double worst = 0;
  for (int s = 0; s < 10000; ++s) {
    const Point y = uniform_point(rng, 2);
    worst = std::max(worst, (map.eval(map.eval_inverse(y)) - y).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 2 * map.truncation_error());
  CHECK(worst <= 8 * std::numeric_limits<double>::epsilon());
}

TEST_CASE("derivative worked example") {
  const auto map = reciprocal_map(2, 5);
  // z_v = (1/2, 1/2), x - z_v = (1/2, 1/8), m = 1/2, alpha = 1/2, beta = 1/4.
  const Point x = pt({1.0, 0.625});
  const auto D = map.derivative(x);
  CHECK(D.region == Region::annulus);
  CHECK(D.depth == 1);
  CHECK(D.active_coordinate == 0);
  Eigen::MatrixXd expect(2, 2);
  expect << 0.5, 0.0, -0.125, 1.0;
  CHECK((D.matrix - expect).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(map.jacobian_det(x) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("core derivative is (b_K/a_K) I") {
  const auto map = reciprocal_map(2, 4);
  const auto w = VertexWord::parse("+-|-+|--|++");
  const Point x = center(w, map.pack(), Side::domain) + pt({1e-4, -3e-4});
  const auto D = map.derivative(x);
  CHECK(D.region == Region::core);
  CHECK(D.active_coordinate == -1);
  const double ratio = map.pack().b(4) / map.pack().a(4);
  CHECK((D.matrix - ratio * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(map.jacobian_det(x) == doctest::Approx(ratio * ratio));
  CHECK(map.gradient_magnitude(x) == doctest::Approx(ratio));
}

TEST_CASE("ridge set is an error") {
  const auto map = reciprocal_map(2, 5);
  // x - z_v = (0.3, 0.3) around z_v = (0.5, 0.5).
  CHECK_THROWS_AS(map.derivative(pt({0.8, 0.8})), RidgeSetError);
  CHECK_THROWS_AS(map.jacobian_det(pt({0.8, 0.8})), RidgeSetError);
}

TEST_CASE("determinant formula matches det(derivative)") {
  for (int n : {2, 3, 4}) {
    const auto map = reciprocal_map(n, 10);
    std::mt19937_64 rng(4);
    for (int s = 0; s < 2000; ++s) {
      const Point x = uniform_point(rng, n);
      const auto D = map.derivative(x);
      const double det = map.jacobian_det(x);
      CHECK(std::abs(D.matrix.determinant() - det) <= 1e-12 * det);
    }
  }
}

TEST_CASE("finite-difference Jacobian, central step 1e-7 m") {
  const auto map = reciprocal_map(2, 12);
  const auto& pack = map.pack();
  std::mt19937_64 rng(5);
  int used = 0;
  while (used < 1000) {
    const Point x = uniform_point(rng, 2);
    const auto loc = locate(x, pack, 12);
    if (loc.region != Region::annulus) continue;
    const int k = loc.depth();
    const Point d = x - center(loc.word, pack, Side::domain);
    const double m = d.cwiseAbs().maxCoeff();
    const double h = 1e-7 * m;
    const double gap = std::min({m - pack.r(k), 0.5 * pack.r(k - 1) - m,
                                 m - d.cwiseAbs().minCoeff()});
    // Output rounding of size 1e-16 over a step of 1e-7 m limits central
    // differences to about 1e-9/m relative, so stay at m >= 1e-2.
    if (gap < 100 * h || m < 1e-2) continue;
    Eigen::Matrix2d J;
    for (int j = 0; j < 2; ++j) {
      Point xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      J.col(j) = (map.eval(xp) - map.eval(xm)) / (xp[j] - xm[j]);
    }
    const double det = map.jacobian_det(x);
    CHECK(std::abs(J.determinant() - det) <= 1e-6 * det);
    ++used;
  }
}

TEST_CASE("Jacobian positive at random points, n = 2, 3") {
  for (int n : {2, 3}) {
    const auto map = reciprocal_map(n, 20);
    std::mt19937_64 rng(6);
    for (int s = 0; s < 20000; ++s) CHECK(map.jacobian_det(uniform_point(rng, n)) > 0);
  }
}

TEST_CASE("identity pack gives the identity map") {
  const auto map = PonomarevMap::build(SequencePack::identity(2, 10));
  std::mt19937_64 rng(7);
  for (int s = 0; s < 1000; ++s) {
    const Point x = uniform_point(rng, 2);
    CHECK((map.eval(x) - x).cwiseAbs().maxCoeff() <= 4 * std::numeric_limits<double>::epsilon());
    CHECK(map.jacobian_det(x) == 1.0);
  }
}

TEST_CASE("injectivity probe and address disjointness") {
  const auto map = reciprocal_map(2, 16);
  std::mt19937_64 rng(8);
  for (int s = 0; s < 20000; ++s) {
    const Point x = uniform_point(rng, 2), xp = uniform_point(rng, 2);
    if (x == xp) continue;
    CHECK(map.eval(x) != map.eval(xp));
    const auto lx = locate(x, map.pack(), 4), lxp = locate(xp, map.pack(), 4);
    if (lx.word.prefix(1) != lxp.word.prefix(1))
      CHECK(locate(map.eval(x), map.pack(), 1, Side::target).word !=
            locate(map.eval(xp), map.pack(), 1, Side::target).word);
  }
}

TEST_CASE("truncations form a Cauchy sequence") {
  const auto map = reciprocal_map(2, 20);
  const auto& pack = map.pack();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int kp : {1, 5, 10, 19}) {
    const auto coarse = map.truncated(kp);
    CHECK(coarse.depth() == kp);
    const double bound = diameter_constant(2) * pack.rt(kp);
    for (int s = 0; s < 500; ++s) {
      VertexWord w(2);
      for (int d = 0; d < 20; ++d) w.push_back(static_cast<VertexWord::Mask>(rng() % 4));
      const Point x = center(w, pack, Side::domain) + pack.r(20) * pt({u(rng), u(rng)});
      CHECK((map.eval(x) - coarse.eval(x)).cwiseAbs().maxCoeff() <= bound);
    }
  }
}

TEST_CASE("concurrent evaluation over one shared map") {
  const auto map = reciprocal_map(3, 30);
  std::mt19937_64 rng(10);
  std::vector<Point> xs;
  for (int s = 0; s < 4000; ++s) xs.push_back(uniform_point(rng, 3));
  std::vector<Point> serial;
  for (const auto& x : xs) serial.push_back(map.eval(x));

  std::vector<Point> parallel(xs.size());
  std::vector<double> dets(xs.size());
  {
    std::vector<std::jthread> workers;
    for (int t = 0; t < 4; ++t)
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < xs.size(); i += 4) {
          parallel[i] = map.eval(xs[i]);
          dets[i] = map.jacobian_det(xs[i]);
        }
      });
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(parallel[i] == serial[i]);
    CHECK(dets[i] > 0);
  }
}
