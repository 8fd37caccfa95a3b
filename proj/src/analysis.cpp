#include "ponomarev/analysis.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <string>

#include "ponomarev/errors.hpp"
#include "ponomarev/summation.hpp"

namespace ponomarev {

namespace {

void check_level(const SequencePack& pack, int k) {
  if (k < 0 || k > pack.depth())
    throw DepthError("depth " + std::to_string(k) + " outside [0, " +
                     std::to_string(pack.depth()) + "]");
}

// int_r^R t^(e-1) dt, written to avoid cancellation when R/r is near 1.
double power_antiderivative_difference(double e, double r, double R) {
  const double log_ratio = std::log(R / r);
  if (e == 0.0) return log_ratio;
  return std::pow(r, e) * std::expm1(e * log_ratio) / e;
}

double binomial(int p, int j) {
  double c = 1.0;
  for (int i = 1; i <= j; ++i) c = c * (p - j + i) / i;
  return c;
}

bool is_nonnegative_integer(double p) {
  return p >= 0.0 && p <= 64.0 && p == std::floor(p);
}

}  // namespace

double lebesgue_level(const SequencePack& pack, int k, Side side) {
  check_level(pack, k);
  const double edge = side == Side::domain ? pack.a(k) : pack.b(k);
  return std::pow(2.0 * edge, pack.dimension());
}

double annulus_measure(const SequencePack& pack, int k, Side side) {
  check_level(pack, k);
  if (k < 1) throw DepthError("annulus_measure: k must be >= 1");
  const int n = pack.dimension();
  const double outer = side == Side::domain ? pack.r(k - 1) : pack.rt(k - 1);
  const double inner = side == Side::domain ? pack.r(k) : pack.rt(k);
  return std::pow(outer, n) - std::pow(2.0 * inner, n);
}

double annulus_gradient_bound(const SequencePack& pack, int k) {
  check_level(pack, k);
  if (k < 1) throw DepthError("annulus_gradient_bound: k must be >= 1");
  return pack.alpha(k) + pack.beta(k) / pack.r(k);
}

CoverReport hausdorff_upper_sum(const GaugeSpec& h, const SequencePack& pack,
                                int k) {
  check_level(pack, k);
  const int n = pack.dimension();
  if (h.n != n) throw DomainError("gauge and pack dimensions differ");
  CoverReport rep;
  rep.depth = k;
  rep.count = std::ldexp(1.0, n * k);
  rep.per_cube = eval_h(h, diameter_constant(n) * pack.r(k));
  rep.total = std::ldexp(rep.per_cube, n * k);
  rep.ratio_to_one = rep.total;
  return rep;
}

// --- lower probe -------------------------------------------------------------

namespace {

struct ProbeWalk {
  const SequencePack& pack;
  const Point& c;
  double radius;
  int l;
  int n;
  std::vector<std::uint64_t> intersecting;  // per depth
  std::vector<std::uint64_t> contained;     // per depth
  std::vector<char>* covered;               // depth-l coverage marks

  bool meets(const Point& z, double r) const {
    double d2 = 0;
    for (int i = 0; i < n; ++i) {
      double g = std::max(0.0, std::abs(c[i] - z[i]) - r);
      d2 += g * g;
    }
    return std::sqrt(d2) < radius;
  }
  bool inside(const Point& z, double r) const {
    double d2 = 0;
    for (int i = 0; i < n; ++i) {
      double g = std::abs(c[i] - z[i]) + r;
      d2 += g * g;
    }
    return std::sqrt(d2) <= radius * (1 + 4e-16);
  }

  void walk(int k, std::uint64_t index, const Point& z) {
    const double r = pack.r(k);
    if (!meets(z, r)) return;
    if (inside(z, r)) {
      // Every descendant is inside as well.
      for (int d = k; d <= l; ++d) {
        const std::uint64_t block = std::uint64_t{1} << (n * (d - k));
        intersecting[d] += block;
        contained[d] += block;
      }
      const std::uint64_t block = std::uint64_t{1} << (n * (l - k));
      std::fill(covered->begin() + index * block,
                covered->begin() + (index + 1) * block, char{1});
      return;
    }
    ++intersecting[k];
    if (k == l) return;
    const double step = 0.5 * pack.r(k);
    for (VertexWord::Mask m = 0; m < (VertexWord::Mask{1} << n); ++m) {
      Point child = z;
      for (int i = 0; i < n; ++i) child[i] += (m >> i) & 1u ? step : -step;
      walk(k + 1, (index << n) | m, child);
    }
  }
};

}  // namespace

LowerProbeReport hausdorff_lower_probe(const GaugeSpec& h,
                                       const SequencePack& pack,
                                       std::span<const Ball> cover, int l) {
  check_level(pack, l);
  const int n = pack.dimension();
  if (n * l > 30) throw DepthError("hausdorff_lower_probe: n * l above 30");
  if (h.n != n) throw DomainError("gauge and pack dimensions differ");

  LowerProbeReport rep;
  rep.depth = l;
  const double per_cube_l = eval_h(h, diameter_constant(n) * pack.r(l));
  std::vector<char> covered(std::size_t{1} << (n * l), 0);
  std::vector<double> gauge_values;

  for (const auto& ball : cover) {
    const Point c = center(ball.center_word, pack, Side::domain);
    ProbeWalk w{pack, c, ball.radius, l, n,
                std::vector<std::uint64_t>(l + 1, 0),
                std::vector<std::uint64_t>(l + 1, 0), &covered};
    w.walk(0, 0, Point::Zero(n));

    BallProbe probe{ball};
    probe.gauge_value = eval_h(h, 2.0 * ball.radius);
    probe.contained = w.contained[l];
    probe.dominated_sum = double(probe.contained) * per_cube_l;
    for (int d = 0; d <= l; ++d)
      if (w.contained[d] > 0) {
        probe.minimal_depth = d;
        probe.intersecting = w.intersecting[d];
        break;
      }
    rep.max_intersecting = std::max(rep.max_intersecting, probe.intersecting);
    gauge_values.push_back(probe.gauge_value);
    rep.balls.push_back(std::move(probe));
  }

  for (std::size_t i = 0; i < covered.size(); ++i)
    if (!covered[i])
      throw CoverageError("cover misses the depth-" + std::to_string(l) +
                          " cube " +
                          VertexWord::from_index(n, l, i).to_string());

  rep.cover_sum = pairwise_sum(gauge_values);
  rep.reference_upper_sum = hausdorff_upper_sum(h, pack, l).total;
  rep.ratio = rep.cover_sum / rep.reference_upper_sum;
  return rep;
}

std::vector<Ball> canonical_cover(const SequencePack& pack, int m) {
  check_level(pack, m);
  const int n = pack.dimension();
  std::vector<Ball> balls;
  const double radius = std::sqrt(double(n)) * pack.r(m);
  for_each_word(n, m, [&](const VertexWord& w) { balls.push_back({w, radius}); });
  return balls;
}

std::vector<Ball> random_cover(const SequencePack& pack, int m, int point_depth,
                               double spread, std::uint64_t seed) {
  check_level(pack, point_depth);
  if (point_depth < m) throw DepthError("random_cover: point_depth < m");
  const int n = pack.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexWord::Mask> vertex(
      0, (VertexWord::Mask{1} << n) - 1);
  std::uniform_real_distribution<double> u(0.0, spread);
  const double base = diameter_constant(n) * pack.r(m);
  std::vector<Ball> balls;
  for_each_word(n, m, [&](const VertexWord& w) {
    VertexWord deep = w;
    while (deep.depth() < point_depth) deep.push_back(vertex(rng));
    balls.push_back({std::move(deep), base * (1.0 + u(rng))});
  });
  return balls;
}

// --- shell integrals -----------------------------------------------------------

RadialIntegrand RadialIntegrand::constant(double c) {
  RadialIntegrand f;
  f.kind = Kind::constant;
  f.c = c;
  return f;
}

RadialIntegrand RadialIntegrand::inverse_power(double q) {
  RadialIntegrand f;
  f.kind = Kind::inverse_power;
  f.q = q;
  return f;
}

RadialIntegrand RadialIntegrand::radial_gradient(double alpha, double beta,
                                                 double p) {
  RadialIntegrand f;
  f.kind = Kind::radial_gradient;
  f.alpha = alpha;
  f.beta = beta;
  f.p = p;
  return f;
}

double RadialIntegrand::operator()(double t) const {
  switch (kind) {
    case Kind::constant:
      return c;
    case Kind::inverse_power:
      return std::pow(t, -q);
    case Kind::radial_gradient:
      return std::pow(alpha + beta / t, p);
  }
  return 0.0;
}

bool RadialIntegrand::has_closed_form() const {
  return kind != Kind::radial_gradient || is_nonnegative_integer(p);
}

double shell_integral(const RadialIntegrand& phi, double r, double R, int n,
                      ShellMethod method, double rel_tol) {
  if (!(r > 0.0 && r < R) || !std::isfinite(R))
    throw DomainError("shell_integral: need 0 < r < R");
  const double outer = n * std::ldexp(1.0, n);

  const bool closed = method == ShellMethod::closed_form ||
                      (method == ShellMethod::automatic && phi.has_closed_form());
  if (closed) {
    if (!phi.has_closed_form())
      throw UnsupportedError("shell_integral: no closed form for this integrand");
    switch (phi.kind) {
      case RadialIntegrand::Kind::constant:
        return phi.c * outer * power_antiderivative_difference(n, r, R);
      case RadialIntegrand::Kind::inverse_power:
        return outer * power_antiderivative_difference(n - phi.q, r, R);
      case RadialIntegrand::Kind::radial_gradient: {
        // (alpha + beta/t)^p t^(n-1) = sum_j C(p,j) alpha^(p-j) beta^j t^(n-1-j)
        const int p = static_cast<int>(phi.p);
        std::vector<double> terms;
        for (int j = 0; j <= p; ++j)
          terms.push_back(binomial(p, j) * std::pow(phi.alpha, p - j) *
                          std::pow(phi.beta, j) *
                          power_antiderivative_difference(n - j, r, R));
        return outer * pairwise_sum(terms);
      }
    }
  }

  // In u = log t the integrand phi(e^u) e^(nu) does not depend on the
  // absolute scale of [r, R], which reaches 1e-300 for steep gauges.
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double u) {
    if (phi.kind == RadialIntegrand::Kind::radial_gradient)
      return std::exp(phi.p * std::log(phi.alpha + phi.beta * std::exp(-u)) + n * u);
    return phi(std::exp(u)) * std::exp(n * u);
  };
  double error = 0.0, l1 = 0.0;
  const double value = gauss_kronrod<double, 31>::integrate(
      f, std::log(r), std::log(R), 20, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > rel_tol * std::abs(value))
    throw ToleranceError("shell_integral: quadrature error estimate " +
                         std::to_string(error) + " above tolerance");
  return outer * value;
}

// --- norms -----------------------------------------------------------------------

std::vector<double> log_spaced_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && lo <= hi) || count < 1)
    throw DomainError("log_spaced_grid: need 0 < lo <= hi and count >= 1");
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = hi;
    return g;
  }
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) g[i] = lo * std::exp(step * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_eps_grid(int n) {
  return log_spaced_grid(1e-4, n - 1.0, 64);
}

namespace {

// 2^(nk) times the shell integral of (alpha_k + beta_k/t)^p over the depth-k
// annulus, computed after the substitution s = 2^k t so the integration
// range is [a_k, a_{k-1}] whatever the depth.
double scaled_annulus_term(const SequencePack& pack, int k, double p) {
  return shell_integral(
      RadialIntegrand::radial_gradient(pack.alpha(k),
                                       std::ldexp(pack.beta(k), k), p),
      pack.a(k), pack.a(k - 1), pack.dimension());
}

// 2^(nK) (2 r_K)^n (b_K/a_K)^p in log form.
double core_term(const SequencePack& pack, double p) {
  const int K = pack.depth(), n = pack.dimension();
  return std::exp(n * std::log(2.0 * pack.a(K)) +
                  p * std::log(pack.b(K) / pack.a(K)));
}

}  // namespace

SobolevReport sobolev_norm(const PonomarevMap& map, double p) {
  if (!(p > 0.0)) throw DomainError("sobolev_norm: p must be > 0");
  const auto& pack = map.pack();
  const int K = map.depth();
  SobolevReport rep;
  rep.p = p;
  rep.annulus_terms = parallel_map(
      K, [&](std::size_t i) { return scaled_annulus_term(pack, int(i) + 1, p); });
  double acc = 0.0;
  for (double t : rep.annulus_terms) rep.partial_sums.push_back(acc += t);
  rep.core_term = core_term(pack, p);
  std::vector<double> all = rep.annulus_terms;
  all.push_back(rep.core_term);
  rep.total = pairwise_sum(all);
  return rep;
}

NormReport grand_norm_report(const PonomarevMap& map,
                             std::span<const double> eps_grid) {
  const auto& pack = map.pack();
  if (!pack.is_standard())
    throw UnsupportedError("grand_norm_report: map must come from a standard pack");
  const int n = map.dimension(), K = map.depth();
  for (double e : eps_grid)
    if (!(e > 0.0 && e <= n - 1.0))
      throw DomainError("grand_norm_report: eps must lie in (0, n-1]");

  NormReport rep;
  rep.eps.assign(eps_grid.begin(), eps_grid.end());
  rep.depth = K;
  rep.bound_constant = n * std::ldexp(1.0, n);
  const std::size_t E = rep.eps.size();

  // One shell integral per (eps, depth) pair, independent of each other.
  auto terms = parallel_map(E * K, [&](std::size_t idx) {
    const double eps = rep.eps[idx / K];
    return scaled_annulus_term(pack, static_cast<int>(idx % K) + 1, n - eps);
  });

  const double aK = pack.a(K);
  for (std::size_t i = 0; i < E; ++i) {
    const double eps = rep.eps[i];
    std::span<const double> row(terms.data() + i * K, K);
    std::vector<double> partial;
    double acc = 0.0;
    for (double t : row) partial.push_back(eps * (acc += t));
    const double core = core_term(pack, n - eps);
    std::vector<double> all(row.begin(), row.end());
    all.push_back(core);
    rep.values.push_back(eps * pairwise_sum(all));
    rep.bounds.push_back(rep.bound_constant *
                             (std::pow(pack.a(0), eps) - std::pow(aK, eps)) +
                         eps * std::ldexp(1.0, n) * std::pow(aK, eps));
    rep.partial_sums.push_back(std::move(partial));
  }
  rep.sup = 0.0;
  for (double v : rep.values) rep.sup = std::max(rep.sup, v);
  return rep;
}

// --- coding map --------------------------------------------------------------------

PushforwardReport pushforward_check(const SequencePack& pack,
                                    const GaugeSpec& h, int k, int j) {
  check_level(pack, k);
  if (j < 0 || j > k) throw DepthError("pushforward_check: need 0 <= j <= k");
  const int n = pack.dimension();
  if (n * k > 24) throw DepthError("pushforward_check: n * k above 24");

  // Every depth-k cube carries the same gauge value; summing per-word values
  // with a tree keeps power-of-two blocks exact.
  const double per_cube = hausdorff_upper_sum(h, pack, k).per_cube;
  const std::size_t words = std::size_t{1} << (n * k);
  const std::size_t block = std::size_t{1} << (n * (k - j));
  std::vector<double> values(words, per_cube);
  const double total = pairwise_sum(values);

  PushforwardReport rep;
  rep.k = k;
  rep.j = j;
  for (std::size_t u = 0; u < (std::size_t{1} << (n * j)); ++u) {
    std::span<const double> desc(values.data() + u * block, block);
    PushforwardEntry e{VertexWord::from_index(n, j, u), {}, 0.0, false};
    e.cube = code_z(e.word);
    e.ratio = pairwise_sum(desc) / total;
    e.exact = e.ratio == e.cube.measure();
    rep.all_exact = rep.all_exact && e.exact;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

std::size_t coding_mismatches(const PonomarevMap& map, int k,
                              std::size_t samples, std::uint64_t seed) {
  const int n = map.dimension(), K = map.depth();
  if (k < 0 || k > K) throw DepthError("coding_mismatches: k out of range");
  const auto& pack = map.pack();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexWord::Mask> vertex(
      0, (VertexWord::Mask{1} << n) - 1);
  std::uniform_real_distribution<double> offset(-1.0, 1.0);
  std::size_t bad = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    VertexWord w(n);
    for (int d = 0; d < K; ++d) w.push_back(vertex(rng));
    Point x = center(w, pack, Side::domain);
    for (int i = 0; i < n; ++i) x[i] += 0.5 * pack.r(K) * offset(rng);
    const Point y = map.eval(x);
    const auto domain_word = locate(x, pack, K, Side::domain).word.prefix(k);
    const auto target_word = locate(y, pack, K, Side::target).word.prefix(k);
    if (!(code_z(domain_word) == code_z(target_word))) ++bad;
  }
  return bad;
}

}  // namespace ponomarev
