#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <Eigen/LU>

#include "cli/commands.hpp"
#include "ponomarev/errors.hpp"

namespace ponomarev::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Suite {
 public:
  void add(const std::string& name, bool ok, double observed, double bound,
           const std::string& detail) {
    if (!ok) passed_ = false;
    checks_.push_back({{"name", name},
                       {"status", ok ? "pass" : "fail"},
                       {"observed", observed},
                       {"bound", bound},
                       {"detail", detail}});
  }
  void skip(const std::string& name, const std::string& reason) {
    checks_.push_back({{"name", name},
                       {"status", "skipped"},
                       {"observed", nullptr},
                       {"bound", nullptr},
                       {"detail", reason}});
  }
  Json json() const { return Json{{"checks", checks_}, {"passed", passed_}}; }

 private:
  Json checks_ = Json::array();
  bool passed_ = true;
};

// |a - b|_inf in units of the spacing of doubles at max(|a|_inf, |b|_inf).
double scaled_ulps(const Point& a, const Point& b) {
  const double scale = std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(),
                                 std::numeric_limits<double>::min()});
  const double ulp = std::nextafter(scale, kInf) - scale;
  return (a - b).cwiseAbs().maxCoeff() / ulp;
}

// |a - b|_inf in units of (1 + L) ulp(scale), where scale is the largest
// magnitude entering the computation (points and centers) and L the slope of
// the branches: neither branch can resolve its inputs more finely.
double conditioned_ulps(const Point& a, const Point& b, double scale, double L) {
  scale = std::max({scale, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(),
                    std::numeric_limits<double>::min()});
  const double ulp = std::nextafter(scale, kInf) - scale;
  return (a - b).cwiseAbs().maxCoeff() / ((1.0 + L) * ulp);
}

class Sampler {
 public:
  Sampler(const SequencePack& pack, std::uint64_t seed)
      : pack_(pack), rng_(seed), u_(-1.0, 1.0),
        vertex_(0, (VertexWord::Mask{1} << pack.dimension()) - 1) {}

  Point uniform() {
    Point x(pack_.dimension());
    for (int i = 0; i < x.size(); ++i) x[i] = u_(rng_);
    return x;
  }
  VertexWord word(int depth) {
    VertexWord w(pack_.dimension());
    for (int d = 0; d < depth; ++d) w.push_back(vertex_(rng_));
    return w;
  }
  // Point within r_K of a random deepest center, i.e. inside the cores.
  Point deep() {
    const int K = pack_.depth();
    Point x = center(word(K), pack_, Side::domain);
    for (int i = 0; i < x.size(); ++i) x[i] += pack_.r(K) * u_(rng_);
    return x;
  }
  // Half uniform, half deep.
  Point mixed(std::size_t i) { return i % 2 == 0 ? uniform() : deep(); }
  // Point with |x - z|_inf == half_edge.
  Point on_face(const Point& z, double half_edge) {
    const int n = pack_.dimension();
    Point d(n);
    for (int i = 0; i < n; ++i) d[i] = half_edge * u_(rng_);
    const int face = static_cast<int>(vertex_(rng_) % n);
    d[face] = u_(rng_) < 0 ? -half_edge : half_edge;
    return z + d;
  }

 private:
  const SequencePack& pack_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> u_;
  std::uniform_int_distribution<VertexWord::Mask> vertex_;
};

std::uint64_t salted(const RunConfig& cfg, std::uint64_t salt) {
  return cfg.seed ^ (0x9e3779b97f4a7c15ULL * salt);
}

void pack_checks(Suite& s, const SequencePack& pack, bool& usable) {
  const auto structural = pack.first_violation(kInf);
  s.add("pack_invariants", structural.empty(), structural.empty() ? 0 : 1, 0,
        structural.empty() ? "a_0 = b_0 = 1, positive, strictly nested, alpha > 0"
                           : structural);
  const double glue = pack.max_gluing_residual_ulps();
  s.add("gluing", glue <= 4.0, glue, 4.0,
        "max residual of both gluing equations, ulps of rt");
  if (pack.is_standard()) {
    double worst = 0;
    for (int k = 1; k <= pack.depth(); ++k)
      worst = std::max({worst, ulp_distance(pack.alpha(k), 0.5),
                        ulp_distance(pack.beta(k), std::ldexp(1.0, -k - 1))});
    s.add("standard_coefficients", worst <= 4.0, worst, 4.0,
          "alpha_k = 1/2, beta_k = 2^(-k-1), ulps");
  } else {
    s.skip("standard_coefficients", "pack is not standard");
  }
  usable = structural.empty() && glue <= 4.0;
}

void geometry_checks(Suite& s, const RunConfig& cfg, const PonomarevMap& map) {
  const auto& pack = map.pack();
  const int n = map.dimension(), K = map.depth();
  const std::size_t S = cfg.samples;

  {
    Sampler smp(pack, salted(cfg, 1));
    double worst = 0;
    for (std::size_t i = 0; i < S; ++i) {
      const Point x = smp.on_face(Point::Zero(n), 1.0);
      worst = std::max(worst, scaled_ulps(map.eval(x), x));
    }
    s.add("boundary_identity", worst <= 8.0, worst, 8.0,
          "|f(x) - x| on the cube boundary, ulps");
  }
  {
    const Point o = Point::Zero(n);
    const double err = map.eval(o).cwiseAbs().maxCoeff();
    s.add("origin", err <= 8 * std::numeric_limits<double>::epsilon(), err,
          8 * std::numeric_limits<double>::epsilon(), "|f(0)|");
  }
  {
    const int depth = std::min(K, std::max(1, 12 / n));
    double worst = 0;
    for (int k = 1; k <= depth; ++k)
      for_each_word(n, k, [&](const VertexWord& w) {
        // z_v sits on the outer face of its first child annulus, where the
        // slope is rt_k / r_k.
        const Point z = center(w, pack, Side::domain);
        worst = std::max(worst, conditioned_ulps(map.eval(z), center(w, pack, Side::target),
                                                 z.cwiseAbs().maxCoeff(),
                                                 pack.rt(k) / pack.r(k)));
      });
    s.add("centers", worst <= 8.0, worst, 8.0,
          "f(z_v) = zt_v for all words up to depth " + std::to_string(depth) +
              ", (1 + slope) ulps of the operand scale");
  }
  {
    Sampler smp(pack, salted(cfg, 2));
    const int depth = std::min(K, 12);
    double worst = 0;
    for (int k = 1; k <= depth; ++k) {
      for (std::size_t i = 0; i < S; ++i) {
        const auto w = smp.word(k);
        const Point z = center(w, pack, Side::domain);
        const auto parent = w.prefix(k - 1);
        const double scale = std::max(
            {z.cwiseAbs().maxCoeff(),
             center(parent, pack, Side::domain).cwiseAbs().maxCoeff(),
             center(parent, pack, Side::target).cwiseAbs().maxCoeff()});
        const Point inner = smp.on_face(z, pack.r(k));
        worst = std::max(worst, conditioned_ulps(map.annulus_image(w, inner),
                                                 map.core_image(w, inner),
                                                 std::max(scale, inner.cwiseAbs().maxCoeff()),
                                                 pack.rt(k) / pack.r(k)));
        const Point outer = smp.on_face(z, 0.5 * pack.r(k - 1));
        worst = std::max(worst, conditioned_ulps(map.annulus_image(w, outer),
                                                 map.core_image(parent, outer),
                                                 std::max(scale, outer.cwiseAbs().maxCoeff()),
                                                 pack.rt(k - 1) / pack.r(k - 1)));
      }
    }
    s.add("continuity", worst <= 8.0, worst, 8.0,
          "radial and homothety branches on inner and outer faces, depths 1.." +
              std::to_string(depth) + ", (1 + slope) ulps of the operand scale");
  }
  {
    Sampler smp(pack, salted(cfg, 3));
    double worst = 0;
    for (std::size_t i = 0; i < S; ++i) {
      const Point x = smp.mixed(i);
      worst = std::max(worst, (map.eval_inverse(map.eval(x)) - x).cwiseAbs().maxCoeff());
    }
    const double bound = 2 * map.truncation_error();
    s.add("round_trip", worst <= bound, worst, bound, "|f^-1(f(x)) - x|_inf");
  }
  {
    Sampler smp(pack, salted(cfg, 4));
    double worst = kInf;
    std::size_t ridges = 0;
    for (std::size_t i = 0; i < S; ++i) {
      try {
        worst = std::min(worst, map.jacobian_det(smp.mixed(i)));
      } catch (const RidgeSetError&) {
        ++ridges;
      }
    }
    s.add("jacobian_positive", worst > 0, worst, 0,
          "min Jf over samples, " + std::to_string(ridges) + " ridge points skipped");
  }
  {
    Sampler smp(pack, salted(cfg, 5));
    const std::size_t wanted = std::min<std::size_t>(S, 1000);
    std::size_t used = 0, tries = 0;
    double worst = 0;
    while (used < wanted && tries < 1000 * wanted) {
      ++tries;
      const Point x = smp.uniform();
      const auto loc = locate(x, pack, K);
      if (loc.region != Region::annulus) continue;
      const int k = loc.depth();
      const Point d = (x - center(loc.word, pack, Side::domain)).cwiseAbs();
      std::vector<double> mags(d.data(), d.data() + n);
      std::sort(mags.rbegin(), mags.rend());
      const double m = mags[0], h = 1e-7 * m;
      const double gap = std::min({m - pack.r(k), 0.5 * pack.r(k - 1) - m, m - mags[1]});
      // Central differences resolve about 1e-9/m relative in binary64, so keep
      // m >= 1e-2 for a margin below the 1e-6 bound.
      if (gap < 100 * h || m < 1e-2) continue;
      Eigen::MatrixXd J(n, n);
      for (int j = 0; j < n; ++j) {
        Point xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        J.col(j) = (map.eval(xp) - map.eval(xm)) / (xp[j] - xm[j]);
      }
      const double exact = map.jacobian_det(x);
      worst = std::max(worst, std::abs(J.determinant() - exact) / exact);
      ++used;
    }
    s.add("jacobian_closed_form", used == wanted && worst <= 1e-6, worst, 1e-6,
          std::to_string(used) + " annulus points with m >= 1e-2, central step 1e-7 m");
  }
  {
    Sampler smp(pack, salted(cfg, 6));
    std::size_t collisions = 0;
    for (std::size_t i = 0; i < S; ++i) {
      const Point x = smp.mixed(i), xp = smp.mixed(i + 1);
      if (x != xp && map.eval(x) == map.eval(xp)) ++collisions;
    }
    s.add("injectivity", collisions == 0, double(collisions), 0,
          "distinct sample pairs with equal images");
  }
  {
    Sampler smp(pack, salted(cfg, 7));
    std::vector<int> levels;
    for (int kp : {1, K / 2, K - 1})
      if (kp >= 1 && kp < K && std::find(levels.begin(), levels.end(), kp) == levels.end())
        levels.push_back(kp);
    double worst = 0;
    for (int kp : levels) {
      const auto coarse = map.truncated(kp);
      const double bound = diameter_constant(n) * pack.rt(kp);
      for (std::size_t i = 0; i < S; ++i) {
        const Point x = smp.mixed(i);
        worst = std::max(worst, (map.eval(x) - coarse.eval(x)).cwiseAbs().maxCoeff() / bound);
      }
    }
    if (levels.empty())
      s.skip("truncation", "depth 1 has no coarser truncation");
    else
      s.add("truncation", worst <= 1.0, worst, 1.0,
            "|f_K - f_K'|_inf / (2 sqrt(n) rt_K')");
  }
  if (std::equal(pack.a_values().begin(), pack.a_values().end(),
                 pack.b_values().begin())) {
    Sampler smp(pack, salted(cfg, 8));
    double moved = 0, jac = 0;
    for (std::size_t i = 0; i < S; ++i) {
      const Point x = smp.mixed(i);
      moved = std::max(moved, scaled_ulps(map.eval(x), x));
      try {
        jac = std::max(jac, std::abs(map.jacobian_det(x) - 1.0));
      } catch (const RidgeSetError&) {
      }
    }
    const double jbound = 4 * std::numeric_limits<double>::epsilon();
    s.add("identity", moved <= 8.0 && jac <= jbound, jac, jbound,
          "a_k = b_k: f(x) = x within " + std::to_string(moved) + " ulps, |Jf - 1|");
  }
}

void measure_checks(Suite& s, const RunConfig& cfg, const PonomarevMap& map) {
  const auto& pack = map.pack();
  const int n = map.dimension(), K = map.depth();

  {
    bool decreasing = true;
    for (int k = 1; k <= K; ++k)
      decreasing = decreasing && lebesgue_level(pack, k, Side::domain) <
                                     lebesgue_level(pack, k - 1, Side::domain);
    s.add("lebesgue_domain", decreasing, lebesgue_level(pack, K, Side::domain),
          lebesgue_level(pack, K - 1, Side::domain),
          "2^n a_K^n, strictly decreasing in k");
  }
  if (pack.is_standard()) {
    const double t = lebesgue_level(pack, K, Side::target);
    s.add("lebesgue_target", t >= 1.0, t, 1.0, "2^n b_K^n >= 2^n (1/2)^n");
  } else {
    s.skip("lebesgue_target", "pack is not standard");
  }

  switch (cfg.theorem) {
    case Theorem::thm2: {
      double worst = 0;
      bool decreasing = true;
      double prev = kInf;
      for (int k = 1; k <= K; ++k) {
        const double total = hausdorff_upper_sum(cfg.gauge, pack, k).total;
        worst = std::max(worst, total / std::ldexp(cfg.safety, -n * k));
        decreasing = decreasing && total < prev;
        prev = total;
      }
      s.add("hausdorff_upper", worst <= 1.0 && decreasing, worst, 1.0,
            "upper sum / (safety 2^(-nk)), strictly decreasing");
      break;
    }
    case Theorem::thm1: {
      double lo = kInf, hi = 0;
      for (int k = 1; k <= std::min(K, 30); ++k) {
        const double r = hausdorff_upper_sum(cfg.gauge, pack, k).ratio_to_one;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      const double spread = std::max(hi, 1.0 / lo);
      s.add("hausdorff_upper", spread <= 10.0, spread, 10.0,
            "max(ratio, 1/ratio) of the upper sum to 1");
      break;
    }
    case Theorem::custom:
      s.skip("hausdorff_upper", "no theorem inequality for custom sequences");
      break;
  }

  {
    const int k = std::min(K, std::max(1, 12 / n));
    std::size_t inexact = 0;
    for (int j = 0; j <= k; ++j)
      for (const auto& e : pushforward_check(pack, cfg.gauge, k, j).entries)
        if (!e.exact) ++inexact;
    s.add("pushforward", inexact == 0, double(inexact), 0,
          "depth-j shares of the depth-" + std::to_string(k) +
              " upper sum equal to 2^(-jn)");
    std::size_t bad = 0;
    for_each_word(n, k, [&](const VertexWord& w) {
      const auto corner = code_z(w).corner();
      if (!(dyadic_preimage(corner, k) == w)) ++bad;
    });
    s.add("coding_round_trip", bad == 0, double(bad), 0,
          "dyadic_preimage(code_z(v)) = v for all depth-" + std::to_string(k) + " words");
  }
  {
    const int k = std::min(K, 8);
    const auto bad = coding_mismatches(map, k, cfg.samples, salted(cfg, 9));
    s.add("coding_commutes", bad == 0, double(bad), 0,
          "target code of f(x) equals domain code of x at depth " + std::to_string(k));
  }

  if (pack.is_standard()) {
    const auto rep = grand_norm_report(map, cfg.eps_grid());
    double worst = 0;
    bool nonneg = true, monotone = true;
    for (std::size_t i = 0; i < rep.eps.size(); ++i) {
      worst = std::max(worst, rep.values[i] / rep.bounds[i]);
      nonneg = nonneg && rep.values[i] >= 0;
      const auto& ps = rep.partial_sums[i];
      monotone = monotone && std::is_sorted(ps.begin(), ps.end());
    }
    s.add("grand_norm_bound", worst <= 1.0 && nonneg && monotone, worst, 1.0,
          "max value / telescoping bound over the eps grid");
  } else {
    s.skip("grand_norm_bound", "pack is not standard");
  }
}

}  // namespace

Json verify_report(const RunConfig& cfg) {
  Suite s;
  const auto pack = build_pack(cfg);
  bool usable = false;
  pack_checks(s, pack, usable);
  if (usable) {
    const auto map = PonomarevMap::build(pack);
    geometry_checks(s, cfg, map);
    measure_checks(s, cfg, map);
  } else {
    for (const char* name :
         {"boundary_identity", "origin", "centers", "continuity", "round_trip",
          "jacobian_positive", "jacobian_closed_form", "injectivity", "truncation",
          "lebesgue_domain", "lebesgue_target", "hausdorff_upper", "pushforward",
          "coding_round_trip", "coding_commutes", "grand_norm_bound"})
      s.skip(name, "pack invalid, no map to check");
  }
  return s.json();
}

int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out_dir,
               std::ostream& log) {
  const auto report = verify_report(cfg);
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir / "verify.json", std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + (out_dir / "verify.json").string());
  out << wrap_report(cfg, report).dump(2) << '\n';
  std::size_t failed = 0;
  for (const auto& c : report["checks"]) {
    const auto status = c["status"].get<std::string>();
    if (status == "fail") ++failed;
    log << status << "  " << c["name"].get<std::string>() << '\n';
  }
  log << "verify: " << (failed == 0 ? "all checks pass" : std::to_string(failed) + " failed")
      << '\n';
  return failed == 0 ? exit_pass : exit_verification_failed;
}

}  // namespace ponomarev::cli
