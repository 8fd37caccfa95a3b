#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ponomarev/errors.hpp"
#include "ponomarev/render.hpp"

namespace ponomarev::cli {

namespace fs = std::filesystem;

Json wrap_report(const RunConfig& cfg, Json report) {
  return Json{{"config_digest", cfg.digest()},
              {"seed", cfg.seed},
              {"report", std::move(report)}};
}

std::string provenance_line(const RunConfig& cfg) {
  return "# config_digest=" + cfg.digest() + " seed=" + std::to_string(cfg.seed);
}

namespace {

std::ofstream open_out(const fs::path& dir, const std::string& name,
                       std::ios::openmode mode = std::ios::out) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, mode | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + (dir / name).string());
  out.precision(17);
  return out;
}

void write_json(const fs::path& dir, const std::string& name, const RunConfig& cfg,
                Json report) {
  auto out = open_out(dir, name);
  out << wrap_report(cfg, std::move(report)).dump(2) << '\n';
}

// --- sequence ----------------------------------------------------------------

struct SequenceCheck {
  double value, bound;
  bool ok;
};

SequenceCheck sequence_check(const RunConfig& cfg, const SequencePack& pack, int k) {
  const int n = pack.dimension();
  switch (cfg.theorem) {
    case Theorem::thm2: {
      const double v = eval_h(cfg.gauge, diameter_constant(n) * pack.r(k));
      const double bound = std::ldexp(cfg.safety, -2 * n * k);
      return {v, bound, v <= bound};
    }
    case Theorem::thm1: {
      const double a = pack.a(k);
      const double v = std::pow(a, n) * eval_tau(*cfg.gauge.tau, pack.r(k));
      return {v, 1.0, std::abs(v - 1.0) <= 1e-10};
    }
    case Theorem::custom:
      break;
  }
  return {pack.a(k), pack.a(k - 1),
          pack.a(k) < pack.a(k - 1) && pack.b(k) < pack.b(k - 1) && pack.a(k) > 0};
}

}  // namespace

int cmd_sequence(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const auto pack = build_pack(cfg);
  const int K = pack.depth();
  auto csv = open_out(out_dir, "sequence.csv");
  csv << provenance_line(cfg) << '\n'
      << "k,a,b,r,rt,alpha,beta,check_value,check_bound,check\n";
  Json rows = Json::array();
  bool all_ok = true;
  for (int k = 0; k <= K; ++k) {
    Json row{{"k", k}, {"a", pack.a(k)}, {"b", pack.b(k)}, {"r", pack.r(k)},
             {"rt", pack.rt(k)}};
    csv << k << ',' << pack.a(k) << ',' << pack.b(k) << ',' << pack.r(k) << ','
        << pack.rt(k) << ',';
    if (k == 0) {
      const bool ok = pack.a(0) == 1.0 && pack.b(0) == 1.0;
      row.update(Json{{"alpha", nullptr}, {"beta", nullptr}, {"check_value", nullptr},
                      {"check_bound", nullptr}, {"check", ok}});
      csv << ",,,," << (ok ? "true" : "false") << '\n';
      all_ok = all_ok && ok;
    } else {
      const auto c = sequence_check(cfg, pack, k);
      row.update(Json{{"alpha", pack.alpha(k)}, {"beta", pack.beta(k)},
                      {"check_value", c.value}, {"check_bound", c.bound},
                      {"check", c.ok}});
      csv << pack.alpha(k) << ',' << pack.beta(k) << ',' << c.value << ','
          << c.bound << ',' << (c.ok ? "true" : "false") << '\n';
      all_ok = all_ok && c.ok;
    }
    rows.push_back(std::move(row));
  }
  write_json(out_dir, "sequence.json", cfg,
             Json{{"depth", K}, {"dimension", pack.dimension()}, {"rows", rows},
                  {"all_checks", all_ok}});
  log << "sequence: depth " << K << ", checks " << (all_ok ? "pass" : "FAIL") << '\n';
  return all_ok ? exit_pass : exit_verification_failed;
}

// --- eval --------------------------------------------------------------------

namespace {

struct PointRow {
  std::vector<double> x;
  std::string error;
};

std::vector<PointRow> read_points(const fs::path& path, int n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open points file " + path.string());
  std::vector<PointRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    for (char& c : line)
      if (c == ',' || c == ';') c = ' ';
    std::istringstream fields(line);
    PointRow row;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        row.x.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        row.error = "not a number: " + tok;
        break;
      }
    }
    if (row.error.empty() && static_cast<int>(row.x.size()) != n)
      row.error = "expected " + std::to_string(n) + " coordinates";
    rows.push_back(std::move(row));
  }
  return rows;
}

// Origin, depth-1 centers, boundary corners and face midpoints, then seeded
// uniform samples.
std::vector<PointRow> default_points(const RunConfig& cfg, const SequencePack& pack) {
  const int n = pack.dimension();
  std::vector<PointRow> rows;
  rows.push_back({std::vector<double>(n, 0.0), {}});
  for (VertexWord::Mask m = 0; m < (VertexWord::Mask{1} << n); ++m) {
    const Point z = center(VertexWord::from_index(n, 1, m), pack, Side::domain);
    rows.push_back({std::vector<double>(z.data(), z.data() + n), {}});
  }
  for (VertexWord::Mask m = 0; m < (VertexWord::Mask{1} << n); ++m) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = (m >> i) & 1 ? 1.0 : -1.0;
    rows.push_back({x, {}});
  }
  for (int i = 0; i < n; ++i)
    for (double s : {-1.0, 1.0}) {
      std::vector<double> x(n, 0.0);
      x[i] = s;
      rows.push_back({x, {}});
    }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    std::vector<double> x(n);
    for (auto& c : x) c = u(rng);
    rows.push_back({x, {}});
  }
  return rows;
}

}  // namespace

int cmd_eval(const RunConfig& cfg, const std::optional<fs::path>& points,
             const fs::path& out_dir, std::ostream& log) {
  const auto map = build_map(cfg);
  const int n = map.dimension();
  auto rows = points ? read_points(*points, n) : default_points(cfg, map.pack());
  const double tol = 2.0 * map.truncation_error();

  auto csv = open_out(out_dir, "eval.csv");
  csv << provenance_line(cfg) << '\n';
  for (int i = 0; i < n; ++i) csv << 'x' << i + 1 << ',';
  for (int i = 0; i < n; ++i) csv << 'y' << i + 1 << ',';
  for (int i = 0; i < n; ++i) csv << "xr" << i + 1 << ',';
  csv << "roundtrip_error,depth,region,error\n";

  std::size_t errors = 0, over = 0;
  double worst = 0;
  for (auto& row : rows) {
    Point x(n), y(n), back(n);
    int depth = -1;
    std::string region;
    if (row.error.empty()) {
      x = Eigen::Map<const Point>(row.x.data(), n);
      try {
        const auto ev = map.eval_detailed(x);
        y = ev.image;
        back = map.eval_inverse(y);
        depth = ev.location.depth();
        region = ev.location.region == Region::core ? "core" : "annulus";
      } catch (const DomainError& e) {
        row.error = e.what();
      }
    }
    if (!row.error.empty()) {
      ++errors;
      for (int i = 0; i < n; ++i) {
        if (i < int(row.x.size())) csv << row.x[i];
        csv << ',';
      }
      for (int i = 0; i < 2 * n; ++i) csv << ',';
      std::string msg = row.error;
      for (char& c : msg)
        if (c == ',' || c == '\n') c = ';';
      csv << ",,," << msg << '\n';
      continue;
    }
    const double err = (back - x).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
    if (err > tol) ++over;
    for (int i = 0; i < n; ++i) csv << x[i] << ',';
    for (int i = 0; i < n; ++i) csv << y[i] << ',';
    for (int i = 0; i < n; ++i) csv << back[i] << ',';
    csv << err << ',' << depth << ',' << region << ",\n";
  }
  log << "eval: " << rows.size() << " rows, " << errors << " row errors, max round-trip "
      << worst << " (tolerance " << tol << ")\n";
  return over == 0 ? exit_pass : exit_verification_failed;
}

// --- norms -------------------------------------------------------------------

int cmd_norms(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const auto map = build_map(cfg);
  const auto grid = cfg.eps_grid();
  const auto rep = grand_norm_report(map, grid);
  bool ok = true;
  for (std::size_t i = 0; i < rep.eps.size(); ++i)
    ok = ok && rep.values[i] >= 0 && rep.values[i] <= rep.bounds[i];
  write_json(out_dir, "norms.json", cfg, to_json(rep));

  auto csv = open_out(out_dir, "norms.csv");
  csv << provenance_line(cfg) << '\n' << "eps,value,bound\n";
  for (std::size_t i = 0; i < rep.eps.size(); ++i)
    csv << rep.eps[i] << ',' << rep.values[i] << ',' << rep.bounds[i] << '\n';

  const int n = map.dimension();
  const auto classical = sobolev_norm(map, n);
  auto div = open_out(out_dir, "sobolev_p_eq_n.csv");
  div << provenance_line(cfg) << '\n' << "depth,annulus_term,partial_sum\n";
  for (std::size_t k = 0; k < classical.annulus_terms.size(); ++k)
    div << k + 1 << ',' << classical.annulus_terms[k] << ','
        << classical.partial_sums[k] << '\n';

  log << "norms: sup " << rep.sup << " over " << rep.eps.size()
      << " eps values, bounds " << (ok ? "hold" : "VIOLATED") << '\n';
  return ok ? exit_pass : exit_verification_failed;
}

// --- hausdorff ---------------------------------------------------------------

int cmd_hausdorff(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const auto pack = build_pack(cfg);
  pack.validate();
  Json reports = Json::array();
  auto csv = open_out(out_dir, "hausdorff.csv");
  csv << provenance_line(cfg) << '\n' << "depth,count,per_cube,total,ratio_to_one\n";
  for (int k = 0; k <= pack.depth(); ++k) {
    const auto rep = hausdorff_upper_sum(cfg.gauge, pack, k);
    reports.push_back(to_json(rep));
    csv << rep.depth << ',' << rep.count << ',' << rep.per_cube << ',' << rep.total
        << ',' << rep.ratio_to_one << '\n';
  }
  write_json(out_dir, "hausdorff.json", cfg, reports);
  log << "hausdorff: upper sums for depths 0.." << pack.depth() << ", last total "
      << reports.back()["total"].get<double>() << '\n';
  return exit_pass;
}

// --- render ------------------------------------------------------------------

int cmd_render(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  const auto map = build_map(cfg);
  if (map.dimension() != 2) throw UnsupportedError("render needs n = 2");
  const int res = cfg.resolution;
  const auto img = render(map, res);
  const std::string comment = provenance_line(cfg).substr(2);
  const auto binary = std::ios::out | std::ios::binary;
  {
    auto out = open_out(out_dir, "displacement.pgm", binary);
    write_pgm(out, res, res, img.displacement, comment);
  }
  {
    auto out = open_out(out_dir, "jacobian.ppm", binary);
    write_ppm(out, res, res, img.jacobian, comment);
  }
  {
    auto out = open_out(out_dir, "grid.pgm", binary);
    write_pgm(out, res, res, img.grid, comment);
  }
  {
    auto out = open_out(out_dir, "regions.pgm", binary);
    write_pgm(out, res, res, img.regions, comment);
  }
  {
    auto out = open_out(out_dir, "render.csv");
    out << provenance_line(cfg) << '\n';
    write_render_csv(out, map, res);
  }
  {
    auto out = open_out(out_dir, "eval_grid.csv");
    out << provenance_line(cfg) << '\n';
    write_eval_grid_csv(out, map, res);
  }
  log << "render: " << res << "x" << res << ", max displacement "
      << img.max_displacement << '\n';
  return exit_pass;
}

}  // namespace ponomarev::cli
