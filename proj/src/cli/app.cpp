#include "cli/app.hpp"

#include <CLI11.hpp>

#include <iostream>

#include "cli/commands.hpp"
#include "ponomarev/errors.hpp"

namespace ponomarev::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<int> depth;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> eps_grid;
  std::optional<int> resolution;
  std::optional<int> theorem;
  std::optional<std::string> points;
};

RunConfig effective_config(const Options& o) {
  auto cfg = load_config(o.config);
  if (o.depth) {
    if (*o.depth < 1) throw ConfigError("--depth must be >= 1");
    cfg.depth = *o.depth;
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.eps_grid) cfg.eps = parse_eps_grid(*o.eps_grid);
  if (o.resolution) {
    if (*o.resolution < 2) throw ConfigError("--resolution must be >= 2");
    cfg.resolution = *o.resolution;
  }
  if (o.theorem) {
    cfg.theorem = *o.theorem == 1 ? Theorem::thm1 : Theorem::thm2;
    if (cfg.theorem == Theorem::thm1 && !cfg.gauge.tau)
      throw ConfigError("theorem 1 needs a gauge with a tau factor");
  }
  return cfg;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nested-cube homeomorphisms of the n-cube driven by a gauge function"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Run config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--depth", o.depth, "Truncation depth K");
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--eps-grid", o.eps_grid, "Grand-norm grid lo:hi:count");
    sub->add_option("--resolution", o.resolution, "Render resolution");
    sub->add_option("--theorem", o.theorem, "Sequence construction")
        ->check(CLI::IsMember({1, 2}));
  };

  using Command = int (*)(const RunConfig&, const fs::path&, std::ostream&);
  std::vector<std::pair<CLI::App*, Command>> commands;
  auto add = [&](const char* name, const char* help, Command fn) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    commands.emplace_back(sub, fn);
    return sub;
  };
  add("sequence", "Sequence table with per-level theorem checks", cmd_sequence);
  auto* eval = add("eval", "Evaluate f and f^-1 at points", nullptr);
  eval->add_option("--points", o.points, "Points file, one point per line")
      ->check(CLI::ExistingFile);
  add("verify", "Run the verification suite", cmd_verify);
  add("norms", "Grand-Sobolev norm report", cmd_norms);
  add("hausdorff", "Hausdorff upper cover sums", cmd_hausdorff);
  add("render", "Planar renderings (n = 2)", cmd_render);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_pass : exit_config_error;
  }

  try {
    const auto cfg = effective_config(o);
    for (const auto& [sub, fn] : commands) {
      if (!sub->parsed()) continue;
      if (sub == eval) {
        std::optional<fs::path> pts;
        if (o.points) pts = *o.points;
        return cmd_eval(cfg, pts, o.out, out);
      }
      return fn(cfg, o.out, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return exit_config_error;
  } catch (const Error& e) {
    err << "numeric error: " << e.what() << '\n';
    return exit_numeric_error;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  }
  return exit_config_error;
}

}  // namespace ponomarev::cli
