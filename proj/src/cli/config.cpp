#include "cli/config.hpp"

#include <fstream>
#include <sstream>

#include "ponomarev/errors.hpp"

namespace ponomarev::cli {

namespace fs = std::filesystem;

namespace {

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

template <typename T>
T field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

std::vector<double> number_list(const Json& j, const char* what) {
  try {
    return j.get<std::vector<double>>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string(what) + " must be a list of numbers");
  }
}

const char* theorem_name(Theorem t) {
  switch (t) {
    case Theorem::thm1: return "1";
    case Theorem::thm2: return "2";
    case Theorem::custom: return "custom";
  }
  return "2";
}

}  // namespace

EpsGrid parse_eps_grid(const std::string& text) {
  EpsGrid g;
  std::istringstream in(text);
  char c1 = 0, c2 = 0;
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.count) || c1 != ':' || c2 != ':' ||
      !(in >> std::ws).eof())
    throw ConfigError("eps grid must look like lo:hi:count, got '" + text + "'");
  if (!(g.lo > 0 && g.lo <= g.hi) || g.count < 1)
    throw ConfigError("eps grid needs 0 < lo <= hi and count >= 1");
  return g;
}

std::vector<double> RunConfig::eps_grid() const {
  const double hi = eps.hi > 0 ? eps.hi : gauge.n - 1.0;
  return log_spaced_grid(eps.lo, hi, eps.count);
}

Json RunConfig::to_json() const {
  Json j;
  j["gauge"] = gauge_to_json(gauge);
  j["theorem"] = theorem_name(theorem);
  j["depth"] = depth;
  j["seed"] = seed;
  j["eps_grid"] = {{"lo", eps.lo}, {"hi", eps.hi > 0 ? eps.hi : gauge.n - 1.0},
                   {"count", eps.count}};
  j["resolution"] = resolution;
  j["safety"] = safety;
  j["samples"] = samples;
  if (sequence) {
    Json s;
    s["a"] = sequence->a_kind == "list" ? Json(sequence->a) : Json(sequence->a_kind);
    s["b"] = sequence->b_kind == "list" ? Json(sequence->b) : Json(sequence->b_kind);
    j["sequence"] = s;
  }
  if (fault_gluing != 0)
    j["fault"] = {{"gluing", fault_gluing}, {"level", fault_level}};
  return j;
}

std::string RunConfig::digest() const { return sha256_hex(to_json().dump()); }

RunConfig parse_config(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  if (!j.contains("gauge")) throw ConfigError("config needs a 'gauge'");
  const auto& g = j.at("gauge");
  cfg.gauge = g.is_string()
                  ? gauge_from_json(read_json_file(base_dir / g.get<std::string>()))
                  : gauge_from_json(g);

  if (j.contains("theorem")) {
    const auto& t = j.at("theorem");
    const std::string name = t.is_number_integer() ? std::to_string(t.get<int>())
                             : t.is_string()       ? t.get<std::string>()
                                                   : "";
    if (name == "1" || name == "thm1")
      cfg.theorem = Theorem::thm1;
    else if (name == "2" || name == "thm2")
      cfg.theorem = Theorem::thm2;
    else if (name == "custom")
      cfg.theorem = Theorem::custom;
    else
      throw ConfigError("theorem must be 1, 2 or \"custom\"");
  }

  if (j.contains("sequence")) {
    const auto& s = j.at("sequence");
    if (!s.is_object()) throw ConfigError("'sequence' must be an object");
    SequenceConfig sc;
    if (s.contains("a")) {
      if (s.at("a").is_array()) {
        sc.a_kind = "list";
        sc.a = number_list(s.at("a"), "sequence.a");
      } else {
        sc.a_kind = field<std::string>(s, "a", "reciprocal");
        if (sc.a_kind != "reciprocal")
          throw ConfigError("sequence.a must be \"reciprocal\" or a list");
      }
    }
    if (s.contains("b")) {
      if (s.at("b").is_array()) {
        sc.b_kind = "list";
        sc.b = number_list(s.at("b"), "sequence.b");
      } else {
        sc.b_kind = field<std::string>(s, "b", "standard");
        if (sc.b_kind != "standard" && sc.b_kind != "identity")
          throw ConfigError("sequence.b must be \"standard\", \"identity\" or a list");
      }
    }
    cfg.sequence = sc;
    if (!j.contains("theorem")) cfg.theorem = Theorem::custom;
  }
  if (cfg.theorem == Theorem::custom && !cfg.sequence) cfg.sequence = SequenceConfig{};

  cfg.depth = field(j, "depth", cfg.depth);
  if (cfg.sequence && cfg.sequence->a_kind == "list" && !j.contains("depth"))
    cfg.depth = static_cast<int>(cfg.sequence->a.size()) - 1;
  cfg.seed = field(j, "seed", cfg.seed);
  if (j.contains("eps_grid")) {
    const auto& e = j.at("eps_grid");
    if (e.is_string()) {
      cfg.eps = parse_eps_grid(e.get<std::string>());
    } else {
      cfg.eps.lo = field(e, "lo", cfg.eps.lo);
      cfg.eps.hi = field(e, "hi", cfg.eps.hi);
      cfg.eps.count = field(e, "count", cfg.eps.count);
    }
  }
  cfg.resolution = field(j, "resolution", cfg.resolution);
  cfg.safety = field(j, "safety", cfg.safety);
  cfg.samples = field(j, "samples", cfg.samples);
  if (j.contains("fault")) {
    const auto& f = j.at("fault");
    cfg.fault_gluing = field(f, "gluing", 0.0);
    cfg.fault_level = field(f, "level", 1);
  }

  if (cfg.depth < 1) throw ConfigError("depth must be >= 1");
  if (cfg.resolution < 2) throw ConfigError("resolution must be >= 2");
  if (!(cfg.safety > 0 && cfg.safety < 1)) throw ConfigError("safety must lie in (0,1)");
  if (cfg.theorem == Theorem::thm1 && !cfg.gauge.tau)
    throw ConfigError("theorem 1 needs a gauge with a tau factor");
  if (cfg.fault_level < 1 || cfg.fault_level > cfg.depth)
    throw ConfigError("fault.level must lie in [1, depth]");
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  return parse_config(read_json_file(path), path.parent_path());
}

SequencePack build_pack(const RunConfig& cfg) {
  const int n = cfg.gauge.n, K = cfg.depth;
  std::vector<double> a;
  switch (cfg.theorem) {
    case Theorem::thm1:
      a = thm1_sequence(*cfg.gauge.tau, n, K);
      break;
    case Theorem::thm2:
      a = thm2_sequence(cfg.gauge, K, cfg.safety);
      break;
    case Theorem::custom: {
      const auto& s = *cfg.sequence;
      if (s.a_kind == "list") {
        a = s.a;
      } else {
        for (int k = 0; k <= K; ++k) a.push_back(1.0 / (k + 1));
      }
      break;
    }
  }
  if (static_cast<int>(a.size()) != K + 1)
    throw ConfigError("sequence.a needs depth + 1 entries");

  auto pack = [&] {
    if (!cfg.sequence || cfg.sequence->b_kind == "standard")
      return SequencePack::standard(n, a);
    if (cfg.sequence->b_kind == "identity") return SequencePack::custom(n, a, a);
    if (cfg.sequence->b.size() != a.size())
      throw ConfigError("sequence.b needs depth + 1 entries");
    return SequencePack::custom(n, a, cfg.sequence->b);
  }();
  if (cfg.fault_gluing != 0)
    pack = pack.with_alpha_offset(cfg.fault_level, cfg.fault_gluing);
  return pack;
}

PonomarevMap build_map(const RunConfig& cfg) {
  const char* provenance = cfg.theorem == Theorem::thm1   ? "thm1"
                           : cfg.theorem == Theorem::thm2 ? "thm2"
                                                          : "custom";
  return PonomarevMap::build(build_pack(cfg), provenance);
}

}  // namespace ponomarev::cli
