#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ponomarev/io.hpp"
#include "ponomarev/mapping.hpp"

namespace ponomarev::cli {

enum class Theorem { thm1, thm2, custom };

/// Sequence override for custom runs. `a` is either "reciprocal" or an
/// explicit list; `b` is "standard", "identity" or an explicit list.
struct SequenceConfig {
  std::string a_kind = "reciprocal";
  std::vector<double> a;
  std::string b_kind = "standard";
  std::vector<double> b;
};

struct EpsGrid {
  double lo = 1e-4;
  double hi = 0;  ///< 0 means n - 1
  int count = 64;
};

struct RunConfig {
  GaugeSpec gauge;
  Theorem theorem = Theorem::thm2;
  int depth = 12;
  std::uint64_t seed = 0;
  EpsGrid eps;
  int resolution = 128;
  double safety = 0.5;
  std::size_t samples = 1000;
  std::optional<SequenceConfig> sequence;
  double fault_gluing = 0;  ///< alpha offset injected at `fault_level`
  int fault_level = 1;

  /// Normalized JSON form; its SHA-256 is the config digest.
  Json to_json() const;
  std::string digest() const;
  std::vector<double> eps_grid() const;
};

/// Parses a run config. A string "gauge" field is read as a path relative
/// to `base_dir`. Throws ConfigError.
RunConfig parse_config(const Json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// "lo:hi:count".
EpsGrid parse_eps_grid(const std::string& text);

/// Sequence pack selected by the config, with any configured fault applied.
/// Does not validate.
SequencePack build_pack(const RunConfig& cfg);

/// Validated map; throws ConstructionError when the pack is broken.
PonomarevMap build_map(const RunConfig& cfg);

}  // namespace ponomarev::cli
