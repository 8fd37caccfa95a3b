#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "cli/config.hpp"

namespace ponomarev::cli {

enum ExitCode : int {
  exit_pass = 0,
  exit_verification_failed = 2,
  exit_config_error = 3,
  exit_numeric_error = 4,
};

/// Every command writes its artifacts into `out_dir` and a short summary to
/// `log`, and returns an exit code.
int cmd_sequence(const RunConfig& cfg, const std::filesystem::path& out_dir,
                 std::ostream& log);
int cmd_eval(const RunConfig& cfg, const std::optional<std::filesystem::path>& points,
             const std::filesystem::path& out_dir, std::ostream& log);
int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out_dir,
               std::ostream& log);
int cmd_norms(const RunConfig& cfg, const std::filesystem::path& out_dir,
              std::ostream& log);
int cmd_hausdorff(const RunConfig& cfg, const std::filesystem::path& out_dir,
                  std::ostream& log);
int cmd_render(const RunConfig& cfg, const std::filesystem::path& out_dir,
               std::ostream& log);

/// Verification suite behind cmd_verify:
/// {"checks":[{"name","status","observed","bound","detail"}],"passed":bool}
/// with status "pass", "fail" or "skipped".
Json verify_report(const RunConfig& cfg);

/// {"config_digest":..., "seed":..., "report":...}
Json wrap_report(const RunConfig& cfg, Json report);
/// "# config_digest=<hex> seed=<u64>"
std::string provenance_line(const RunConfig& cfg);

}  // namespace ponomarev::cli
