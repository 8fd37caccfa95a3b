#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ponomarev/analysis.hpp"
#include "ponomarev/gauge.hpp"
#include "ponomarev/mapping.hpp"

namespace ponomarev {

using Json = nlohmann::json;

/// {"n":2,"tau":{"family":"iterated_log","iterations":2,"exponent":1.0,"shift":4.0}}
/// or {"n":2,"raw":{"family":"power","alpha":1.0}}. Throws ConfigError.
GaugeSpec gauge_from_json(const Json& j);
Json gauge_to_json(const GaugeSpec& spec);
TauSpec tau_from_json(const Json& j);
Json tau_to_json(const TauSpec& tau);

/// {"depth":k,"count":N,"per_cube":h,"total":S,"ratio_to_one":r}
Json to_json(const CoverReport& rep);
/// {"eps":[...],"values":[...],"bounds":[...],"sup":x,"convention":"max_partials","depth":K}
Json to_json(const NormReport& rep);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Binary PGM ("P5", maxval 255) with an optional comment line.
void write_pgm(std::ostream& out, int width, int height,
               std::span<const std::uint8_t> gray, std::string_view comment = {});
/// Binary PPM ("P6", maxval 255), rgb interleaved.
void write_ppm(std::ostream& out, int width, int height,
               std::span<const std::uint8_t> rgb, std::string_view comment = {});

/// Rows x1..xn, y1..yn, depth, region over a uniform grid of
/// `resolution` points per axis including the boundary.
void write_eval_grid_csv(std::ostream& out, const PonomarevMap& map,
                         int resolution);

}  // namespace ponomarev
