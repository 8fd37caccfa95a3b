#include "ponomarev/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <ostream>

#include "ponomarev/errors.hpp"

namespace ponomarev {

namespace {

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

std::string required_string(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_string())
    throw ConfigError(std::string("missing string field '") + key + "'");
  return j.at(key).get<std::string>();
}

const char* tau_family_name(TauFamily f) {
  switch (f) {
    case TauFamily::constant: return "constant";
    case TauFamily::log: return "log";
    case TauFamily::iterated_log: return "iterated_log";
    case TauFamily::log_power: return "log_power";
    case TauFamily::composed: return "composed";
  }
  return "constant";
}

const char* raw_family_name(RawFamily f) {
  switch (f) {
    case RawFamily::power: return "power";
    case RawFamily::power_log: return "power_log";
    case RawFamily::exp_inv: return "exp_inv";
  }
  return "power";
}

}  // namespace

TauSpec tau_from_json(const Json& j) {
  const auto family = required_string(j, "family");
  TauSpec t;
  if (family == "constant") {
    t = TauSpec::constant(get_or(j, "value", 1.0));
  } else if (family == "log") {
    t = TauSpec::log();
  } else if (family == "log_power") {
    t = TauSpec::log_power(get_or(j, "exponent", 1.0));
  } else if (family == "iterated_log") {
    t = TauSpec::iterated_log(get_or(j, "iterations", 1),
                              get_or(j, "exponent", 1.0));
  } else if (family == "composed") {
    if (!j.contains("factors") || !j.at("factors").is_array())
      throw ConfigError("composed tau needs a 'factors' array");
    std::vector<TauSpec> factors;
    for (const auto& f : j.at("factors")) factors.push_back(tau_from_json(f));
    t = TauSpec::composed(std::move(factors));
  } else {
    throw ConfigError("unknown tau family '" + family + "'");
  }
  if (j.contains("shift")) t.shift = get_or(j, "shift", 0.0);
  t.validate();
  return t;
}

Json tau_to_json(const TauSpec& t) {
  Json j;
  j["family"] = tau_family_name(t.family);
  switch (t.family) {
    case TauFamily::constant:
      j["value"] = t.value;
      break;
    case TauFamily::composed:
      j["factors"] = Json::array();
      for (const auto& f : t.factors) j["factors"].push_back(tau_to_json(f));
      break;
    case TauFamily::iterated_log:
      j["iterations"] = t.iterations;
      [[fallthrough]];
    case TauFamily::log_power:
      j["exponent"] = t.exponent;
      [[fallthrough]];
    case TauFamily::log:
      j["shift"] = t.resolved_shift();
      break;
  }
  return j;
}

GaugeSpec gauge_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("gauge spec must be a JSON object");
  GaugeSpec g;
  if (!j.contains("n")) throw ConfigError("gauge spec needs 'n'");
  g.n = get_or(j, "n", 2);
  if (j.contains("tau")) g.tau = tau_from_json(j.at("tau"));
  if (j.contains("raw")) {
    const auto& r = j.at("raw");
    const auto family = required_string(r, "family");
    RawGauge raw;
    if (family == "power")
      raw.family = RawFamily::power;
    else if (family == "power_log")
      raw.family = RawFamily::power_log;
    else if (family == "exp_inv")
      raw.family = RawFamily::exp_inv;
    else
      throw ConfigError("unknown raw gauge family '" + family + "'");
    raw.alpha = get_or(r, "alpha", raw.alpha);
    raw.exponent = get_or(r, "exponent", raw.exponent);
    raw.shift = get_or(r, "shift", raw.shift);
    g.raw = raw;
  }
  g.validate();
  return g;
}

Json gauge_to_json(const GaugeSpec& g) {
  Json j;
  j["n"] = g.n;
  if (g.tau) j["tau"] = tau_to_json(*g.tau);
  if (g.raw) {
    Json r;
    r["family"] = raw_family_name(g.raw->family);
    if (g.raw->family != RawFamily::exp_inv) r["alpha"] = g.raw->alpha;
    if (g.raw->family == RawFamily::power_log) {
      r["exponent"] = g.raw->exponent;
      r["shift"] = g.raw->shift;
    }
    j["raw"] = r;
  }
  return j;
}

Json to_json(const CoverReport& rep) {
  return Json{{"depth", rep.depth},
              {"count", rep.count},
              {"per_cube", rep.per_cube},
              {"total", rep.total},
              {"ratio_to_one", rep.ratio_to_one}};
}

Json to_json(const NormReport& rep) {
  return Json{{"eps", rep.eps},
              {"values", rep.values},
              {"bounds", rep.bounds},
              {"sup", rep.sup},
              {"convention", rep.convention},
              {"depth", rep.depth}};
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1)
    throw Error("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

namespace {

void write_netpbm(std::ostream& out, const char* magic, int width, int height,
                  std::span<const std::uint8_t> data, std::size_t channels,
                  std::string_view comment) {
  if (data.size() != std::size_t(width) * height * channels)
    throw DomainError("image buffer size does not match dimensions");
  out << magic << '\n';
  if (!comment.empty()) out << "# " << comment << '\n';
  out << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
}

}  // namespace

void write_pgm(std::ostream& out, int width, int height,
               std::span<const std::uint8_t> gray, std::string_view comment) {
  write_netpbm(out, "P5", width, height, gray, 1, comment);
}

void write_ppm(std::ostream& out, int width, int height,
               std::span<const std::uint8_t> rgb, std::string_view comment) {
  write_netpbm(out, "P6", width, height, rgb, 3, comment);
}

void write_eval_grid_csv(std::ostream& out, const PonomarevMap& map,
                         int resolution) {
  if (resolution < 2) throw DomainError("grid resolution must be >= 2");
  const int n = map.dimension();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= resolution;
  for (int i = 0; i < n; ++i) out << 'x' << i + 1 << ',';
  for (int i = 0; i < n; ++i) out << 'y' << i + 1 << ',';
  out << "depth,region\n";
  out.precision(17);
  Point x(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int i = 0; i < n; ++i) {
      x[i] = -1.0 + 2.0 * double(rest % resolution) / (resolution - 1);
      rest /= resolution;
    }
    const auto ev = map.eval_detailed(x);
    for (int i = 0; i < n; ++i) out << x[i] << ',';
    for (int i = 0; i < n; ++i) out << ev.image[i] << ',';
    out << ev.location.depth() << ','
        << (ev.location.region == Region::core ? "core" : "annulus") << '\n';
  }
}

}  // namespace ponomarev
