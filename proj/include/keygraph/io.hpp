// Copyright 2026 The keygraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Config ingestion and result emission. The CSV layout and the config
// schema are external contracts: byte-identical inputs (plus seed) must
// yield byte-identical CSV files.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "keygraph/errors.hpp"
#include "keygraph/montecarlo.hpp"
#include "keygraph/params.hpp"
#include "keygraph/scaling.hpp"

namespace keygraph {

// Parsed run description. Class indices inside config files are 1-based to
// match the report tables; they are converted on the way in.
struct RunConfig {
  std::uint64_t n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  SystemParams params;
  std::optional<std::vector<std::uint32_t>> ring_offsets;  // present iff K1+offsets form
  std::optional<SweepAxis> sweep_axis;
  std::size_t sweep_entry_i = 0;
  std::size_t sweep_entry_j = 0;
  std::vector<double> sweep_values;

  RunConfig(std::uint64_t nodes, std::uint64_t trial_count, std::uint64_t master_seed,
            SystemParams p)
      : n(nodes), trials(trial_count), seed(master_seed), params(std::move(p)) {}
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw ValidationError(std::string("config: missing field '") + name + "'");
  }
  return *it;
}

template <typename T>
inline T as_number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError("config: " + path + " must be a number");
  return j.get<T>();
}

inline std::vector<double> as_double_vector(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError("config: " + path + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(as_number<double>(v, path + "[]"));
  return out;
}

inline std::vector<double> sweep_values_from_json(const nlohmann::json& sweep) {
  if (sweep.contains("values")) {
    return as_double_vector(sweep.at("values"), "sweep.values");
  }
  if (sweep.contains("from") && sweep.contains("to") && sweep.contains("step")) {
    const double from = as_number<double>(sweep.at("from"), "sweep.from");
    const double to = as_number<double>(sweep.at("to"), "sweep.to");
    const double step = as_number<double>(sweep.at("step"), "sweep.step");
    if (!(step > 0.0) || to < from) {
      throw ValidationError("config: sweep range requires step > 0 and to >= from");
    }
    const auto count = static_cast<std::size_t>((to - from) / step + 1e-9) + 1;
    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) values[k] = from + static_cast<double>(k) * step;
    return values;
  }
  throw ValidationError("config: sweep needs either 'values' or 'from'/'to'/'step'");
}

}  // namespace detail

// Accepted schema (JSON object):
//   r        integer >= 1
//   mu       array of r probabilities
//   K        array of r ring sizes   -- or --  K1 integer + offsets array
//   P        pool size
//   alpha    row-major r*r matrix
//   n        node count
//   trials   sample count
//   seed     optional master seed (default 0)
//   sweep    optional: { axis: "K1"|"alpha_entry"|"alpha_diag"|"channel_scalar",
//                        i, j (1-based, alpha_entry only),
//                        values: [...] or from/to/step,
//                        offsets: [...] (K1 axis, defaults to K - K1) }
inline RunConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config: top level must be an object");

  const auto r = detail::as_number<std::size_t>(detail::require_field(j, "r"), "r");
  ClassDistribution dist(detail::as_double_vector(detail::require_field(j, "mu"), "mu"));
  if (dist.classes() != r) throw ValidationError("config: mu length must equal r");

  const auto pool = detail::as_number<std::uint64_t>(detail::require_field(j, "P"), "P");

  std::vector<std::uint32_t> ring_sizes;
  std::optional<std::vector<std::uint32_t>> offsets;
  if (j.contains("K1")) {
    const auto k1 = detail::as_number<std::uint64_t>(j.at("K1"), "K1");
    const auto raw = detail::as_double_vector(detail::require_field(j, "offsets"), "offsets");
    if (raw.size() != r) throw ValidationError("config: offsets length must equal r");
    std::vector<std::uint32_t> off;
    for (double v : raw) {
      if (v < 0 || v != std::floor(v)) {
        throw ValidationError("config: offsets must be non-negative integers");
      }
      off.push_back(static_cast<std::uint32_t>(v));
    }
    for (std::uint32_t o : off) ring_sizes.push_back(static_cast<std::uint32_t>(k1) + o);
    offsets = std::move(off);
  } else {
    const auto raw = detail::as_double_vector(detail::require_field(j, "K"), "K");
    if (raw.size() != r) throw ValidationError("config: K length must equal r");
    for (double v : raw) {
      if (v < 1 || v != std::floor(v)) {
        throw ValidationError("config: K entries must be positive integers");
      }
      ring_sizes.push_back(static_cast<std::uint32_t>(v));
    }
  }

  const auto alpha = detail::as_double_vector(detail::require_field(j, "alpha"), "alpha");
  SystemParams params(std::move(dist), KeyProfile(std::move(ring_sizes), pool),
                      ChannelMatrix(r, alpha));

  const auto n = detail::as_number<std::uint64_t>(detail::require_field(j, "n"), "n");
  const auto trials = detail::as_number<std::uint64_t>(detail::require_field(j, "trials"), "trials");
  const std::uint64_t seed =
      j.contains("seed") ? detail::as_number<std::uint64_t>(j.at("seed"), "seed") : 0;

  RunConfig config(n, trials, seed, std::move(params));
  config.ring_offsets = std::move(offsets);

  if (j.contains("sweep")) {
    const auto& sweep = j.at("sweep");
    const std::string axis = detail::require_field(sweep, "axis").get<std::string>();
    if (axis == "K1") {
      config.sweep_axis = SweepAxis::K1;
      if (sweep.contains("offsets")) {
        const auto raw = detail::as_double_vector(sweep.at("offsets"), "sweep.offsets");
        std::vector<std::uint32_t> off;
        for (double v : raw) off.push_back(static_cast<std::uint32_t>(v));
        config.ring_offsets = std::move(off);
      }
      if (!config.ring_offsets) {
        // Derive offsets from the base profile: offset_j = K_j - K_1.
        std::vector<std::uint32_t> off;
        for (std::uint32_t k : config.params.keys.ring_sizes()) {
          off.push_back(k - config.params.keys.ring_size(0));
        }
        config.ring_offsets = std::move(off);
      }
    } else if (axis == "alpha_entry") {
      config.sweep_axis = SweepAxis::AlphaEntry;
      const auto i = detail::as_number<std::size_t>(detail::require_field(sweep, "i"), "sweep.i");
      const auto jj = detail::as_number<std::size_t>(detail::require_field(sweep, "j"), "sweep.j");
      if (i < 1 || i > r || jj < 1 || jj > r) {
        throw ValidationError("config: sweep.i and sweep.j must be in [1, r]");
      }
      config.sweep_entry_i = i - 1;
      config.sweep_entry_j = jj - 1;
    } else if (axis == "alpha_diag") {
      config.sweep_axis = SweepAxis::AlphaDiag;
    } else if (axis == "channel_scalar") {
      config.sweep_axis = SweepAxis::ChannelScalar;
    } else {
      throw ValidationError("config: sweep.axis must be one of K1, alpha_entry, alpha_diag, "
                            "channel_scalar");
    }
    config.sweep_values = detail::sweep_values_from_json(sweep);
  }
  return config;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path);
}

inline RunConfig load_config_file(const std::string& path) {
  return parse_config(read_file(path));
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

namespace detail {

inline std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace detail

inline constexpr std::string_view kSweepCsvHeader =
    "sweep_value,n,trials,connected_count,isolated_free_count,p_connected,"
    "p_isolated_free,lambda_m,c_n,at_threshold";

// Probabilities are fixed-point with 6 decimals; the sweep value prints as
// an integer on the K1 axis and fixed-point otherwise.
inline std::string format_sweep_csv(const SweepResult& result, std::uint64_t n,
                                    SweepAxis axis) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const SweepRow& row : result) {
    if (axis == SweepAxis::K1) {
      out += std::to_string(static_cast<std::uint64_t>(row.value));
    } else {
      out += detail::fixed6(row.value);
    }
    const auto trials = static_cast<double>(row.tally.trials);
    out += ',';
    out += std::to_string(n);
    out += ',';
    out += std::to_string(row.tally.trials);
    out += ',';
    out += std::to_string(row.tally.connected_count);
    out += ',';
    out += std::to_string(row.tally.isolated_free_count);
    out += ',';
    out += detail::fixed6(static_cast<double>(row.tally.connected_count) / trials);
    out += ',';
    out += detail::fixed6(static_cast<double>(row.tally.isolated_free_count) / trials);
    out += ',';
    out += detail::fixed6(row.lambda_m);
    out += ',';
    out += detail::fixed6(row.c_n);
    out += ',';
    out += row.at_threshold ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline constexpr std::string_view kScalingCsvHeader =
    "n,c_n,pool_over_n,edge_lb_ratio,key_spread_ratio,alpha_spread_ratio,K1,Kr,P,lambda_m";

inline std::string format_scaling_csv(const ConditionReport& report) {
  std::string out(kScalingCsvHeader);
  out += '\n';
  char buf[256];
  for (const ConditionRow& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%llu,%.9g,%.9g,%.9g,%.9g,%.9g,%llu,%llu,%llu,%.9g\n",
                  static_cast<unsigned long long>(row.n), row.c_n, row.pool_ratio,
                  row.edge_lb_ratio, row.key_spread, row.alpha_spread,
                  static_cast<unsigned long long>(row.k1),
                  static_cast<unsigned long long>(row.kr),
                  static_cast<unsigned long long>(row.pool), row.lambda_m);
    out += buf;
  }
  return out;
}

// Side file emitted next to every CSV: enough to reproduce the run.
struct RunManifest {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t master_seed = 0;
  std::string tool_version;
  double wall_time_seconds = 0.0;
  std::string output_path;
};

inline std::string manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(m.config_hash));
  j["config_hash"] = std::string("fnv1a64:") + hash;
  j["master_seed"] = m.master_seed;
  j["tool_version"] = m.tool_version;
  j["wall_time_seconds"] = m.wall_time_seconds;
  j["output"] = m.output_path;
  return j.dump(2) + "\n";
}

}  // namespace keygraph
