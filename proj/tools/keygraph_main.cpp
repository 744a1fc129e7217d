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

// keygraph CLI: closed-form edge-probability tables, critical threshold
// scans, Monte Carlo sweeps with CSV output, canned figure presets, and
// scaling-family diagnostics.
//
// Exit codes: 0 success, 2 validation error, 3 no solution, 4 I/O error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "keygraph/analysis.hpp"
#include "keygraph/io.hpp"
#include "keygraph/model.hpp"
#include "keygraph/montecarlo.hpp"
#include "keygraph/oracle.hpp"
#include "keygraph/scaling.hpp"
#include "keygraph/version.hpp"

namespace {

using namespace keygraph;

constexpr int kExitValidation = 2;
constexpr int kExitNoSolution = 3;
constexpr int kExitIo = 4;

unsigned default_workers() {
  if (const char* env = std::getenv("KEYGRAPH_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string join_command(int argc, char** argv) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    if (i) cmd += ' ';
    cmd += argv[i];
  }
  return cmd;
}

void write_csv_with_manifest(const std::string& path, const std::string& csv,
                             const std::string& command, std::uint64_t config_hash,
                             std::uint64_t seed, double wall_seconds) {
  write_file(path, csv);
  RunManifest manifest;
  manifest.command = command;
  manifest.config_hash = config_hash;
  manifest.master_seed = seed;
  manifest.tool_version = std::string(kVersion);
  manifest.wall_time_seconds = wall_seconds;
  manifest.output_path = path;
  write_file(path + ".manifest.json", manifest_json(manifest));
}

// ---------------------------------------------------------------------------
// edge-prob

int cmd_edge_prob(const std::string& config_path) {
  const RunConfig config = load_config_file(config_path);
  const DerivedProbabilities d = derive_all(config.params);
  const std::size_t r = d.r;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      std::cout << "p[" << (i + 1) << "][" << (j + 1) << "]=" << fixed6(d.pair_prob(i, j))
                << "\n";
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    std::cout << "lambda[" << (i + 1) << "]=" << fixed6(d.lambda[i]) << "\n";
  }
  for (std::size_t i = 0; i < r; ++i) {
    std::cout << "Lambda[" << (i + 1) << "]=" << fixed6(d.Lambda[i]) << "\n";
  }
  std::cout << "m=" << (d.m + 1) << "\n"
            << "d=" << (d.d + 1) << "\n"
            << "s=" << (d.s + 1) << "\n"
            << "alpha_min=" << fixed6(d.alpha_min) << "\n"
            << "alpha_max=" << fixed6(d.alpha_max) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// threshold

std::vector<std::uint32_t> offsets_for(const RunConfig& config,
                                       const std::vector<std::uint32_t>& flag_offsets) {
  if (!flag_offsets.empty()) return flag_offsets;
  if (config.ring_offsets) return *config.ring_offsets;
  std::vector<std::uint32_t> offsets;
  for (std::uint32_t k : config.params.keys.ring_sizes()) {
    offsets.push_back(k - config.params.keys.ring_size(0));
  }
  return offsets;
}

int cmd_threshold(const std::string& config_path, const std::vector<std::uint32_t>& flag_offsets) {
  const RunConfig config = load_config_file(config_path);
  const auto offsets = offsets_for(config, flag_offsets);
  const std::uint32_t k1 = critical_k1(config.n, config.params.dist, config.params.channel,
                                       offsets, config.params.keys.pool());

  std::vector<std::uint32_t> rings;
  for (std::uint32_t o : offsets) rings.push_back(k1 + o);
  const SystemParams at(config.params.dist, KeyProfile(std::move(rings), config.params.keys.pool()),
                        config.params.channel);
  const double lambda_m = derive_all(at).min_mean_edge_prob();
  const double log_n = std::log(static_cast<double>(config.n));
  std::cout << "K1*=" << k1 << "\n"
            << "Lambda_m=" << fixed6(lambda_m) << "\n"
            << "c_n=" << fixed6(static_cast<double>(config.n) * lambda_m / log_n) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

SweepSpec sweep_spec_from_config(const RunConfig& config) {
  if (!config.sweep_axis) {
    throw ValidationError("config: 'sweep' section required for the sweep command");
  }
  SweepSpec spec{ExperimentConfig(config.n, config.params, config.trials, config.seed)};
  spec.axis = *config.sweep_axis;
  spec.entry_i = config.sweep_entry_i;
  spec.entry_j = config.sweep_entry_j;
  spec.values = config.sweep_values;
  if (spec.axis == SweepAxis::K1 && config.ring_offsets) {
    spec.ring_offsets = *config.ring_offsets;
  }
  return spec;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              std::optional<std::uint64_t> seed_override, unsigned workers,
              const std::string& command) {
  const std::string config_bytes = read_file(config_path);
  RunConfig config = parse_config(config_bytes);
  if (seed_override) config.seed = *seed_override;
  SweepSpec spec = sweep_spec_from_config(config);

  const auto start = std::chrono::steady_clock::now();
  const SweepResult result = run_sweep(spec, workers);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_csv_with_manifest(out_path, format_sweep_csv(result, config.n, spec.axis), command,
                          fnv1a64(config_bytes), config.seed, wall);
  std::cout << out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// figure presets
//
// All presets: n=500, P=1e4, mu=(0.5,0.5), K_2 = K_1 + 5, 400 trials.
//   1: K1 from 5..25, alpha_11=alpha_22=0.3, one curve per alpha_12 in {0.2,0.4,0.6}
//   2: K1 from 10..25, alpha_12=alpha_22=0.2, one curve per alpha_11 in {0.2,0.4,0.6}
//   3: diagonal alpha from 0..1 (step 0.05), alpha_12=0.2, one curve per K1 in {20,25,30,35}
//   4: alpha_12 from 0..1 (step 0.05), alpha_11=alpha_22=0.2, same K1 set

struct FigureCurve {
  std::string filename;
  SweepSpec spec;
};

std::vector<double> integer_range(int from, int to) {
  std::vector<double> values;
  for (int v = from; v <= to; ++v) values.push_back(static_cast<double>(v));
  return values;
}

std::vector<double> twentieths() {
  std::vector<double> values;
  for (int k = 0; k <= 20; ++k) values.push_back(static_cast<double>(k) / 20.0);
  return values;
}

std::string short_prob(double v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::vector<FigureCurve> figure_preset(int id, std::uint64_t trials, std::uint64_t seed) {
  constexpr std::uint64_t kNodes = 500;
  constexpr std::uint64_t kPool = 10000;
  const ClassDistribution mu({0.5, 0.5});
  std::vector<FigureCurve> curves;

  auto make_spec = [&](const ChannelMatrix& channel, std::vector<std::uint32_t> base_rings) {
    SystemParams params(mu, KeyProfile(std::move(base_rings), kPool), channel);
    return SweepSpec{ExperimentConfig(kNodes, std::move(params), trials, seed)};
  };

  switch (id) {
    case 1:
      for (double a12 : {0.2, 0.4, 0.6}) {
        SweepSpec spec = make_spec(ChannelMatrix(2, {0.3, a12, a12, 0.3}), {5, 10});
        spec.axis = SweepAxis::K1;
        spec.values = integer_range(5, 25);
        spec.ring_offsets = {0, 5};
        curves.push_back({"figure1_alpha12_" + short_prob(a12) + ".csv", std::move(spec)});
      }
      break;
    case 2:
      for (double a11 : {0.2, 0.4, 0.6}) {
        SweepSpec spec = make_spec(ChannelMatrix(2, {a11, 0.2, 0.2, 0.2}), {10, 15});
        spec.axis = SweepAxis::K1;
        spec.values = integer_range(10, 25);
        spec.ring_offsets = {0, 5};
        curves.push_back({"figure2_alpha11_" + short_prob(a11) + ".csv", std::move(spec)});
      }
      break;
    case 3:
      for (std::uint32_t k1 : {20u, 25u, 30u, 35u}) {
        SweepSpec spec = make_spec(ChannelMatrix(2, {0.0, 0.2, 0.2, 0.0}), {k1, k1 + 5});
        spec.axis = SweepAxis::AlphaDiag;
        spec.values = twentieths();
        curves.push_back({"figure3_k1_" + std::to_string(k1) + ".csv", std::move(spec)});
      }
      break;
    case 4:
      for (std::uint32_t k1 : {20u, 25u, 30u, 35u}) {
        SweepSpec spec = make_spec(ChannelMatrix(2, {0.2, 0.0, 0.0, 0.2}), {k1, k1 + 5});
        spec.axis = SweepAxis::AlphaEntry;
        spec.entry_i = 0;
        spec.entry_j = 1;
        spec.values = twentieths();
        curves.push_back({"figure4_k1_" + std::to_string(k1) + ".csv", std::move(spec)});
      }
      break;
    default:
      throw ValidationError("figure: --id must be 1, 2, 3, or 4");
  }
  return curves;
}

// Canonical JSON echo of one curve, hashed into the manifest.
std::string curve_config_json(const SweepSpec& spec) {
  nlohmann::json j;
  j["r"] = spec.base.params.classes();
  j["mu"] = spec.base.params.dist.weights();
  j["K"] = spec.base.params.keys.ring_sizes();
  j["P"] = spec.base.params.keys.pool();
  j["alpha"] = spec.base.params.channel.row_major();
  j["n"] = spec.base.n;
  j["trials"] = spec.base.trials;
  j["seed"] = spec.base.master_seed;
  nlohmann::json sweep;
  switch (spec.axis) {
    case SweepAxis::K1:
      sweep["axis"] = "K1";
      sweep["offsets"] = spec.ring_offsets;
      break;
    case SweepAxis::AlphaEntry:
      sweep["axis"] = "alpha_entry";
      sweep["i"] = spec.entry_i + 1;
      sweep["j"] = spec.entry_j + 1;
      break;
    case SweepAxis::AlphaDiag:
      sweep["axis"] = "alpha_diag";
      break;
    case SweepAxis::ChannelScalar:
      sweep["axis"] = "channel_scalar";
      break;
  }
  sweep["values"] = spec.values;
  j["sweep"] = sweep;
  return j.dump();
}

int cmd_figure(int id, std::uint64_t trials, std::uint64_t seed, const std::string& out_dir,
               unsigned workers, const std::string& command) {
  for (auto& curve : figure_preset(id, trials, seed)) {
    const auto start = std::chrono::steady_clock::now();
    const SweepResult result = run_sweep(curve.spec, workers);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string path = out_dir + "/" + curve.filename;
    write_csv_with_manifest(path, format_sweep_csv(result, curve.spec.base.n, curve.spec.axis),
                            command, fnv1a64(curve_config_json(curve.spec)), seed, wall);
    std::cout << path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// check-scaling

std::function<double(std::uint64_t)> alpha_min_rule_from(const std::string& text) {
  if (text == "invlogsq") {
    return [](std::uint64_t n) {
      const double l = std::log(static_cast<double>(n));
      return 1.0 / (l * l);
    };
  }
  if (text == "invn") {
    return [](std::uint64_t n) { return 1.0 / static_cast<double>(n); };
  }
  if (text.rfind("const:", 0) == 0) {
    const double v = std::strtod(text.c_str() + 6, nullptr);
    if (!(v > 0.0 && v < 1.0)) {
      throw ValidationError("--alpha-min const value must lie in (0,1)");
    }
    return [v](std::uint64_t) { return v; };
  }
  throw ValidationError("--alpha-min must be invlogsq, invn, or const:<value>");
}

void print_trend(const char* name, const TrendSummary& t) {
  const char slope = t.slope_sign > 0 ? '+' : (t.slope_sign < 0 ? '-' : '0');
  std::cout << "trend " << name << ": min=" << t.min_value << " first=" << t.first
            << " last=" << t.last << " slope=" << slope << "\n";
}

int cmd_check_scaling(const std::string& family_name, double epsilon, double mu1,
                      const std::string& alpha_min_text, const std::string& config_path,
                      const std::vector<std::uint64_t>& grid, double tau,
                      const std::string& out_path, const std::string& command) {
  ScalingFamily family = [&] {
    if (family_name == "polylog") {
      return polylog_family(epsilon, ClassDistribution({mu1, 1.0 - mu1}),
                            alpha_min_rule_from(alpha_min_text));
    }
    if (family_name == "constant") {
      if (config_path.empty()) {
        throw ValidationError("--family constant requires --config");
      }
      return constant_family(load_config_file(config_path).params);
    }
    throw ValidationError("--family must be polylog or constant");
  }();

  const auto start = std::chrono::steady_clock::now();
  const ConditionReport report = evaluate_conditions(family, grid, tau);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::string spec_echo = family_name + " eps=" + std::to_string(epsilon) +
                          " mu1=" + std::to_string(mu1) + " alpha_min=" + alpha_min_text +
                          " tau=" + std::to_string(tau);
  write_csv_with_manifest(out_path, format_scaling_csv(report), command, fnv1a64(spec_echo), 0,
                          wall);

  // Diagnostics only: the underlying hypotheses are limit statements, so no
  // pass/fail verdicts are printed.
  print_trend("c_n", report.c_n);
  print_trend("pool_over_n", report.pool_ratio);
  print_trend("edge_lb_ratio", report.edge_lb_ratio);
  print_trend("key_spread_ratio", report.key_spread);
  print_trend("alpha_spread_ratio", report.alpha_spread);
  std::cout << out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// oracle (hidden)

int cmd_oracle_key_prob(unsigned ki, unsigned kj, unsigned pool) {
  const double exhaustive = oracle::exhaustive_key_prob(ki, kj, pool);
  const double formula = pairwise_key_prob(0, 1, KeyProfile({std::min(ki, kj), std::max(ki, kj)},
                                                            pool));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "exhaustive=%.12f\nformula=%.12f\n", exhaustive, formula);
  std::cout << buf;
  return 0;
}

int cmd_oracle_edge_freq(const std::string& config_path, std::size_t i, std::size_t j,
                         std::uint64_t samples, std::uint64_t seed) {
  const RunConfig config = load_config_file(config_path);
  if (i < 1 || j < 1) throw ValidationError("oracle edge-freq: class indices are 1-based");
  std::mt19937_64 rng(seed);
  const double freq =
      oracle::empirical_edge_freq(config.params, i - 1, j - 1, samples, rng);
  const double expected = config.params.channel.at(i - 1, j - 1) *
                          pairwise_key_prob(i - 1, j - 1, config.params.keys);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "empirical=%.6f\nexpected=%.6f\n", freq, expected);
  std::cout << buf;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"keygraph: connectivity experiments for key-predistribution networks "
               "under on-off channels"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();  // --workers may appear after the subcommand

  unsigned workers = default_workers();
  app.add_option("--workers", workers, "Monte Carlo worker threads (>=1)")
      ->capture_default_str();

  std::string config_path;
  std::string out_path = "sweep.csv";
  std::string out_dir = ".";
  std::vector<std::uint32_t> flag_offsets;
  std::optional<std::uint64_t> seed_override;
  std::uint64_t figure_seed = 0;
  std::uint64_t figure_trials = 400;
  int figure_id = 0;

  auto* edge_prob = app.add_subcommand("edge-prob", "print p_ij, lambda, Lambda, m, d, s");
  edge_prob->add_option("--config", config_path, "JSON config file")->required();

  auto* threshold = app.add_subcommand(
      "threshold", "smallest K_1 with Lambda_m > log(n)/n, given K_j = K_1 + offset_j");
  threshold->add_option("--config", config_path, "JSON config file")->required();
  threshold->add_option("--offsets", flag_offsets,
                        "ring offsets (default: from config K or offsets)")
      ->delimiter(',');

  auto* sweep = app.add_subcommand("sweep", "run the sweep described by the config");
  sweep->add_option("--config", config_path, "JSON config file with a 'sweep' section")
      ->required();
  sweep->add_option("--out", out_path, "output CSV path")->capture_default_str();
  std::uint64_t sweep_seed = 0;
  auto* sweep_seed_opt = sweep->add_option("--seed", sweep_seed, "override the config seed");

  auto* figure = app.add_subcommand("figure", "run a canned experiment preset");
  figure->add_option("--id", figure_id, "preset id (1-4)")->required();
  figure->add_option("--seed", figure_seed, "master seed")->capture_default_str();
  figure->add_option("--trials", figure_trials, "trials per sweep point")
      ->capture_default_str();
  figure->add_option("--out-dir", out_dir, "directory for CSV output")->capture_default_str();

  auto* check = app.add_subcommand("check-scaling", "finite-n scaling-family diagnostics");
  std::string family_name = "polylog";
  double epsilon = 0.25;
  double mu1 = 0.5;
  std::string alpha_min_text = "invlogsq";
  double tau = 2.0;
  std::vector<std::uint64_t> grid = {1000, 10000, 100000, 1000000};
  std::string scaling_out = "scaling.csv";
  std::string scaling_config;
  check->add_option("--family", family_name, "polylog or constant")->capture_default_str();
  check->add_option("--epsilon", epsilon, "polylog exponent in (0,0.5)")->capture_default_str();
  check->add_option("--mu1", mu1, "first class weight (second is 1-mu1)")
      ->capture_default_str();
  check->add_option("--alpha-min", alpha_min_text,
                    "alpha_min rule: invlogsq, invn, const:<v>")
      ->capture_default_str();
  check->add_option("--config", scaling_config, "base params for --family constant");
  check->add_option("--grid", grid, "n values, sorted ascending")
      ->delimiter(',')
      ->capture_default_str();
  check->add_option("--tau", tau, "exponent for the alpha-spread diagnostic")
      ->capture_default_str();
  check->add_option("--out", scaling_out, "output CSV path")->capture_default_str();

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference checks");
  oracle_cmd->group("");  // hidden
  unsigned oracle_ki = 1, oracle_kj = 1, oracle_pool = 2;
  auto* key_prob = oracle_cmd->add_subcommand("key-prob", "enumerated ring-intersection probability");
  key_prob->add_option("ki", oracle_ki)->required();
  key_prob->add_option("kj", oracle_kj)->required();
  key_prob->add_option("pool", oracle_pool)->required();
  auto* edge_freq = oracle_cmd->add_subcommand("edge-freq", "sampled per-pair edge frequency");
  std::string oracle_config;
  std::size_t oracle_i = 1, oracle_j = 2;
  std::uint64_t oracle_samples = 100000, oracle_seed = 0;
  edge_freq->add_option("--config", oracle_config)->required();
  edge_freq->add_option("--i", oracle_i)->capture_default_str();
  edge_freq->add_option("--j", oracle_j)->capture_default_str();
  edge_freq->add_option("--samples", oracle_samples)->capture_default_str();
  edge_freq->add_option("--seed", oracle_seed)->capture_default_str();
  oracle_cmd->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  const std::string command = join_command(argc, argv);
  try {
    if (*edge_prob) return cmd_edge_prob(config_path);
    if (*threshold) return cmd_threshold(config_path, flag_offsets);
    if (*sweep) {
      if (*sweep_seed_opt) seed_override = sweep_seed;
      return cmd_sweep(config_path, out_path, seed_override, workers, command);
    }
    if (*figure) return cmd_figure(figure_id, figure_trials, figure_seed, out_dir, workers, command);
    if (*check) {
      return cmd_check_scaling(family_name, epsilon, mu1, alpha_min_text, scaling_config, grid,
                               tau, scaling_out, command);
    }
    if (*oracle_cmd) {
      if (*key_prob) return cmd_oracle_key_prob(oracle_ki, oracle_kj, oracle_pool);
      if (*edge_freq) {
        return cmd_oracle_edge_freq(oracle_config, oracle_i, oracle_j, oracle_samples,
                                    oracle_seed);
      }
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NoSolutionError& e) {
    std::cerr << "no solution: " << e.what() << "\n";
    return kExitNoSolution;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
