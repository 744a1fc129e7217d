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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "keygraph/analysis.hpp"
#include "keygraph/errors.hpp"
#include "keygraph/model.hpp"
#include "keygraph/params.hpp"
#include "keygraph/rng.hpp"
#include "keygraph/sampler.hpp"

namespace keygraph {

// One Monte Carlo experiment: fixed parameters, `trials` independent graph
// samples. Each trial owns an RNG seeded from (master_seed, trial index),
// so results are independent of scheduling and worker count.
struct ExperimentConfig {
  std::uint64_t n = 0;
  SystemParams params;
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;

  ExperimentConfig(std::uint64_t node_count, SystemParams p, std::uint64_t trial_count,
                   std::uint64_t seed)
      : n(node_count), params(std::move(p)), trials(trial_count), master_seed(seed) {
    if (n == 0) throw ValidationError("n: must be >= 1");
    if (trials == 0) throw ValidationError("trials: must be >= 1");
  }
};

// Commutative tally; merging is addition, so aggregation order never
// changes the result.
struct TrialTally {
  std::uint64_t trials = 0;
  std::uint64_t connected_count = 0;
  std::uint64_t isolated_free_count = 0;

  TrialTally& operator+=(const TrialTally& other) {
    trials += other.trials;
    connected_count += other.connected_count;
    isolated_free_count += other.isolated_free_count;
    return *this;
  }

  bool operator==(const TrialTally&) const = default;
};

inline TrialTally run_single_trial(const ExperimentConfig& config, std::uint64_t trial_index) {
  std::mt19937_64 rng(derive_trial_seed(config.master_seed, trial_index));
  auto [assignment, graph] = build_intersection(config.n, config.params, rng);
  const ComponentSummary summary = summarize(graph);
  const bool connected = summary.component_count == 1;
  const bool isolated_free = summary.isolated_count == 0;
  // connected => no isolated nodes, for n >= 2.
  if (config.n >= 2 && connected && !isolated_free) {
    throw std::logic_error("trial produced a connected graph with an isolated node");
  }
  return {1, connected ? 1u : 0u, isolated_free ? 1u : 0u};
}

// Both predicates are evaluated on every trial; their empirical coincidence
// is itself a quantity of interest. Trials are the parallel unit: graphs
// build in milliseconds, so finer grain would only add synchronization.
inline TrialTally run_trials(const ExperimentConfig& config, unsigned workers = 1) {
  if (workers <= 1 || config.trials == 1) {
    TrialTally tally;
    for (std::uint64_t t = 0; t < config.trials; ++t) {
      tally += run_single_trial(config, t);
    }
    return tally;
  }

  const unsigned thread_count =
      static_cast<unsigned>(std::min<std::uint64_t>(workers, config.trials));
  std::vector<TrialTally> partial(thread_count);
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (unsigned w = 0; w < thread_count; ++w) {
    pool.emplace_back([&, w] {
      TrialTally local;
      for (std::uint64_t t = next.fetch_add(1); t < config.trials; t = next.fetch_add(1)) {
        local += run_single_trial(config, t);
      }
      partial[w] = local;
    });
  }
  for (auto& th : pool) th.join();

  TrialTally tally;
  for (const auto& p : partial) tally += p;
  return tally;
}

enum class SweepAxis {
  K1,            // ring sizes K_j = value + offset_j
  AlphaEntry,    // alpha_ij = alpha_ji = value
  AlphaDiag,     // every alpha_ii = value
  ChannelScalar  // every alpha entry = value
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::K1;
  std::size_t entry_i = 0;  // AlphaEntry only
  std::size_t entry_j = 0;
  std::vector<double> values;               // non-empty, strictly monotone
  std::vector<std::uint32_t> ring_offsets;  // K1 axis only; offsets[0] == 0
  ExperimentConfig base;

  explicit SweepSpec(ExperimentConfig base_config) : base(std::move(base_config)) {}
};

struct SweepRow {
  double value = 0.0;
  TrialTally tally;
  double lambda_m = 0.0;   // Lambda_m of the materialized parameters
  double c_n = 0.0;        // n * Lambda_m / log(n)
  bool at_threshold = false;  // Lambda_m > log(n)/n
};

using SweepResult = std::vector<SweepRow>;

namespace detail {

inline void validate_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw ValidationError("sweep.values: must be non-empty");
  if (spec.values.size() > 1) {
    const bool increasing = spec.values[1] > spec.values[0];
    for (std::size_t i = 1; i < spec.values.size(); ++i) {
      const bool step_up = spec.values[i] > spec.values[i - 1];
      if (step_up != increasing || spec.values[i] == spec.values[i - 1]) {
        throw ValidationError("sweep.values: must be strictly monotone");
      }
    }
  }
  if (spec.base.n < 2) throw ValidationError("sweep: n must be >= 2");
  if (spec.axis == SweepAxis::K1) {
    const std::size_t r = spec.base.params.classes();
    if (spec.ring_offsets.size() != r) {
      throw ValidationError("sweep.offsets: must have one entry per class");
    }
    if (spec.ring_offsets.front() != 0) {
      throw ValidationError("sweep.offsets[0]: must be 0");
    }
    for (std::size_t i = 1; i < r; ++i) {
      if (spec.ring_offsets[i] < spec.ring_offsets[i - 1]) {
        throw ValidationError("sweep.offsets: must be non-decreasing");
      }
    }
  }
  if (spec.axis == SweepAxis::AlphaEntry) {
    const std::size_t r = spec.base.params.classes();
    if (spec.entry_i >= r || spec.entry_j >= r) {
      throw ValidationError("sweep: alpha entry index out of range");
    }
  }
}

}  // namespace detail

// Parameter tuple at one axis position. Validation errors surface here
// (e.g. a K1 value pushing a ring past the pool).
inline SystemParams materialize_axis(const SweepSpec& spec, double value) {
  const SystemParams& base = spec.base.params;
  switch (spec.axis) {
    case SweepAxis::K1: {
      if (value < 1.0 || value != std::floor(value)) {
        throw ValidationError("sweep K1 value: must be a positive integer");
      }
      std::vector<std::uint32_t> rings(base.classes());
      for (std::size_t i = 0; i < rings.size(); ++i) {
        rings[i] = static_cast<std::uint32_t>(value) + spec.ring_offsets[i];
      }
      return SystemParams(base.dist, KeyProfile(std::move(rings), base.keys.pool()),
                          base.channel);
    }
    case SweepAxis::AlphaEntry: {
      ChannelMatrix channel = base.channel;
      channel.set_symmetric(spec.entry_i, spec.entry_j, value);
      return SystemParams(base.dist, base.keys, std::move(channel));
    }
    case SweepAxis::AlphaDiag: {
      ChannelMatrix channel = base.channel;
      for (std::size_t i = 0; i < base.classes(); ++i) channel.set_symmetric(i, i, value);
      return SystemParams(base.dist, base.keys, std::move(channel));
    }
    case SweepAxis::ChannelScalar:
      return SystemParams(base.dist, base.keys,
                          ChannelMatrix::uniform(base.classes(), value));
  }
  throw ValidationError("sweep: unknown axis");
}

// One run_trials per axis value, annotated with the materialized Lambda_m
// and the finite-n threshold flag Lambda_m > log(n)/n. Every point reuses
// the same master seed, so a single-value sweep reproduces run_trials
// exactly.
inline SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 1) {
  detail::validate_sweep(spec);
  const auto n = spec.base.n;
  const double log_n = std::log(static_cast<double>(n));

  SweepResult rows;
  rows.reserve(spec.values.size());
  for (const double value : spec.values) {
    SystemParams params = materialize_axis(spec, value);
    const ExperimentConfig config(n, params, spec.base.trials, spec.base.master_seed);
    SweepRow row;
    row.value = value;
    row.tally = run_trials(config, workers);
    row.lambda_m = derive_all(params).min_mean_edge_prob();
    row.c_n = static_cast<double>(n) * row.lambda_m / log_n;
    row.at_threshold = row.lambda_m > log_n / static_cast<double>(n);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace keygraph
