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

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "keygraph/errors.hpp"
#include "keygraph/model.hpp"
#include "keygraph/params.hpp"

namespace keygraph {

// Raw output of a scaling rule at one n. Rule evaluation checks only what
// the formulas themselves guarantee (alpha entries in (0,1), K ordering);
// full parameter validation happens when a tuple is materialized into
// SystemParams.
struct RawTheta {
  std::vector<std::uint64_t> ring_sizes;
  std::uint64_t pool = 0;
  std::vector<double> alpha;  // row-major r x r
};

// Closed-form map n -> parameter tuple with a fixed class distribution.
struct ScalingFamily {
  std::string name;
  ClassDistribution mu;
  std::function<RawTheta(std::uint64_t)> rule;
};

namespace detail {

inline void check_raw_theta(const RawTheta& raw, std::uint64_t n) {
  for (std::size_t i = 1; i < raw.ring_sizes.size(); ++i) {
    if (raw.ring_sizes[i] < raw.ring_sizes[i - 1]) {
      throw ValidationError("scaling family: K ordering violated at n=" + std::to_string(n));
    }
  }
  for (double a : raw.alpha) {
    if (!(a > 0.0 && a < 1.0)) {
      throw ValidationError("scaling family: alpha entry " + std::to_string(a) +
                            " outside (0,1) at n=" + std::to_string(n));
    }
  }
}

}  // namespace detail

// Two-class family with pool P_n = ceil(n log n) and polylogarithmic ring
// and channel rules:
//   K_1 = ceil( (log n)^(1/2+eps) / sqrt(alpha_min(n)) )
//   K_2 = ceil( (1+eps) (log n)^(3/2-eps) / (mu_2 sqrt(alpha_min(n))) )
//   alpha = alpha_min(n) * [ (1+eps)(log n)^(1-2eps)/mu_1    1
//                             1      mu_2 (log n)^(1+2eps)/(1+eps) ]
// The alpha_min sequence is caller-supplied; it must map into (0,1) on the
// grid of interest. For large n this family sits in the one-law regime:
// every class's mean edge probability stays above log(n)/n.
inline ScalingFamily polylog_family(double epsilon, ClassDistribution mu,
                                    std::function<double(std::uint64_t)> alpha_min_rule) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ValidationError("epsilon: must lie in (0, 0.5)");
  }
  if (mu.classes() != 2) {
    throw ValidationError("polylog_family: requires exactly 2 classes");
  }
  const double mu1 = mu.weight(0);
  const double mu2 = mu.weight(1);

  auto rule_fn = [epsilon, mu1, mu2, rule = std::move(alpha_min_rule)](std::uint64_t n) {
    if (n < 2) throw ValidationError("polylog_family: n must be >= 2");
    const double log_n = std::log(static_cast<double>(n));
    const double amin = rule(n);
    if (!(amin > 0.0 && amin < 1.0)) {
      throw ValidationError("alpha_min(n): must lie in (0,1), got " + std::to_string(amin) +
                            " at n=" + std::to_string(n));
    }
    const double root = std::sqrt(amin);

    RawTheta raw;
    raw.pool = static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) * log_n));
    raw.ring_sizes = {
        static_cast<std::uint64_t>(std::ceil(std::pow(log_n, 0.5 + epsilon) / root)),
        static_cast<std::uint64_t>(
            std::ceil((1.0 + epsilon) * std::pow(log_n, 1.5 - epsilon) / (mu2 * root)))};
    raw.alpha = {amin * (1.0 + epsilon) * std::pow(log_n, 1.0 - 2.0 * epsilon) / mu1,
                 amin,
                 amin,
                 amin * mu2 * std::pow(log_n, 1.0 + 2.0 * epsilon) / (1.0 + epsilon)};
    detail::check_raw_theta(raw, n);
    return raw;
  };
  return ScalingFamily{"polylog", std::move(mu), std::move(rule_fn)};
}

// Degenerate family holding one parameter tuple at every n; useful as a
// contrast case in reports.
inline ScalingFamily constant_family(const SystemParams& params) {
  RawTheta raw;
  for (std::uint32_t k : params.keys.ring_sizes()) raw.ring_sizes.push_back(k);
  raw.pool = params.keys.pool();
  raw.alpha = params.channel.row_major();
  return ScalingFamily{"constant", params.dist,
                       [raw = std::move(raw)](std::uint64_t) { return raw; }};
}

// Materializes the family at n into a fully validated parameter tuple.
inline SystemParams materialize_params(const ScalingFamily& family, std::uint64_t n) {
  const RawTheta raw = family.rule(n);
  std::vector<std::uint32_t> rings;
  rings.reserve(raw.ring_sizes.size());
  for (std::uint64_t k : raw.ring_sizes) {
    if (k > 0xFFFFFFFFull) throw ValidationError("scaling family: ring size overflows");
    rings.push_back(static_cast<std::uint32_t>(k));
  }
  return SystemParams(family.mu, KeyProfile(std::move(rings), raw.pool),
                      ChannelMatrix(family.mu.classes(), raw.alpha));
}

// Finite-n diagnostics of the one-law hypotheses. These are numeric trends,
// never verdicts: the underlying conditions are limit statements and cannot
// be decided at finite n.
struct ConditionRow {
  std::uint64_t n = 0;
  double c_n = 0.0;            // n * Lambda_m / log n
  double pool_ratio = 0.0;     // P_n / n
  double edge_lb_ratio = 0.0;  // n * alpha_min * p_1r / log n
  double key_spread = 0.0;     // (K_r / K_1) / log n
  double alpha_spread = 0.0;   // (alpha_max / alpha_min) / (log n)^tau
  double lambda_m = 0.0;
  std::uint64_t k1 = 0;
  std::uint64_t kr = 0;
  std::uint64_t pool = 0;
};

struct TrendSummary {
  double min_value = 0.0;
  double first = 0.0;
  double last = 0.0;
  int slope_sign = 0;  // sign of (last - first)
};

struct ConditionReport {
  double tau = 2.0;
  std::vector<ConditionRow> rows;
  TrendSummary c_n, pool_ratio, edge_lb_ratio, key_spread, alpha_spread;
};

namespace detail {

template <typename Getter>
inline TrendSummary summarize_trend(const std::vector<ConditionRow>& rows, Getter get) {
  TrendSummary t;
  t.min_value = t.first = t.last = get(rows.front());
  for (const auto& row : rows) {
    const double v = get(row);
    if (v < t.min_value) t.min_value = v;
    t.last = v;
  }
  const double diff = t.last - t.first;
  t.slope_sign = (diff > 0.0) - (diff < 0.0);
  return t;
}

}  // namespace detail

inline ConditionReport evaluate_conditions(const ScalingFamily& family,
                                           const std::vector<std::uint64_t>& grid, double tau) {
  if (grid.empty()) throw ValidationError("grid: must be non-empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 3) throw ValidationError("grid: all n must be >= 3");
    if (i > 0 && grid[i] <= grid[i - 1]) throw ValidationError("grid: must be sorted ascending");
  }
  if (!(tau > 0.0)) throw ValidationError("tau: must be > 0");

  ConditionReport report;
  report.tau = tau;
  for (const std::uint64_t n : grid) {
    const SystemParams params = materialize_params(family, n);
    const DerivedProbabilities derived = derive_all(params);
    const double log_n = std::log(static_cast<double>(n));
    const std::size_t r = params.classes();

    ConditionRow row;
    row.n = n;
    row.lambda_m = derived.min_mean_edge_prob();
    row.c_n = static_cast<double>(n) * row.lambda_m / log_n;
    row.pool_ratio = static_cast<double>(params.keys.pool()) / static_cast<double>(n);
    row.edge_lb_ratio = static_cast<double>(n) * derived.alpha_min *
                        derived.pair_prob(0, r - 1) / log_n;
    row.key_spread = (static_cast<double>(params.keys.ring_size(r - 1)) /
                      static_cast<double>(params.keys.ring_size(0))) /
                     log_n;
    row.alpha_spread = (derived.alpha_max / derived.alpha_min) / std::pow(log_n, tau);
    row.k1 = params.keys.ring_size(0);
    row.kr = params.keys.ring_size(r - 1);
    row.pool = params.keys.pool();
    report.rows.push_back(row);
  }

  report.c_n = detail::summarize_trend(report.rows, [](const ConditionRow& r) { return r.c_n; });
  report.pool_ratio =
      detail::summarize_trend(report.rows, [](const ConditionRow& r) { return r.pool_ratio; });
  report.edge_lb_ratio =
      detail::summarize_trend(report.rows, [](const ConditionRow& r) { return r.edge_lb_ratio; });
  report.key_spread =
      detail::summarize_trend(report.rows, [](const ConditionRow& r) { return r.key_spread; });
  report.alpha_spread =
      detail::summarize_trend(report.rows, [](const ConditionRow& r) { return r.alpha_spread; });
  return report;
}

// Near-threshold band diagnostics: n * alpha_min * p_1r / log n should sit
// in a bounded band when the one-law hypotheses hold, and K_1 should grow
// without bound.
struct EdgeBoundRow {
  std::uint64_t n = 0;
  double edge_lb_ratio = 0.0;
  std::uint64_t k1 = 0;
};

inline std::vector<EdgeBoundRow> edge_bound_diagnostics(const ScalingFamily& family,
                                               const std::vector<std::uint64_t>& grid) {
  std::vector<EdgeBoundRow> rows;
  rows.reserve(grid.size());
  for (const std::uint64_t n : grid) {
    if (n < 3) throw ValidationError("grid: all n must be >= 3");
    const SystemParams params = materialize_params(family, n);
    const DerivedProbabilities derived = derive_all(params);
    EdgeBoundRow row;
    row.n = n;
    row.edge_lb_ratio = static_cast<double>(n) * derived.alpha_min *
                        derived.pair_prob(0, params.classes() - 1) /
                        std::log(static_cast<double>(n));
    row.k1 = params.keys.ring_size(0);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace keygraph
