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
#include <string>
#include <vector>

#include "keygraph/errors.hpp"
#include "keygraph/params.hpp"

namespace keygraph {

namespace detail {

// log of the binomial ratio C(P-m, k) / C(P, k), computed as the product
// form sum_{l=0}^{m-1} log(1 - k/(P-l)). Pools of 1e4..1e6 overflow direct
// factorials, while the log-space product keeps relative error near 1e-12.
// Requires m + k <= P so every factor stays positive.
inline double log_disjoint_ratio(std::uint64_t m, std::uint64_t k, std::uint64_t pool) {
  double acc = 0.0;
  for (std::uint64_t l = 0; l < m; ++l) {
    acc += std::log1p(-static_cast<double>(k) / static_cast<double>(pool - l));
  }
  return acc;
}

inline void check_class_index(std::size_t i, std::size_t r, const char* name) {
  if (i >= r) {
    throw ValidationError(std::string(name) + ": class index " + std::to_string(i) +
                          " out of range [0," + std::to_string(r) + ")");
  }
}

}  // namespace detail

// Probability that a class-i ring and a class-j ring share at least one key:
// 1 exactly when K_i + K_j > P, otherwise 1 - C(P-K_i, K_j)/C(P, K_j).
// The ratio is symmetric in (i, j); we iterate over the smaller ring.
inline double pairwise_key_prob(std::size_t i, std::size_t j, const KeyProfile& keys) {
  detail::check_class_index(i, keys.classes(), "pairwise_key_prob");
  detail::check_class_index(j, keys.classes(), "pairwise_key_prob");
  std::uint64_t ki = keys.ring_size(i);
  std::uint64_t kj = keys.ring_size(j);
  const std::uint64_t pool = keys.pool();
  if (ki + kj > pool) return 1.0;
  if (ki > kj) std::swap(ki, kj);
  return -std::expm1(detail::log_disjoint_ratio(ki, kj, pool));
}

// Mean key-sharing probability for a class-i node: lambda_i = sum_j mu_j p_ij.
inline double mean_key_prob(std::size_t i, const SystemParams& params) {
  detail::check_class_index(i, params.classes(), "mean_key_prob");
  double acc = 0.0;
  for (std::size_t j = 0; j < params.classes(); ++j) {
    acc += params.dist.weight(j) * pairwise_key_prob(i, j, params.keys);
  }
  return acc;
}

// Mean edge probability for a class-i node in the intersection graph:
// Lambda_i = sum_j mu_j alpha_ij p_ij.
inline double mean_edge_prob(std::size_t i, const SystemParams& params) {
  detail::check_class_index(i, params.classes(), "mean_edge_prob");
  double acc = 0.0;
  for (std::size_t j = 0; j < params.classes(); ++j) {
    acc += params.dist.weight(j) * params.channel.at(i, j) *
           pairwise_key_prob(i, j, params.keys);
  }
  return acc;
}

// Everything derivable in closed form from one parameter tuple.
// m minimizes Lambda, d maximizes alpha_mj, s maximizes alpha_mj * p_mj;
// all argmin/argmax ties break toward the lowest class index so repeated
// runs produce identical tables.
struct DerivedProbabilities {
  std::size_t r = 0;
  std::vector<double> p;       // r x r, row-major
  std::vector<double> lambda;  // mean key-sharing probability per class
  std::vector<double> Lambda;  // mean edge probability per class
  std::size_t m = 0;
  std::size_t d = 0;
  std::size_t s = 0;
  double alpha_min = 0.0;
  double alpha_max = 0.0;

  double pair_prob(std::size_t i, std::size_t j) const { return p.at(i * r + j); }
  double min_mean_edge_prob() const { return Lambda.at(m); }
};

inline DerivedProbabilities derive_all(const SystemParams& params) {
  const std::size_t r = params.classes();
  DerivedProbabilities out;
  out.r = r;
  out.p.resize(r * r);
  out.lambda.assign(r, 0.0);
  out.Lambda.assign(r, 0.0);

  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      out.p[i * r + j] = (j < i) ? out.p[j * r + i] : pairwise_key_prob(i, j, params.keys);
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const double pij = out.p[i * r + j];
      out.lambda[i] += params.dist.weight(j) * pij;
      out.Lambda[i] += params.dist.weight(j) * params.channel.at(i, j) * pij;
    }
  }

  out.m = 0;
  for (std::size_t i = 1; i < r; ++i) {
    if (out.Lambda[i] < out.Lambda[out.m]) out.m = i;
  }
  out.d = 0;
  out.s = 0;
  for (std::size_t j = 1; j < r; ++j) {
    if (params.channel.at(out.m, j) > params.channel.at(out.m, out.d)) out.d = j;
    const double w = params.channel.at(out.m, j) * out.p[out.m * r + j];
    if (w > params.channel.at(out.m, out.s) * out.p[out.m * r + out.s]) out.s = j;
  }

  out.alpha_min = out.alpha_max = params.channel.at(0, 0);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const double a = params.channel.at(i, j);
      if (a < out.alpha_min) out.alpha_min = a;
      if (a > out.alpha_max) out.alpha_max = a;
    }
  }
  return out;
}

// Smallest K_1 whose induced parameter tuple satisfies the finite-n
// connectivity condition Lambda_m > log(n) / n, with K_j = K_1 + offset_j.
// The minimizing class m is re-derived at every candidate because it can
// move as the rings grow. Throws NoSolutionError when no candidate fits
// the pool.
inline std::uint32_t critical_k1(std::uint64_t n, const ClassDistribution& dist,
                                 const ChannelMatrix& channel,
                                 const std::vector<std::uint32_t>& ring_offsets,
                                 std::uint64_t pool) {
  const std::size_t r = dist.classes();
  if (n < 2) throw ValidationError("critical_k1: n must be >= 2");
  if (channel.classes() != r || ring_offsets.size() != r) {
    throw ValidationError("critical_k1: mu, alpha, offsets must agree on r");
  }
  if (ring_offsets.front() != 0) {
    throw ValidationError("offsets[0]: must be 0 (K_1 anchors the scan)");
  }
  for (std::size_t i = 1; i < r; ++i) {
    if (ring_offsets[i] < ring_offsets[i - 1]) {
      throw ValidationError("offsets: must be non-decreasing (violated at index " +
                            std::to_string(i) + ")");
    }
  }

  const double threshold = std::log(static_cast<double>(n)) / static_cast<double>(n);
  for (std::uint64_t k1 = 1; k1 + ring_offsets.back() <= pool; ++k1) {
    std::vector<std::uint32_t> rings(r);
    for (std::size_t i = 0; i < r; ++i) {
      rings[i] = static_cast<std::uint32_t>(k1 + ring_offsets[i]);
    }
    const SystemParams candidate(dist, KeyProfile(std::move(rings), pool), channel);
    if (derive_all(candidate).min_mean_edge_prob() > threshold) {
      return static_cast<std::uint32_t>(k1);
    }
  }
  throw NoSolutionError("critical_k1: no K_1 with K_1 + max offset <= P satisfies "
                        "Lambda_m > log(n)/n");
}

// Closed-form bracket for p_ij when K_i + K_j <= P:
//   1 - exp(-K_i K_j / P)  <=  p_ij  <=  K_i K_j / (P - K_i).
// The upper bound is returned raw and may exceed 1; clamp at use sites.
struct EdgeProbBounds {
  double lower;
  double upper;
};

inline EdgeProbBounds edge_prob_bounds(std::size_t i, std::size_t j, const KeyProfile& keys) {
  detail::check_class_index(i, keys.classes(), "edge_prob_bounds");
  detail::check_class_index(j, keys.classes(), "edge_prob_bounds");
  const auto ki = static_cast<double>(keys.ring_size(i));
  const auto kj = static_cast<double>(keys.ring_size(j));
  const auto pool = static_cast<double>(keys.pool());
  if (ki + kj > pool) {
    throw ValidationError("edge_prob_bounds: requires K_i + K_j <= P");
  }
  return {-std::expm1(-ki * kj / pool), ki * kj / (pool - ki)};
}

// Checks the subset-ratio power inequality
//   C(P - ceil(a K_i), K_j)/C(P, K_j)  <=  ( C(P - K_i, K_j)/C(P, K_j) )^a
// for any scalar a >= 1 (real-valued ceil). Always true mathematically;
// exposed so the property suite can fuzz it. Comparison allows a
// floating-point slack of 1e-9 relative.
inline bool combinatorial_bound_check(double a, std::size_t i, std::size_t j,
                                      const KeyProfile& keys) {
  detail::check_class_index(i, keys.classes(), "combinatorial_bound_check");
  detail::check_class_index(j, keys.classes(), "combinatorial_bound_check");
  if (!(a >= 1.0)) throw ValidationError("combinatorial_bound_check: scalar a must be >= 1");
  const std::uint64_t ki = keys.ring_size(i);
  const std::uint64_t kj = keys.ring_size(j);
  const std::uint64_t pool = keys.pool();
  const auto scaled = static_cast<std::uint64_t>(
      std::ceil(a * static_cast<double>(ki)));
  if (scaled + kj > pool) {
    throw ValidationError("combinatorial_bound_check: requires ceil(a K_i) + K_j <= P");
  }
  const double lhs_log = detail::log_disjoint_ratio(scaled, kj, pool);
  const double rhs_log = a * detail::log_disjoint_ratio(ki, kj, pool);
  return lhs_log <= rhs_log + std::abs(rhs_log) * 1e-9 + 1e-12;
}

}  // namespace keygraph
