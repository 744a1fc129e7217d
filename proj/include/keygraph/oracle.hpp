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

// Brute-force reference implementations. These deliberately avoid the
// closed-form code paths they are used to verify.

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include "keygraph/errors.hpp"
#include "keygraph/graph.hpp"
#include "keygraph/params.hpp"
#include "keygraph/rng.hpp"
#include "keygraph/sampler.hpp"

namespace keygraph::oracle {

// Probability that two independent uniform rings (sizes ki, kj) from a pool
// of size P intersect, by enumerating every ordered subset pair as a
// bitmask. Exact integer counts, one division at the boundary. The P <= 12
// cap keeps the enumeration around 1e7 pairs.
inline double exhaustive_key_prob(unsigned ki, unsigned kj, unsigned pool) {
  if (pool == 0 || pool > 12) {
    throw ValidationError("exhaustive_key_prob: requires 1 <= P <= 12");
  }
  if (ki == 0 || kj == 0 || ki > pool || kj > pool) {
    throw ValidationError("exhaustive_key_prob: requires 1 <= K_i, K_j <= P");
  }

  std::vector<std::uint32_t> a_masks, b_masks;
  for (std::uint32_t mask = 0; mask < (1u << pool); ++mask) {
    const auto bits = static_cast<unsigned>(std::popcount(mask));
    if (bits == ki) a_masks.push_back(mask);
    if (bits == kj) b_masks.push_back(mask);
  }

  std::uint64_t intersecting = 0;
  for (std::uint32_t a : a_masks) {
    for (std::uint32_t b : b_masks) {
      if ((a & b) != 0) ++intersecting;
    }
  }
  const std::uint64_t total =
      static_cast<std::uint64_t>(a_masks.size()) * b_masks.size();
  return static_cast<double>(intersecting) / static_cast<double>(total);
}

// Component count by depth-first traversal; reference for union-find.
inline std::size_t dfs_component_count(const SampledGraph& g) {
  const std::size_t n = g.nodes();
  if (n > 64) throw ValidationError("dfs_component_count: requires n <= 64");

  std::vector<std::vector<std::uint32_t>> adjacency(n);
  for (const auto& [u, v] : g.edges()) {
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }

  std::vector<bool> visited(n, false);
  std::vector<std::uint32_t> stack;
  std::size_t components = 0;
  for (std::uint32_t start = 0; start < n; ++start) {
    if (visited[start]) continue;
    ++components;
    visited[start] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::uint32_t v = stack.back();
      stack.pop_back();
      for (std::uint32_t w : adjacency[v]) {
        if (!visited[w]) {
          visited[w] = true;
          stack.push_back(w);
        }
      }
    }
  }
  return components;
}

// Empirical adjacency frequency for a class-(i, j) pair: draws fresh rings
// and a fresh channel coin per sample. Reference for alpha_ij * p_ij.
inline double empirical_edge_freq(const SystemParams& params, std::size_t i, std::size_t j,
                                  std::uint64_t samples, std::mt19937_64& rng) {
  if (samples < 10000) {
    throw ValidationError("empirical_edge_freq: needs at least 1e4 samples");
  }
  if (i >= params.classes() || j >= params.classes()) {
    throw ValidationError("empirical_edge_freq: class index out of range");
  }
  const double alpha = params.channel.at(i, j);
  std::vector<std::uint32_t> ring_a, ring_b;
  std::uint64_t adjacent = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    sample_ring(params.keys.ring_size(i), params.keys.pool(), rng, ring_a);
    sample_ring(params.keys.ring_size(j), params.keys.pool(), rng, ring_b);
    const double u = uniform_double(rng);
    if (u < alpha && rings_intersect(ring_a, ring_b)) ++adjacent;
  }
  return static_cast<double>(adjacent) / static_cast<double>(samples);
}

}  // namespace keygraph::oracle
