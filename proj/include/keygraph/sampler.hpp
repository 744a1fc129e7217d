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

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "keygraph/errors.hpp"
#include "keygraph/graph.hpp"
#include "keygraph/params.hpp"
#include "keygraph/rng.hpp"

namespace keygraph {

// Per-node class labels and sampled key rings. Rings are sorted so pair
// tests are O(K_i + K_j) merges.
struct NodeAssignment {
  std::vector<std::uint32_t> classes;             // 0-based class per node
  std::vector<std::vector<std::uint32_t>> rings;  // sorted key ids, each < P

  bool operator==(const NodeAssignment&) const = default;
};

// i.i.d. class draws from mu, one uniform per node.
inline std::vector<std::uint32_t> assign_classes(std::size_t n, const ClassDistribution& dist,
                                                 std::mt19937_64& rng) {
  if (n == 0) throw ValidationError("assign_classes: n must be >= 1");
  std::vector<std::uint32_t> classes(n);
  const std::size_t r = dist.classes();
  for (std::size_t x = 0; x < n; ++x) {
    const double u = uniform_double(rng);
    double cumulative = 0.0;
    std::uint32_t chosen = static_cast<std::uint32_t>(r - 1);
    for (std::size_t i = 0; i < r; ++i) {
      cumulative += dist.weight(i);
      if (u < cumulative) {
        chosen = static_cast<std::uint32_t>(i);
        break;
      }
    }
    classes[x] = chosen;
  }
  return classes;
}

// Independent uniform K_{t_x}-subsets of the pool, one per node.
inline std::vector<std::vector<std::uint32_t>> sample_key_rings(
    const std::vector<std::uint32_t>& classes, const KeyProfile& keys, std::mt19937_64& rng) {
  std::vector<std::vector<std::uint32_t>> rings(classes.size());
  for (std::size_t x = 0; x < classes.size(); ++x) {
    if (classes[x] >= keys.classes()) {
      throw ValidationError("sample_key_rings: class index out of range");
    }
    sample_ring(keys.ring_size(classes[x]), keys.pool(), rng, rings[x]);
  }
  return rings;
}

inline NodeAssignment sample_assignment(std::size_t n, const SystemParams& params,
                                        std::mt19937_64& rng) {
  NodeAssignment a;
  a.classes = assign_classes(n, params.dist, rng);
  a.rings = sample_key_rings(a.classes, params.keys, rng);
  return a;
}

// Merge-scan over sorted ranges, early exit on the first shared id.
inline bool ranges_intersect(const std::uint32_t* a, const std::uint32_t* a_end,
                             const std::uint32_t* b, const std::uint32_t* b_end) {
  while (a != a_end && b != b_end) {
    const std::uint32_t va = *a;
    const std::uint32_t vb = *b;
    if (va == vb) return true;
    a += va < vb;
    b += vb < va;
  }
  return false;
}

inline bool rings_intersect(const std::vector<std::uint32_t>& a,
                            const std::vector<std::uint32_t>& b) {
  return ranges_intersect(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

// Key graph: edge iff the rings share at least one id. Consumes no
// randomness.
inline SampledGraph build_key_graph(const NodeAssignment& assignment) {
  const std::size_t n = assignment.classes.size();
  SampledGraph g(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t y = x + 1; y < n; ++y) {
      if (rings_intersect(assignment.rings[x], assignment.rings[y])) g.add_edge(x, y);
    }
  }
  return g;
}

// On-off channel graph: each unordered pair drawn once as
// Bernoulli(alpha_{t_x t_y}), exactly one uniform per pair, pairs visited
// in (x, y) lexicographic order.
inline SampledGraph build_channel_graph(const std::vector<std::uint32_t>& classes,
                                        const ChannelMatrix& channel, std::mt19937_64& rng) {
  const std::size_t n = classes.size();
  SampledGraph g(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t y = x + 1; y < n; ++y) {
      const double a = channel.at(classes[x], classes[y]);
      if (uniform_double(rng) < a) g.add_edge(x, y);
    }
  }
  return g;
}

namespace detail {

// Per-worker scratch for the dense build path: key buckets plus a packed
// key-adjacency bit matrix, reused across trials.
struct IntersectScratch {
  std::vector<std::uint32_t> bucket_begin;
  std::vector<std::uint32_t> bucket_cursor;
  std::vector<std::uint32_t> bucket_nodes;
  std::vector<std::uint64_t> key_adjacency;
};

inline IntersectScratch& intersect_scratch() {
  thread_local IntersectScratch scratch;
  return scratch;
}

}  // namespace detail

// Fused intersection build. Visits every unordered pair once, draws the
// channel variable first (one uniform, unconditionally), and tests key
// intersection only when the channel is on; the two graph layers are
// independent, so ordering does not change the distribution. The pair
// order and draw discipline match build_channel_graph exactly, which is
// what lets tests replay a fused run against separately built layers on
// the same stream. The assignment is returned for audit.
//
// Two performance shortcuts keep realizations bit-identical to the plain
// uniform_double / rings_intersect formulation:
//   - the channel test compares the raw 53-bit draw against
//     ceil(alpha * 2^53), which decides (draw * 2^-53 < alpha) exactly;
//   - for moderate n and pool sizes the pairwise ring merges are replaced
//     by one key->nodes inverted index whose per-key node groups mark a
//     packed adjacency bit matrix, so the pair loop tests key adjacency in
//     O(1). Both paths compute the same predicate from the same rings.
inline std::pair<NodeAssignment, SampledGraph> build_intersection(std::size_t n,
                                                                  const SystemParams& params,
                                                                  std::mt19937_64& rng) {
  NodeAssignment assignment = sample_assignment(n, params, rng);
  SampledGraph g(n);
  const std::size_t r = params.classes();
  const std::uint64_t pool = params.keys.pool();

  std::vector<std::uint64_t> channel_threshold(r * r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      channel_threshold[i * r + j] =
          static_cast<std::uint64_t>(std::ceil(std::ldexp(params.channel.at(i, j), 53)));
    }
  }
  const std::uint32_t* classes = assignment.classes.data();

  // The bit matrix costs n^2/8 bytes and the buckets one slot per pool key;
  // outside these bounds fall back to per-pair merges.
  const bool dense_path = n <= 4096 && pool <= (1ull << 22);
  if (dense_path) {
    auto& scratch = detail::intersect_scratch();
    scratch.bucket_begin.assign(pool + 1, 0);
    std::size_t total_ids = 0;
    for (const auto& ring : assignment.rings) {
      total_ids += ring.size();
      for (std::uint32_t id : ring) ++scratch.bucket_begin[id + 1];
    }
    for (std::uint64_t k = 0; k < pool; ++k) {
      scratch.bucket_begin[k + 1] += scratch.bucket_begin[k];
    }
    scratch.bucket_cursor.assign(scratch.bucket_begin.begin(), scratch.bucket_begin.end() - 1);
    scratch.bucket_nodes.resize(total_ids);
    for (std::uint32_t x = 0; x < n; ++x) {
      for (std::uint32_t id : assignment.rings[x]) {
        scratch.bucket_nodes[scratch.bucket_cursor[id]++] = x;
      }
    }

    const std::size_t words = (n * n + 63) / 64;
    scratch.key_adjacency.assign(words, 0);
    for (std::uint64_t k = 0; k < pool; ++k) {
      const std::uint32_t begin = scratch.bucket_begin[k];
      const std::uint32_t end = scratch.bucket_begin[k + 1];
      for (std::uint32_t i = begin; i < end; ++i) {
        const std::size_t row_base = static_cast<std::size_t>(scratch.bucket_nodes[i]) * n;
        for (std::uint32_t j = i + 1; j < end; ++j) {
          const std::size_t bit = row_base + scratch.bucket_nodes[j];
          scratch.key_adjacency[bit >> 6] |= 1ull << (bit & 63);
        }
      }
    }

    const std::uint64_t* adjacency = scratch.key_adjacency.data();
    for (std::uint32_t x = 0; x < n; ++x) {
      const std::uint64_t* row = channel_threshold.data() + classes[x] * r;
      const std::size_t row_base = static_cast<std::size_t>(x) * n;
      for (std::uint32_t y = x + 1; y < n; ++y) {
        if ((rng() >> 11) < row[classes[y]]) {
          const std::size_t bit = row_base + y;
          if (adjacency[bit >> 6] >> (bit & 63) & 1) g.add_edge(x, y);
        }
      }
    }
    return {std::move(assignment), std::move(g)};
  }

  for (std::uint32_t x = 0; x < n; ++x) {
    const std::uint64_t* row = channel_threshold.data() + classes[x] * r;
    for (std::uint32_t y = x + 1; y < n; ++y) {
      if ((rng() >> 11) < row[classes[y]] &&
          rings_intersect(assignment.rings[x], assignment.rings[y])) {
        g.add_edge(x, y);
      }
    }
  }
  return {std::move(assignment), std::move(g)};
}

}  // namespace keygraph
