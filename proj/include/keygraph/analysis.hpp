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

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "keygraph/errors.hpp"
#include "keygraph/graph.hpp"

namespace keygraph {

struct ComponentSummary {
  std::size_t component_count = 0;
  std::size_t isolated_count = 0;
  std::size_t largest_component = 0;
};

namespace detail {

// Union-find with path compression and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t v) {
    std::size_t root = v;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[v] != root) {
      const std::size_t next = parent_[v];
      parent_[v] = root;
      v = next;
    }
    return root;
  }

  // Returns true when two components merged.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t component_size(std::size_t v) { return size_[find(v)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace detail

// Component structure of a sampled graph. Insertion order of edges does
// not affect the result.
inline ComponentSummary summarize(const SampledGraph& g) {
  const std::size_t n = g.nodes();
  if (n == 0) throw ValidationError("summarize: graph must have at least one node");

  detail::DisjointSets sets(n);
  std::size_t components = n;
  for (const auto& [u, v] : g.edges()) {
    if (sets.unite(u, v)) --components;
  }

  ComponentSummary s;
  s.component_count = components;
  for (std::uint32_t d : g.degrees()) {
    if (d == 0) ++s.isolated_count;
  }
  for (std::size_t v = 0; v < n; ++v) {
    s.largest_component = std::max(s.largest_component, sets.component_size(v));
  }
  return s;
}

// Single-node graphs count as connected; the predicate has to total even
// though the regime of interest is large n.
inline bool is_connected(const SampledGraph& g) {
  return summarize(g).component_count == 1;
}

inline bool has_no_isolated(const SampledGraph& g) {
  if (g.nodes() == 0) throw ValidationError("has_no_isolated: graph must have at least one node");
  for (std::uint32_t d : g.degrees()) {
    if (d == 0) return false;
  }
  return true;
}

}  // namespace keygraph
