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
#include <utility>
#include <vector>

#include "keygraph/errors.hpp"

namespace keygraph {

// Undirected simple graph as a normalized edge list plus per-node degrees.
// Degrees are tracked at insertion time; component analysis alone cannot
// recover degree-0 nodes afterwards.
class SampledGraph {
 public:
  using Edge = std::pair<std::uint32_t, std::uint32_t>;

  explicit SampledGraph(std::size_t node_count)
      : n_(node_count), degree_(node_count, 0) {}

  std::size_t nodes() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::uint32_t degree(std::uint32_t v) const { return degree_.at(v); }
  const std::vector<std::uint32_t>& degrees() const { return degree_; }

  // Stores (min, max); self-loops are rejected. Builders visit each
  // unordered pair once, which keeps the list duplicate-free.
  void add_edge(std::uint32_t u, std::uint32_t v) {
    if (u == v) throw ValidationError("graph: self-loops are not allowed");
    if (u >= n_ || v >= n_) throw ValidationError("graph: node index out of range");
    if (u > v) std::swap(u, v);
    edges_.emplace_back(u, v);
    ++degree_[u];
    ++degree_[v];
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> degree_;
};

}  // namespace keygraph
