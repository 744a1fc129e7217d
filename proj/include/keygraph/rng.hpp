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
#include <random>
#include <vector>

#include "keygraph/errors.hpp"

namespace keygraph {

// Counter-based seed derivation: splitmix64 finalizer applied to
// master + (index + 1) * golden gamma. For a fixed master the map
// index -> seed is a composition of injections, so derived seeds from
// one master never collide. Results do not depend on evaluation order,
// which is what makes trial-level parallelism reproducible.
inline std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t z = master_seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Exactly one generator call per draw, uniform in [0, 1). Implemented by
// hand so byte-for-byte reproducibility does not hinge on a particular
// standard library's distribution code.
inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) via Lemire's multiply-reject method.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  using u128 = unsigned __int128;
  u128 m = static_cast<u128>(rng()) * bound;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (lo < threshold) {
      m = static_cast<u128>(rng()) * bound;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

namespace detail {

// Scratch for the dense sampling path. thread_local gives exactly one
// pool-sized array per worker thread, reused across every ring drawn by
// that worker. The permutation is restored to identity after each ring,
// so it never has to be rebuilt while the pool size stays the same.
struct RingScratch {
  std::vector<std::uint32_t> perm;
  std::vector<std::uint32_t> picks;
  std::uint64_t pool = 0;
};

inline RingScratch& ring_scratch() {
  thread_local RingScratch scratch;
  return scratch;
}

}  // namespace detail

// Draws a uniform k-subset of {0, ..., pool-1}, sorted ascending, into `out`.
//
// Sparse rings (k/pool <= 1/64) use rejection sampling into a sorted buffer;
// dense rings use a partial Fisher-Yates shuffle over a shared index array
// whose swaps are undone afterwards. Neither path allocates pool-sized
// scratch per ring.
inline void sample_ring(std::uint64_t k, std::uint64_t pool, std::mt19937_64& rng,
                        std::vector<std::uint32_t>& out) {
  if (k == 0 || k > pool) {
    throw ValidationError("sample_ring: ring size must satisfy 1 <= k <= pool");
  }
  out.clear();
  out.reserve(k);

  if (k * 64 <= pool) {
    // Rejection path: collisions are rare at this density.
    while (out.size() < k) {
      const auto v = static_cast<std::uint32_t>(uniform_below(rng, pool));
      auto it = std::lower_bound(out.begin(), out.end(), v);
      if (it == out.end() || *it != v) out.insert(it, v);
    }
    return;
  }

  auto& scratch = detail::ring_scratch();
  if (scratch.pool != pool) {
    scratch.perm.resize(pool);
    std::iota(scratch.perm.begin(), scratch.perm.end(), 0u);
    scratch.pool = pool;
  }
  scratch.picks.clear();
  for (std::uint64_t i = 0; i < k; ++i) {
    const auto j = i + uniform_below(rng, pool - i);
    std::swap(scratch.perm[i], scratch.perm[j]);
    scratch.picks.push_back(static_cast<std::uint32_t>(j));
  }
  out.assign(scratch.perm.begin(), scratch.perm.begin() + static_cast<std::ptrdiff_t>(k));
  // Undo the swaps in reverse so the array is the identity again.
  for (std::uint64_t i = k; i-- > 0;) {
    std::swap(scratch.perm[i], scratch.perm[scratch.picks[i]]);
  }
  std::sort(out.begin(), out.end());
}

}  // namespace keygraph
