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

namespace keygraph {

// Class indices are 0-based throughout the library; the CLI converts to
// 1-based labels at the presentation boundary.

// Node-class mixing distribution: mu_i > 0, sum mu_i = 1.
class ClassDistribution {
 public:
  explicit ClassDistribution(std::vector<double> mu) : mu_(std::move(mu)) {
    if (mu_.empty()) throw ValidationError("mu: must have at least one class");
    double sum = 0.0;
    for (std::size_t i = 0; i < mu_.size(); ++i) {
      if (!(mu_[i] > 0.0)) {
        throw ValidationError("mu[" + std::to_string(i) + "]: must be > 0");
      }
      sum += mu_[i];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ValidationError("mu: entries sum to " + std::to_string(sum) +
                            ", expected 1 within 1e-12");
    }
  }

  std::size_t classes() const { return mu_.size(); }
  double weight(std::size_t i) const { return mu_.at(i); }
  const std::vector<double>& weights() const { return mu_; }

 private:
  std::vector<double> mu_;
};

// Per-class key ring sizes plus the pool they are drawn from.
// K must be non-decreasing and each K_i must fit in the pool.
class KeyProfile {
 public:
  KeyProfile(std::vector<std::uint32_t> ring_sizes, std::uint64_t pool_size)
      : k_(std::move(ring_sizes)), pool_(pool_size) {
    if (k_.empty()) throw ValidationError("K: must have at least one class");
    if (pool_ == 0) throw ValidationError("P: pool size must be positive");
    for (std::size_t i = 0; i < k_.size(); ++i) {
      if (k_[i] == 0) throw ValidationError("K[" + std::to_string(i) + "]: must be positive");
      if (k_[i] > pool_) {
        throw ValidationError("K[" + std::to_string(i) + "]: exceeds pool size P");
      }
      if (i > 0 && k_[i] < k_[i - 1]) {
        throw ValidationError("K: ring sizes must be non-decreasing (violated at index " +
                              std::to_string(i) + ")");
      }
    }
  }

  std::size_t classes() const { return k_.size(); }
  std::uint32_t ring_size(std::size_t i) const { return k_.at(i); }
  const std::vector<std::uint32_t>& ring_sizes() const { return k_; }
  std::uint64_t pool() const { return pool_; }

  // Scaling-mode constraint: the largest ring may use at most half the pool.
  void validate_strict() const {
    if (2 * static_cast<std::uint64_t>(k_.back()) > pool_) {
      throw ValidationError("K[" + std::to_string(k_.size() - 1) +
                            "]: strict mode requires K_r <= P/2");
    }
  }

 private:
  std::vector<std::uint32_t> k_;
  std::uint64_t pool_;
};

// Symmetric r x r matrix of channel-on probabilities. Entries live in the
// closed interval [0,1]; sweeps drive them through the endpoints, so only
// strict (scaling) mode demands the open interval.
class ChannelMatrix {
 public:
  ChannelMatrix(std::size_t classes, std::vector<double> row_major)
      : r_(classes), a_(std::move(row_major)) {
    if (r_ == 0) throw ValidationError("alpha: must have at least one class");
    if (a_.size() != r_ * r_) {
      throw ValidationError("alpha: expected " + std::to_string(r_ * r_) +
                            " row-major entries, got " + std::to_string(a_.size()));
    }
    for (std::size_t i = 0; i < r_; ++i) {
      for (std::size_t j = 0; j < r_; ++j) {
        const double v = a_[i * r_ + j];
        if (!(v >= 0.0 && v <= 1.0)) {
          throw ValidationError("alpha[" + std::to_string(i) + "][" + std::to_string(j) +
                                "]: outside [0,1]");
        }
        if (j < i && a_[i * r_ + j] != a_[j * r_ + i]) {
          throw ValidationError("alpha: not symmetric at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
        }
      }
    }
  }

  // Uniform matrix (every entry the same probability).
  static ChannelMatrix uniform(std::size_t classes, double value) {
    return ChannelMatrix(classes, std::vector<double>(classes * classes, value));
  }

  std::size_t classes() const { return r_; }
  double at(std::size_t i, std::size_t j) const { return a_.at(i * r_ + j); }
  const std::vector<double>& row_major() const { return a_; }

  void set_symmetric(std::size_t i, std::size_t j, double value) {
    if (i >= r_ || j >= r_) throw ValidationError("alpha: index out of range");
    if (!(value >= 0.0 && value <= 1.0)) {
      throw ValidationError("alpha[" + std::to_string(i) + "][" + std::to_string(j) +
                            "]: outside [0,1]");
    }
    a_[i * r_ + j] = value;
    a_[j * r_ + i] = value;
  }

  void validate_strict() const {
    for (std::size_t i = 0; i < r_; ++i) {
      for (std::size_t j = 0; j < r_; ++j) {
        const double v = a_[i * r_ + j];
        if (!(v > 0.0 && v < 1.0)) {
          throw ValidationError("alpha[" + std::to_string(i) + "][" + std::to_string(j) +
                                "]: strict mode requires entries in open (0,1)");
        }
      }
    }
  }

 private:
  std::size_t r_;
  std::vector<double> a_;
};

// Full parameter tuple for one network instance.
struct SystemParams {
  ClassDistribution dist;
  KeyProfile keys;
  ChannelMatrix channel;

  SystemParams(ClassDistribution d, KeyProfile k, ChannelMatrix c)
      : dist(std::move(d)), keys(std::move(k)), channel(std::move(c)) {
    if (dist.classes() != keys.classes() || dist.classes() != channel.classes()) {
      throw ValidationError("params: mu, K, alpha must agree on the class count r");
    }
  }

  std::size_t classes() const { return dist.classes(); }

  // Theorem-hypothesis mode: K_r <= P/2 and alpha in open (0,1).
  void validate_strict() const {
    keys.validate_strict();
    channel.validate_strict();
  }
};

}  // namespace keygraph
