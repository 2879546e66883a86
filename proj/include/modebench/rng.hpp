// Copyright 2026 The modebench Authors
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

#ifndef MODEBENCH_RNG_HPP
#define MODEBENCH_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace modebench {

/// One application of the Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based random stream keyed by a master seed and a path of indices.
///
/// The output is a pure function of (master_seed, path): the path is hashed
/// into a Philox key and draws are produced by encrypting an incrementing
/// counter. Sibling streams obtained through child() never share state, so
/// the order in which they are consumed does not affect any of them.
///
/// Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t master_seed, std::vector<std::uint64_t> path = {});

  /// Stream whose path is this path extended by `index`, starting fresh.
  [[nodiscard]] RngStream child(std::uint64_t index) const;

  result_type operator()();

  /// Uniform draw in the open interval (0, 1).
  double uniform();

  /// Standard normal draw (Box-Muller, second variate cached).
  double normal();

  [[nodiscard]] std::uint64_t master_seed() const { return master_seed_; }
  [[nodiscard]] const std::vector<std::uint64_t>& path() const { return path_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  void refill();

  std::uint64_t master_seed_;
  std::vector<std::uint64_t> path_;
  std::array<std::uint32_t, 2> key_{};
  std::uint64_t block_counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace modebench

#endif  // MODEBENCH_RNG_HPP
