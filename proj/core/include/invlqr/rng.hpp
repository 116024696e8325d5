/*
 Copyright 2026 The invlqr Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef INVLQR_RNG_HPP
#define INVLQR_RNG_HPP

#include <cstdint>

namespace invlqr {

/// Counter-based pseudo random generator, "splitmix64-ctr/1".
///
/// Draw i of stream (seed, stream) is mix64(key + (i + 1) * 0x9e3779b97f4a7c15)
/// with key = mix64(seed ^ mix64(stream + 0x632be59bd9b4e019)) and mix64 the
/// SplitMix64 finalizer. Uniform doubles take the top 53 bits of a draw;
/// Gaussians use the Marsaglia polar method on consecutive uniform pairs.
/// The stream is fully specified, so other implementations can reproduce it.
class CounterRng {
 public:
  static constexpr const char* kName = "splitmix64-ctr/1";

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t next_u64() noexcept;

  // Uniform on [0, 1).
  double uniform() noexcept;
  // Uniform on [lo, hi). Returns lo when lo == hi.
  double uniform(double lo, double hi) noexcept;
  // Standard normal.
  double gaussian() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream ids used by the dataset generator.
namespace streams {
inline constexpr std::uint64_t kInitialConditions = 1;
inline constexpr std::uint64_t kMeasurementNoise = 2;
inline constexpr std::uint64_t kReference = 3;
inline constexpr std::uint64_t kRestarts = 4;
}  // namespace streams

}  // namespace invlqr

#endif  // INVLQR_RNG_HPP
