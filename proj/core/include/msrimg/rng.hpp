#pragma once

#include <cstdint>
#include <random>
#include <utility>

namespace msrimg {

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seeded Gaussian stream: std::mt19937_64 (its output sequence is fixed by the
// C++ standard) seeded with splitmix64(seed ^ splitmix64(stream + 1)), so every
// (seed, stream) pair yields an independent, platform-stable sequence. Normals
// come from the Marsaglia polar method on 53-bit uniforms.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream);

  double uniform();  // in (-1, 1)
  double normal();   // standard normal

 private:
  std::mt19937_64 engine_;
  bool has_spare_{false};
  double spare_{0.0};
};

}  // namespace msrimg
