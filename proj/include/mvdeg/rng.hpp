#pragma once

#include <cstdint>
#include <random>

namespace mvdeg {

/// Pinned generator identity, written into every sidecar and report so that
/// golden statistics stay comparable across releases.
inline constexpr const char* kGeneratorVersion = "mt19937_64/splitmix64-substreams/marsaglia-polar v1";

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Independent substream seed for (seed, stream): two splitmix64 rounds over a
/// state mixing both inputs.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seed of realization r in an ensemble rooted at `seed`.
std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t r) noexcept;

/// Standard normal deviates from mt19937_64 via the Marsaglia polar method.
/// std::normal_distribution is not used because its output differs between
/// standard library implementations.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}
  double next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mvdeg
