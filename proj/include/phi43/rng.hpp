#pragma once

#include <array>
#include <cstdint>

namespace phi43 {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Stream purposes; the tag occupies the fourth counter word together with a level.
enum class Stream : std::uint32_t { linear_path = 1, random_field = 2, scalar = 3, bootstrap = 4 };

/// Counter-based normal generator keyed by a 64-bit seed. Every draw is a pure
/// function of (seed, replica, mode, step, stream, level), so results do not
/// depend on evaluation order or thread count.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::array<std::uint32_t, 4> bits(std::uint32_t replica, std::uint32_t mode, std::uint32_t step, Stream stream,
                                    std::uint32_t level = 0) const;
  /// Two independent standard normals (Box-Muller on two 53-bit uniforms).
  std::array<double, 2> normal_pair(std::uint32_t replica, std::uint32_t mode, std::uint32_t step, Stream stream,
                                    std::uint32_t level = 0) const;
  /// Uniform in (0, 1).
  double uniform(std::uint32_t replica, std::uint32_t mode, std::uint32_t step, Stream stream,
                 std::uint32_t level = 0) const;

 private:
  std::uint64_t seed_;
};

}  // namespace phi43
