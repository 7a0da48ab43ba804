#include "phi43/rng.hpp"

#include <cmath>
#include <numbers>

namespace phi43 {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// (0, 1) with 53 bits from two words
inline double to_unit(std::uint32_t a, std::uint32_t b) {
  const std::uint64_t m = (static_cast<std::uint64_t>(a >> 5) << 26) | (b >> 6);
  return (static_cast<double>(m) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

std::array<std::uint32_t, 4> CounterRng::bits(std::uint32_t replica, std::uint32_t mode, std::uint32_t step,
                                              Stream stream, std::uint32_t level) const {
  const std::uint32_t tag = (static_cast<std::uint32_t>(stream) << 24) | (level & 0xFFFFFFu);
  return philox4x32({replica, mode, step, tag},
                    {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
}

std::array<double, 2> CounterRng::normal_pair(std::uint32_t replica, std::uint32_t mode, std::uint32_t step,
                                              Stream stream, std::uint32_t level) const {
  const auto x = bits(replica, mode, step, stream, level);
  const double u1 = to_unit(x[0], x[1]);
  const double u2 = to_unit(x[2], x[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phase = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phase), r * std::sin(phase)};
}

double CounterRng::uniform(std::uint32_t replica, std::uint32_t mode, std::uint32_t step, Stream stream,
                           std::uint32_t level) const {
  const auto x = bits(replica, mode, step, stream, level);
  return to_unit(x[0], x[1]);
}

}  // namespace phi43
