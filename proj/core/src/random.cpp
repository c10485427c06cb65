#include "softmin/random.hpp"

#include <cmath>
#include <numbers>

namespace softmin {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// 53 random bits mapped to the open unit interval.
inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t sweep_index,
                          std::uint64_t run_index) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ sweep_index);
  h = splitmix64(h ^ run_index);
  return h;
}

CounterRng::CounterRng(std::uint64_t seed, Stream stream) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(static_cast<std::uint32_t>(stream)) {}

std::array<double, 2> CounterRng::uniform_pair(std::uint64_t block,
                                               std::uint32_t index) const noexcept {
  const auto r = philox4x32({static_cast<std::uint32_t>(block),
                             static_cast<std::uint32_t>(block >> 32), index, stream_},
                            key_);
  const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
  const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
  return {to_open_unit(a), to_open_unit(b)};
}

std::array<double, 2> CounterRng::normal_pair(std::uint64_t block,
                                              std::uint32_t index) const noexcept {
  const auto [u1, u2] = uniform_pair(block, index);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

void CounterRng::fill_uniform(std::uint64_t block, std::span<double> out) const noexcept {
  for (std::size_t i = 0; i < out.size(); i += 2) {
    const auto pair = uniform_pair(block, static_cast<std::uint32_t>(i / 2));
    out[i] = pair[0];
    if (i + 1 < out.size()) out[i + 1] = pair[1];
  }
}

void CounterRng::fill_normal(std::uint64_t block, std::span<double> out) const noexcept {
  for (std::size_t i = 0; i < out.size(); i += 2) {
    const auto pair = normal_pair(block, static_cast<std::uint32_t>(i / 2));
    out[i] = pair[0];
    if (i + 1 < out.size()) out[i + 1] = pair[1];
  }
}

}  // namespace softmin
