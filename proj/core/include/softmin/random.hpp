#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace softmin {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer; a bijective 64-bit integer mix.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Per-trial seed from (master, sweep index, run index). Each argument is
/// folded through splitmix64 in turn, so adding sweep points or runs never
/// changes the seed of an existing (sweep, run) pair.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t sweep_index,
                          std::uint64_t run_index) noexcept;

// Independent substreams of one keyed generator.
enum class Stream : std::uint32_t {
  noise = 0,
  init = 1,
  sampling = 2,
};

/// Stateless counter-based generator: every draw is a pure function of
/// (seed, stream, block, index), so results do not depend on call order or
/// on which thread produces them.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, Stream stream) noexcept;

  // Two uniforms in the open interval (0, 1).
  std::array<double, 2> uniform_pair(std::uint64_t block, std::uint32_t index) const noexcept;
  // Two independent standard normals (Box-Muller on uniform_pair).
  std::array<double, 2> normal_pair(std::uint64_t block, std::uint32_t index) const noexcept;

  void fill_uniform(std::uint64_t block, std::span<double> out) const noexcept;
  void fill_normal(std::uint64_t block, std::span<double> out) const noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
};

}  // namespace softmin
