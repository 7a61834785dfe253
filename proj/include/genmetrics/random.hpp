#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace genmetrics {

/// Philox4x32-10 block function (Salmon et al., Random123). Pure function of
/// (counter, key); identical on every platform.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer. Used to derive independent per-item keys from a
/// user seed and an item index.
std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

/// Sequential view over a Philox stream. The 128-bit counter is
/// (block index, stream id); each block yields two 64-bit words.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t key, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double next_unit();

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

/// Fills `out` with standard normal variates by the Box-Muller transform,
/// consuming one Philox block (two uniforms) per pair of outputs.
void fill_standard_normal(PhiloxStream& stream, std::vector<double>& out);

/// `size` distinct indices drawn uniformly from [0, population) by a partial
/// Fisher-Yates shuffle, returned in ascending order.
std::vector<std::size_t> sample_without_replacement(PhiloxStream& stream, std::size_t population,
                                                    std::size_t size);

}  // namespace genmetrics
