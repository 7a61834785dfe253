#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace genmetrics {

/// Dense n x d matrix of 32-bit feature vectors, one row per sample.
///
/// Immutable once constructed; every constructor path validates that the
/// shape is non-empty and all entries are finite, and that rows are unit
/// norm when the normalized flag is set.
class FeatureSet {
 public:
  FeatureSet(std::vector<float> data, std::size_t count, std::size_t dim,
             std::string label = {}, bool normalized = false);

  std::size_t count() const noexcept { return count_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }
  bool normalized() const noexcept { return normalized_; }

  std::span<const float> data() const noexcept { return data_; }
  std::span<const float> row(std::size_t i) const noexcept {
    return std::span<const float>(data_).subspan(i * dim_, dim_);
  }

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

 private:
  std::vector<float> data_;
  std::size_t count_;
  std::size_t dim_;
  std::string label_;
  bool normalized_;
};

// GMFEAT01 layout: 8-byte magic, u32 dtype code, u64 count, u64 dim, then
// count*dim little-endian float32 values in row-major order.
inline constexpr char kFeatureMagic[8] = {'G', 'M', 'F', 'E', 'A', 'T', '0', '1'};
inline constexpr std::uint32_t kDtypeFloat32 = 1;
inline constexpr std::size_t kFeatureHeaderSize = 28;

struct FeatureFileHeader {
  std::uint32_t dtype_code = kDtypeFloat32;
  std::uint64_t count = 0;
  std::uint64_t dim = 0;
};

std::vector<std::uint8_t> encode_header(const FeatureFileHeader& header);

// Validates magic, dtype and non-zero shape. `file_size` is checked against
// the payload length the header implies.
FeatureFileHeader decode_header(std::span<const std::uint8_t> bytes,
                                std::uintmax_t file_size);

FeatureFileHeader read_header(const std::filesystem::path& path);

/// Reads a GMFEAT01 file. The label is the file stem; the normalized flag is
/// always false since the format does not record it.
FeatureSet read_features(const std::filesystem::path& path);

void write_features(const FeatureSet& set, const std::filesystem::path& path);

/// Divides each row by its Euclidean norm (computed in double).
/// Throws kZeroNormRow naming the first offending row.
FeatureSet normalize(const FeatureSet& set);

}  // namespace genmetrics
