#include "genmetrics/feature_set.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "genmetrics/error.hpp"

namespace genmetrics {
namespace {

constexpr double kUnitNormTolerance = 1e-5;

void put_le(std::vector<std::uint8_t>& out, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t offset, int bytes) {
  std::uint64_t value = 0;
  for (int i = 0; i < bytes; ++i) value |= std::uint64_t{in[offset + i]} << (8 * i);
  return value;
}

std::uint32_t byteswap32(std::uint32_t v) {
  return (v >> 24) | ((v >> 8) & 0xff00u) | ((v << 8) & 0xff0000u) | (v << 24);
}

double row_norm(std::span<const float> row) {
  double sum = 0.0;
  for (float v : row) sum += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(sum);
}

}  // namespace

FeatureSet::FeatureSet(std::vector<float> data, std::size_t count, std::size_t dim,
                       std::string label, bool normalized)
    : data_(std::move(data)),
      count_(count),
      dim_(dim),
      label_(std::move(label)),
      normalized_(normalized) {
  if (count_ == 0 || dim_ == 0) {
    throw Error(ErrorCode::kEmptySet, "feature set must have count >= 1 and dim >= 1");
  }
  if (data_.size() != count_ * dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature data holds " + std::to_string(data_.size()) + " values, expected " +
                    std::to_string(count_ * dim_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw Error(ErrorCode::kNonFinite, "non-finite value at row " + std::to_string(i / dim_) +
                                             ", column " + std::to_string(i % dim_));
    }
  }
  if (normalized_) {
    for (std::size_t i = 0; i < count_; ++i) {
      if (std::abs(row_norm(row(i)) - 1.0) > kUnitNormTolerance) {
        throw Error(ErrorCode::kNotNormalized,
                    "row " + std::to_string(i) + " is flagged normalized but is not unit norm");
      }
    }
  }
}

std::vector<std::uint8_t> encode_header(const FeatureFileHeader& header) {
  std::vector<std::uint8_t> out(std::begin(kFeatureMagic), std::end(kFeatureMagic));
  put_le(out, header.dtype_code, 4);
  put_le(out, header.count, 8);
  put_le(out, header.dim, 8);
  return out;
}

FeatureFileHeader decode_header(std::span<const std::uint8_t> bytes, std::uintmax_t file_size) {
  const std::size_t magic_len = std::min(bytes.size(), sizeof(kFeatureMagic));
  if (std::memcmp(bytes.data(), kFeatureMagic, magic_len) != 0) {
    throw Error(ErrorCode::kBadMagic, "not a GMFEAT01 file (bad magic)");
  }
  if (bytes.size() < kFeatureHeaderSize) {
    throw Error(ErrorCode::kTruncatedPayload, "file ends inside the 28-byte header");
  }
  FeatureFileHeader header;
  header.dtype_code = static_cast<std::uint32_t>(get_le(bytes, 8, 4));
  header.count = get_le(bytes, 12, 8);
  header.dim = get_le(bytes, 20, 8);
  if (header.dtype_code != kDtypeFloat32) {
    throw Error(ErrorCode::kBadDtype,
                "unsupported dtype code " + std::to_string(header.dtype_code) + " (only 1 = float32)");
  }
  if (header.count == 0 || header.dim == 0) {
    throw Error(ErrorCode::kEmptySet, "header declares count or dim of zero");
  }
  const std::uintmax_t payload_max = std::numeric_limits<std::uintmax_t>::max() - kFeatureHeaderSize;
  const bool overflow = header.count > payload_max / 4 / header.dim;
  const std::uintmax_t expected = overflow ? 0 : kFeatureHeaderSize + header.count * header.dim * 4;
  if (overflow || file_size < expected) {
    throw Error(ErrorCode::kTruncatedPayload,
                "payload shorter than count*dim*4 bytes declared by the header");
  }
  if (file_size > expected) {
    throw Error(ErrorCode::kTrailingBytes, "file has bytes past the declared payload");
  }
  return header;
}

namespace {

std::ifstream open_input(const std::filesystem::path& path, std::uintmax_t& size) {
  std::error_code ec;
  size = std::filesystem::file_size(path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot stat " + path.string() + ": " + ec.message());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

FeatureFileHeader read_header_from(std::ifstream& in, std::uintmax_t size,
                                   const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes(std::min<std::uintmax_t>(size, kFeatureHeaderSize));
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!in) throw Error(ErrorCode::kIo, "read failed on " + path.string());
  return decode_header(bytes, size);
}

}  // namespace

FeatureFileHeader read_header(const std::filesystem::path& path) {
  std::uintmax_t size = 0;
  auto in = open_input(path, size);
  return read_header_from(in, size, path);
}

FeatureSet read_features(const std::filesystem::path& path) {
  std::uintmax_t size = 0;
  auto in = open_input(path, size);
  const FeatureFileHeader header = read_header_from(in, size, path);

  std::vector<float> data(header.count * header.dim);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * 4));
  if (!in) throw Error(ErrorCode::kIo, "read failed on " + path.string());
  if constexpr (std::endian::native == std::endian::big) {
    for (float& v : data) v = std::bit_cast<float>(byteswap32(std::bit_cast<std::uint32_t>(v)));
  }
  return FeatureSet(std::move(data), header.count, header.dim, path.stem().string());
}

void write_features(const FeatureSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");

  const auto header = encode_header({kDtypeFloat32, set.count(), set.dim()});
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
  const auto values = set.data();
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * 4));
  } else {
    for (float v : values) {
      const auto swapped = byteswap32(std::bit_cast<std::uint32_t>(v));
      out.write(reinterpret_cast<const char*>(&swapped), 4);
    }
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed on " + path.string());
}

FeatureSet normalize(const FeatureSet& set) {
  std::vector<float> out(set.data().begin(), set.data().end());
  const std::size_t dim = set.dim();
  for (std::size_t i = 0; i < set.count(); ++i) {
    const double norm = row_norm(set.row(i));
    if (!(norm > 0.0)) {
      throw Error(ErrorCode::kZeroNormRow, "row " + std::to_string(i) + " has zero norm");
    }
    for (std::size_t j = 0; j < dim; ++j) {
      out[i * dim + j] = static_cast<float>(static_cast<double>(out[i * dim + j]) / norm);
    }
  }
  return FeatureSet(std::move(out), set.count(), dim, set.label(), true);
}

}  // namespace genmetrics
