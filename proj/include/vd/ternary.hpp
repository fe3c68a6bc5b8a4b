#pragma once

// 2-bit packed ternary storage and the presence bitset derived from it.
//
// Codes: 00 -> 0, 01 -> +1, 10 -> -1, 11 invalid. Feature j of a row lives in
// byte j/4 at bit offset 2*(j%4) (least significant pair first); unused pairs
// in the last byte of a row are 00.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vd/error.hpp"

namespace vd {

using Ternary = std::int8_t;

namespace packing {

constexpr std::uint8_t kCodeZero = 0b00;
constexpr std::uint8_t kCodePlus = 0b01;
constexpr std::uint8_t kCodeMinus = 0b10;

constexpr std::size_t packed_bytes(std::size_t n_features) noexcept { return (n_features + 3) / 4; }

constexpr std::uint8_t encode(Ternary v) noexcept {
  return v > 0 ? kCodePlus : (v < 0 ? kCodeMinus : kCodeZero);
}

constexpr Ternary decode(std::uint8_t code) noexcept {
  return code == kCodePlus ? Ternary{1} : (code == kCodeMinus ? Ternary{-1} : Ternary{0});
}

inline Ternary get(std::span<const std::uint8_t> row, std::size_t j) noexcept {
  return decode(static_cast<std::uint8_t>((row[j >> 2] >> (2 * (j & 3))) & 0b11));
}

inline void set(std::span<std::uint8_t> row, std::size_t j, Ternary v) noexcept {
  auto shift = 2 * (j & 3);
  auto& byte = row[j >> 2];
  byte = static_cast<std::uint8_t>((byte & ~(0b11 << shift)) | (encode(v) << shift));
}

/// Throws InvalidCode when a byte holds the reserved 11 code, or when padding
/// pairs past n_features are non-zero.
inline void validate_row(std::span<const std::uint8_t> row, std::size_t n_features) {
  for (std::size_t b = 0; b < row.size(); ++b) {
    auto byte = row[b];
    for (int k = 0; k < 4; ++k) {
      auto code = (byte >> (2 * k)) & 0b11;
      if (code == 0b11) throw Error(ErrorKind::InvalidCode, "reserved code 11 at feature " + std::to_string(4 * b + k));
      if (code != 0 && 4 * b + k >= n_features) throw Error(ErrorKind::InvalidCode, "non-zero padding");
    }
  }
}

}  // namespace packing

/// One packed ternary row of fixed length.
class TernaryVector {
 public:
  TernaryVector() = default;
  explicit TernaryVector(std::size_t n_features)
      : n_features_(n_features), bytes_(packing::packed_bytes(n_features), 0) {}

  static TernaryVector from_values(std::span<const Ternary> values) {
    TernaryVector v(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) v.set(j, values[j]);
    return v;
  }

  static TernaryVector from_packed(std::size_t n_features, std::span<const std::uint8_t> packed) {
    if (packed.size() != packing::packed_bytes(n_features)) {
      throw Error(ErrorKind::DimensionMismatch, "packed row has wrong byte length");
    }
    packing::validate_row(packed, n_features);
    TernaryVector v(n_features);
    std::ranges::copy(packed, v.bytes_.begin());
    return v;
  }

  std::size_t size() const noexcept { return n_features_; }
  Ternary operator[](std::size_t j) const noexcept { return packing::get(bytes_, j); }
  void set(std::size_t j, Ternary v) noexcept { packing::set(bytes_, j, v); }
  std::span<const std::uint8_t> packed() const noexcept { return bytes_; }

  std::vector<Ternary> values() const {
    std::vector<Ternary> out(n_features_);
    for (std::size_t j = 0; j < n_features_; ++j) out[j] = (*this)[j];
    return out;
  }

  friend bool operator==(const TernaryVector&, const TernaryVector&) = default;

 private:
  std::size_t n_features_ = 0;
  std::vector<std::uint8_t> bytes_;
};

/// Row-major packed ternary matrix; each row padded to a byte boundary.
class TernaryMatrix {
 public:
  TernaryMatrix() = default;
  TernaryMatrix(std::size_t n_samples, std::size_t n_features)
      : n_samples_(n_samples),
        n_features_(n_features),
        row_bytes_(packing::packed_bytes(n_features)),
        bytes_(n_samples * row_bytes_, 0) {}

  static TernaryMatrix from_rows(const std::vector<std::vector<Ternary>>& rows) {
    TernaryMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.n_features_) throw Error(ErrorKind::DimensionMismatch, "ragged rows");
      for (std::size_t j = 0; j < m.n_features_; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  std::size_t n_samples() const noexcept { return n_samples_; }
  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t row_bytes() const noexcept { return row_bytes_; }

  Ternary operator()(std::size_t i, std::size_t j) const noexcept { return packing::get(row(i), j); }
  void set(std::size_t i, std::size_t j, Ternary v) noexcept { packing::set(mutable_row(i), j, v); }

  std::span<const std::uint8_t> row(std::size_t i) const noexcept {
    return std::span(bytes_).subspan(i * row_bytes_, row_bytes_);
  }
  std::span<std::uint8_t> mutable_row(std::size_t i) noexcept {
    return std::span(bytes_).subspan(i * row_bytes_, row_bytes_);
  }
  std::span<const std::uint8_t> packed() const noexcept { return bytes_; }
  std::span<std::uint8_t> mutable_packed() noexcept { return bytes_; }

  TernaryVector row_vector(std::size_t i) const {
    TernaryVector v(n_features_);
    for (std::size_t j = 0; j < n_features_; ++j) v.set(j, (*this)(i, j));
    return v;
  }

  friend bool operator==(const TernaryMatrix&, const TernaryMatrix&) = default;

 private:
  std::size_t n_samples_ = 0;
  std::size_t n_features_ = 0;
  std::size_t row_bytes_ = 0;
  std::vector<std::uint8_t> bytes_;
};

/// Bit j set iff feature j is characteristic by presence (+1).
class PresenceBitset {
 public:
  PresenceBitset() = default;
  explicit PresenceBitset(std::size_t n_features) : n_features_(n_features), words_((n_features + 63) / 64, 0) {}

  std::size_t size() const noexcept { return n_features_; }
  bool test(std::size_t j) const noexcept { return (words_[j >> 6] >> (j & 63)) & 1u; }
  void set(std::size_t j) noexcept { words_[j >> 6] |= std::uint64_t{1} << (j & 63); }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  friend bool operator==(const PresenceBitset&, const PresenceBitset&) = default;

 private:
  std::size_t n_features_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Presence mask of one packed ternary row. Works directly on the packed
/// bytes: a pair is +1 iff its low bit is set and its high bit is clear.
inline PresenceBitset presence_of_packed(std::span<const std::uint8_t> row, std::size_t n_features) {
  PresenceBitset bits(n_features);
  for (std::size_t b = 0; b < row.size(); ++b) {
    std::uint8_t byte = row[b];
    std::uint8_t plus = static_cast<std::uint8_t>(byte & ~(byte >> 1) & 0b01010101);
    while (plus) {
      int k = std::countr_zero(plus) / 2;
      bits.set(4 * b + static_cast<std::size_t>(k));
      plus = static_cast<std::uint8_t>(plus & (plus - 1));
    }
  }
  return bits;
}

inline PresenceBitset presence_set(const TernaryVector& v) { return presence_of_packed(v.packed(), v.size()); }

}  // namespace vd
