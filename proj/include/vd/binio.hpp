#pragma once

// Little-endian primitives shared by the binary file formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vd/error.hpp"

namespace vd::binio {

using Bytes = std::vector<std::uint8_t>;

inline void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline void put_f32(Bytes& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

inline void put_bytes(Bytes& out, std::string_view s) { out.insert(out.end(), s.begin(), s.end()); }

inline void put_bytes(Bytes& out, std::span<const std::uint8_t> s) { out.insert(out.end(), s.begin(), s.end()); }

/// Bounds-checked cursor over an in-memory byte buffer. Every read that would
/// run past the end throws TruncatedPayload.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }

  void require(std::size_t n, std::string_view what) const {
    if (remaining() < n) {
      throw Error(ErrorKind::TruncatedPayload, std::string(what) + " needs " + std::to_string(n) +
                                                   " bytes at offset " + std::to_string(pos_) + ", " +
                                                   std::to_string(remaining()) + " available");
    }
  }

  void expect_magic(std::string_view magic) {
    if (remaining() < magic.size() || std::memcmp(data_.data() + pos_, magic.data(), magic.size()) != 0) {
      throw Error(ErrorKind::BadMagic, "expected \"" + std::string(magic) + "\"");
    }
    pos_ += magic.size();
  }

  std::uint16_t u16(std::string_view what = "u16") {
    require(2, what);
    auto v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }

  std::uint32_t u32(std::string_view what = "u32") {
    require(4, what);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(data_[pos_ + k]) << (8 * k);
    pos_ += 4;
    return v;
  }

  float f32(std::string_view what = "f32") { return std::bit_cast<float>(u32(what)); }

  std::span<const std::uint8_t> bytes(std::size_t n, std::string_view what = "bytes") {
    require(n, what);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::string string(std::size_t n, std::string_view what = "string") {
    auto s = bytes(n, what);
    return std::string(s.begin(), s.end());
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

inline Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::Io, "read failed for " + path.string());
  return data;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  auto bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

/// Writes to `path.tmp` and renames over `path`, so a failed run never leaves a
/// partial output behind.
inline void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorKind::Io, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename into " + path.string());
  }
}

inline void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace vd::binio
