#pragma once

// Raw activation matrices (FNERAW1), sample manifests and layer layouts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vd/binio.hpp"
#include "vd/error.hpp"
#include "vd/text.hpp"

namespace vd {

inline constexpr std::string_view kRawMagic = "FNERAW1";
inline constexpr std::size_t kRawHeaderSize = 15;

/// Row-major float activations, one row per image.
class RawEmbeddingMatrix {
 public:
  RawEmbeddingMatrix() = default;

  RawEmbeddingMatrix(std::size_t n_samples, std::size_t n_features, std::vector<float> values)
      : n_samples_(n_samples), n_features_(n_features), values_(std::move(values)) {
    if (n_samples_ == 0 || n_features_ == 0) {
      throw Error(ErrorKind::InvalidArgument, "matrix dimensions must be positive");
    }
    if (values_.size() != n_samples_ * n_features_) {
      throw Error(ErrorKind::DimensionMismatch, "value count " + std::to_string(values_.size()) +
                                                    " != " + std::to_string(n_samples_) + "x" +
                                                    std::to_string(n_features_));
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
      if (!std::isfinite(values_[k])) {
        throw Error(ErrorKind::NonFiniteValue, "row " + std::to_string(k / n_features_) + ", column " +
                                                   std::to_string(k % n_features_));
      }
    }
  }

  static RawEmbeddingMatrix zeros(std::size_t n_samples, std::size_t n_features) {
    return {n_samples, n_features, std::vector<float>(n_samples * n_features, 0.0f)};
  }

  std::size_t n_samples() const noexcept { return n_samples_; }
  std::size_t n_features() const noexcept { return n_features_; }
  std::span<const float> values() const noexcept { return values_; }

  std::span<const float> row(std::size_t i) const noexcept {
    return std::span(values_).subspan(i * n_features_, n_features_);
  }
  float operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_features_ + j]; }

  friend bool operator==(const RawEmbeddingMatrix&, const RawEmbeddingMatrix&) = default;

 private:
  std::size_t n_samples_ = 0;
  std::size_t n_features_ = 0;
  std::vector<float> values_;
};

inline binio::Bytes write_raw_matrix(const RawEmbeddingMatrix& m) {
  binio::Bytes out;
  out.reserve(kRawHeaderSize + 4 * m.values().size());
  binio::put_bytes(out, kRawMagic);
  binio::put_u32(out, static_cast<std::uint32_t>(m.n_samples()));
  binio::put_u32(out, static_cast<std::uint32_t>(m.n_features()));
  for (float v : m.values()) binio::put_f32(out, v);
  return out;
}

inline void write_raw_matrix(const RawEmbeddingMatrix& m, const std::filesystem::path& path) {
  binio::write_file_atomic(path, write_raw_matrix(m));
}

inline RawEmbeddingMatrix read_raw_matrix(std::span<const std::uint8_t> data) {
  binio::Reader in(data);
  in.expect_magic(kRawMagic);
  std::uint64_t rows = in.u32("n_samples");
  std::uint64_t cols = in.u32("n_features");
  if (rows == 0 || cols == 0) throw Error(ErrorKind::TruncatedPayload, "declared empty matrix");
  in.require(rows * cols * 4, "payload");
  std::vector<float> values(rows * cols);
  for (auto& v : values) v = in.f32();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      throw Error(ErrorKind::NonFiniteValue,
                  "row " + std::to_string(k / cols) + ", column " + std::to_string(k % cols));
    }
  }
  return {rows, cols, std::move(values)};
}

inline RawEmbeddingMatrix read_raw_matrix(const std::filesystem::path& path) {
  return read_raw_matrix(binio::read_file(path));
}

struct ManifestEntry {
  std::size_t sample_index;
  std::string image_id;
  std::string synset_id;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Entries sorted by sample_index; indices are exactly 0..n-1.
struct Manifest {
  std::vector<ManifestEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
};

inline Manifest read_manifest(std::string_view source) {
  Manifest m;
  for (const auto& line : text::data_lines(source)) {
    auto fields = text::split_tabs(line.content);
    std::size_t index = 0;
    if (fields.size() != 3 || !text::parse_number(fields[0], index) || fields[2].empty()) {
      throw Error(ErrorKind::MalformedRow, "manifest line " + std::to_string(line.number));
    }
    m.entries.push_back({index, std::string(fields[1]), std::string(fields[2])});
  }
  std::ranges::sort(m.entries, {}, &ManifestEntry::sample_index);
  for (std::size_t k = 0; k < m.entries.size(); ++k) {
    auto idx = m.entries[k].sample_index;
    if (k > 0 && idx == m.entries[k - 1].sample_index) {
      throw Error(ErrorKind::DuplicateIndex, "sample index " + std::to_string(idx));
    }
    if (idx != k) throw Error(ErrorKind::GapInIndices, "missing sample index " + std::to_string(k));
  }
  return m;
}

inline std::string write_manifest(const Manifest& m) {
  std::string out;
  for (const auto& e : m.entries) {
    out += std::to_string(e.sample_index) + '\t' + e.image_id + '\t' + e.synset_id + '\n';
  }
  return out;
}

using SynsetGroups = std::map<std::string, std::vector<std::size_t>>;

inline SynsetGroups group_by_synset(const Manifest& m) {
  SynsetGroups groups;
  for (const auto& e : m.entries) groups[e.synset_id].push_back(e.sample_index);
  return groups;
}

enum class LayerKind { Convolutional, FullyConnected };

struct LayerSegment {
  std::string layer_name;
  LayerKind kind;
  std::size_t start;
  std::size_t end_exclusive;

  std::size_t size() const noexcept { return end_exclusive - start; }
  friend bool operator==(const LayerSegment&, const LayerSegment&) = default;
};

struct LayerLayout {
  std::vector<LayerSegment> segments;

  std::size_t n_features() const noexcept { return segments.empty() ? 0 : segments.back().end_exclusive; }
};

/// Throws LayoutMismatch unless the segments tile [0, n_features) in order.
inline void validate_layout(const LayerLayout& layout, std::size_t n_features) {
  std::size_t expected = 0;
  for (const auto& s : layout.segments) {
    if (s.start != expected || s.end_exclusive <= s.start) {
      throw Error(ErrorKind::LayoutMismatch, "segment " + s.layer_name + " does not start at " +
                                                 std::to_string(expected) + " or is empty");
    }
    expected = s.end_exclusive;
  }
  if (expected != n_features) {
    throw Error(ErrorKind::LayoutMismatch,
                "layout covers " + std::to_string(expected) + " of " + std::to_string(n_features) + " features");
  }
}

inline LayerLayout read_layer_layout(std::string_view source) {
  LayerLayout layout;
  for (const auto& line : text::data_lines(source)) {
    auto fields = text::split_tabs(line.content);
    LayerSegment seg{};
    bool ok = fields.size() == 4 && !fields[0].empty() && text::parse_number(fields[2], seg.start) &&
              text::parse_number(fields[3], seg.end_exclusive);
    if (ok && fields[1] == "conv") {
      seg.kind = LayerKind::Convolutional;
    } else if (ok && fields[1] == "fc") {
      seg.kind = LayerKind::FullyConnected;
    } else {
      throw Error(ErrorKind::MalformedRow, "layout line " + std::to_string(line.number));
    }
    seg.layer_name = std::string(fields[0]);
    layout.segments.push_back(std::move(seg));
  }
  if (layout.segments.empty()) throw Error(ErrorKind::MalformedRow, "layout has no segments");
  validate_layout(layout, layout.n_features());
  return layout;
}

inline std::string write_layer_layout(const LayerLayout& layout) {
  std::string out;
  for (const auto& s : layout.segments) {
    out += s.layer_name + '\t' + (s.kind == LayerKind::Convolutional ? "conv" : "fc") + '\t' +
           std::to_string(s.start) + '\t' + std::to_string(s.end_exclusive) + '\n';
  }
  return out;
}

}  // namespace vd
