#pragma once

// Visual similarity / distance between synset representatives and the full
// pairwise distance matrix.
//
// Only features characteristic by presence (+1) enter the counts, so the
// similarity reduces to |P_a & P_b| / |P_a | P_b| over presence sets and the
// distance is the Jaccard distance. The matrix kernel uses that reduction;
// pair_counts keeps the per-value-pair route for diagnostics and checking.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vd/binio.hpp"
#include "vd/error.hpp"
#include "vd/parallel.hpp"
#include "vd/representative.hpp"
#include "vd/text.hpp"

namespace vd {

struct PairCounts {
  std::size_t c_1_1 = 0;
  std::size_t c_1_0 = 0;
  std::size_t c_1_m1 = 0;
  std::size_t c_0_1 = 0;
  std::size_t c_m1_1 = 0;

  std::size_t total() const noexcept { return c_1_1 + c_1_0 + c_1_m1 + c_0_1 + c_m1_1; }
  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

namespace detail {

inline void check_same_width(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch, "representatives have " + std::to_string(a) + " and " +
                                                  std::to_string(b) + " features");
  }
}

/// shared / union with the empty-vs-empty case defined as 1.
inline double jaccard_similarity(std::size_t shared, std::size_t total) noexcept {
  return total == 0 ? 1.0 : static_cast<double>(shared) / static_cast<double>(total);
}

inline std::size_t intersection_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) noexcept {
  std::size_t c = 0;
  for (std::size_t w = 0; w < a.size(); ++w) c += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
  return c;
}

}  // namespace detail

inline PairCounts pair_counts(const TernaryVector& a, const TernaryVector& b) {
  detail::check_same_width(a.size(), b.size());
  PairCounts c;
  for (std::size_t j = 0; j < a.size(); ++j) {
    auto x = a[j];
    auto y = b[j];
    if (x == 1) {
      if (y == 1) ++c.c_1_1;
      else if (y == 0) ++c.c_1_0;
      else ++c.c_1_m1;
    } else if (y == 1) {
      if (x == 0) ++c.c_0_1;
      else ++c.c_m1_1;
    }
  }
  return c;
}

inline PairCounts pair_counts(const SynsetRepresentative& a, const SynsetRepresentative& b) {
  return pair_counts(a.ternary, b.ternary);
}

inline double similarity_from_counts(const PairCounts& c) noexcept {
  return detail::jaccard_similarity(c.c_1_1, c.total());
}

inline double visual_similarity(const PresenceBitset& a, const PresenceBitset& b) {
  detail::check_same_width(a.size(), b.size());
  auto shared = detail::intersection_count(a.words(), b.words());
  return detail::jaccard_similarity(shared, a.count() + b.count() - shared);
}

inline double visual_similarity(const SynsetRepresentative& a, const SynsetRepresentative& b) {
  return visual_similarity(a.presence, b.presence);
}

inline double visual_distance(const SynsetRepresentative& a, const SynsetRepresentative& b) {
  return 1.0 - visual_similarity(a, b);
}

// ---------------------------------------------------------------------------

/// Symmetric zero-diagonal distances over a sorted id list, stored as the
/// condensed upper triangle.
class DistanceMatrix {
 public:
  using Parameters = std::map<std::string, std::string>;

  DistanceMatrix() = default;
  DistanceMatrix(std::vector<std::string> ids, std::vector<float> condensed, std::string metric_name,
                 Parameters parameters = {})
      : ids_(std::move(ids)),
        condensed_(std::move(condensed)),
        metric_name_(std::move(metric_name)),
        parameters_(std::move(parameters)) {
    for (std::size_t k = 1; k < ids_.size(); ++k) {
      if (!(ids_[k - 1] < ids_[k])) throw Error(ErrorKind::InvalidArgument, "synset ids must be strictly sorted");
    }
    if (condensed_.size() != pair_count(ids_.size())) {
      throw Error(ErrorKind::DimensionMismatch, "condensed length does not match id count");
    }
    for (float v : condensed_) {
      if (!(v >= 0.0f && v <= 1.0f)) throw Error(ErrorKind::InvalidArgument, "distance outside [0,1]");
    }
  }

  static constexpr std::size_t pair_count(std::size_t s) noexcept { return s < 2 ? 0 : s * (s - 1) / 2; }

  /// Condensed index of (i, j), i < j.
  static constexpr std::size_t index(std::size_t s, std::size_t i, std::size_t j) noexcept {
    return i * s - i * (i + 1) / 2 + (j - i - 1);
  }

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::span<const float> condensed() const noexcept { return condensed_; }
  const std::string& metric_name() const noexcept { return metric_name_; }
  const Parameters& parameters() const noexcept { return parameters_; }

  float operator()(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return 0.0f;
    if (i > j) std::swap(i, j);
    return condensed_[index(ids_.size(), i, j)];
  }

  /// Position of `id` in the sorted id list, or size() when absent.
  std::size_t find(std::string_view id) const noexcept {
    auto it = std::ranges::lower_bound(ids_, id);
    return (it != ids_.end() && *it == id) ? static_cast<std::size_t>(it - ids_.begin()) : ids_.size();
  }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::vector<std::string> ids_;
  std::vector<float> condensed_;
  std::string metric_name_;
  Parameters parameters_;
};

/// Sub-matrix over `ids` (a sorted subset of d.ids()).
inline DistanceMatrix restrict_matrix(const DistanceMatrix& d, const std::vector<std::string>& ids) {
  const auto s = ids.size();
  std::vector<std::size_t> pos(s);
  for (std::size_t k = 0; k < s; ++k) {
    pos[k] = d.find(ids[k]);
    if (pos[k] == d.size()) throw Error(ErrorKind::UnknownSynset, ids[k]);
  }
  std::vector<float> condensed;
  condensed.reserve(DistanceMatrix::pair_count(s));
  for (std::size_t i = 0; i + 1 < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j) condensed.push_back(d(pos[i], pos[j]));
  return {ids, std::move(condensed), d.metric_name(), d.parameters()};
}

inline constexpr std::string_view kVisualDistanceMetric = "visual_distance";

inline DistanceMatrix::Parameters visual_distance_parameters() {
  return {{"empty_presence", "sim=1"}, {"kernel", "presence-jaccard"}, {"tie_rule", "zero"}};
}

/// All-pairs visual distance. Rows are processed in parallel; each cell has a
/// single writer, so the result does not depend on `threads`.
inline DistanceMatrix distance_matrix(std::span<const SynsetRepresentative> reps, unsigned threads = 1) {
  const auto s = reps.size();
  if (s < 2) throw Error(ErrorKind::TooFewSynsets, "need at least 2 representatives, got " + std::to_string(s));
  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::ranges::sort(order, [&](auto x, auto y) { return reps[x].synset_id < reps[y].synset_id; });
  const auto m = reps[order[0]].n_features();
  std::vector<std::string> ids(s);
  std::vector<std::span<const std::uint64_t>> words(s);
  std::vector<std::size_t> counts(s);
  for (std::size_t k = 0; k < s; ++k) {
    const auto& r = reps[order[k]];
    detail::check_same_width(m, r.n_features());
    if (k > 0 && r.synset_id == ids[k - 1]) throw Error(ErrorKind::InvalidArgument, "duplicate synset " + r.synset_id);
    ids[k] = r.synset_id;
    words[k] = r.presence.words();
    counts[k] = r.presence.count();
  }

  std::vector<float> condensed(DistanceMatrix::pair_count(s));
  parallel_for(s - 1, threads, [&](std::size_t i) {
    auto* out = condensed.data() + DistanceMatrix::index(s, i, i + 1);
    for (std::size_t j = i + 1; j < s; ++j) {
      auto shared = detail::intersection_count(words[i], words[j]);
      auto sim = detail::jaccard_similarity(shared, counts[i] + counts[j] - shared);
      *out++ = static_cast<float>(1.0 - sim);
    }
  }, 4);
  return {std::move(ids), std::move(condensed), std::string(kVisualDistanceMetric), visual_distance_parameters()};
}

// ---------------------------------------------------------------------------
// VDMAT1

inline constexpr std::string_view kDistanceMagic = "VDMAT1";

inline binio::Bytes write_distance_matrix(const DistanceMatrix& d) {
  binio::Bytes out;
  binio::put_bytes(out, kDistanceMagic);
  binio::put_u32(out, static_cast<std::uint32_t>(d.size()));
  for (const auto& id : d.ids()) {
    binio::put_u16(out, static_cast<std::uint16_t>(id.size()));
    binio::put_bytes(out, id);
  }
  binio::put_u16(out, static_cast<std::uint16_t>(d.metric_name().size()));
  binio::put_bytes(out, d.metric_name());
  std::string blob;
  for (const auto& [k, v] : d.parameters()) blob += k + '=' + v + '\n';
  binio::put_u32(out, static_cast<std::uint32_t>(blob.size()));
  binio::put_bytes(out, blob);
  for (float v : d.condensed()) binio::put_f32(out, v);
  return out;
}

inline DistanceMatrix read_distance_matrix(std::span<const std::uint8_t> data) {
  binio::Reader in(data);
  in.expect_magic(kDistanceMagic);
  std::size_t s = in.u32("synset count");
  std::vector<std::string> ids;
  ids.reserve(s);
  for (std::size_t k = 0; k < s; ++k) ids.push_back(in.string(in.u16("id length"), "synset id"));
  auto metric = in.string(in.u16("metric length"), "metric name");
  auto blob = in.string(in.u32("parameter length"), "parameters");
  DistanceMatrix::Parameters params;
  for (const auto& line : text::data_lines(blob)) {
    auto eq = line.content.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::MalformedRow, "parameter line " + std::to_string(line.number));
    params.emplace(std::string(line.content.substr(0, eq)), std::string(line.content.substr(eq + 1)));
  }
  std::vector<float> condensed(DistanceMatrix::pair_count(s));
  in.require(condensed.size() * 4, "condensed values");
  for (auto& v : condensed) v = in.f32();
  try {
    return {std::move(ids), std::move(condensed), std::move(metric), std::move(params)};
  } catch (const Error& e) {
    throw Error(ErrorKind::MalformedRow, std::string("invalid distance matrix file: ") + e.what());
  }
}

inline DistanceMatrix read_distance_matrix(const std::filesystem::path& path) {
  return read_distance_matrix(binio::read_file(path));
}

}  // namespace vd
