#pragma once

// Per-synset representatives: the per-feature mode of a synset's ternary rows.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vd/binio.hpp"
#include "vd/error.hpp"
#include "vd/ingest.hpp"
#include "vd/parallel.hpp"
#include "vd/ternary.hpp"

namespace vd {

struct SynsetRepresentative {
  std::string synset_id;
  TernaryVector ternary;
  PresenceBitset presence;
  std::size_t n_source_samples = 0;

  SynsetRepresentative() = default;
  SynsetRepresentative(std::string id, TernaryVector v, std::size_t n_samples)
      : synset_id(std::move(id)), ternary(std::move(v)), presence(presence_set(ternary)), n_source_samples(n_samples) {
    if (n_source_samples == 0) throw Error(ErrorKind::EmptySynset, "representative of " + synset_id + " has no samples");
  }

  std::size_t n_features() const noexcept { return ternary.size(); }

  friend bool operator==(const SynsetRepresentative&, const SynsetRepresentative&) = default;
};

/// Mode of one feature column given its class counts. Any tie for the maximum
/// resolves to 0.
constexpr Ternary mode_of_counts(std::size_t minus, std::size_t zero, std::size_t plus) noexcept {
  if (plus > minus && plus > zero) return 1;
  if (minus > plus && minus > zero) return -1;
  return 0;
}

inline SynsetRepresentative compute_representative(const TernaryMatrix& rows, std::span<const std::size_t> row_indices,
                                                   std::string synset_id) {
  if (row_indices.empty()) throw Error(ErrorKind::EmptySynset, "synset " + synset_id + " has no rows");
  const auto m = rows.n_features();
  std::vector<std::uint32_t> plus(m, 0), minus(m, 0);
  for (auto i : row_indices) {
    if (i >= rows.n_samples()) {
      throw Error(ErrorKind::IndexOutOfRange, "row " + std::to_string(i) + " of " + std::to_string(rows.n_samples()) +
                                                  " (synset " + synset_id + ")");
    }
    auto row = rows.row(i);
    for (std::size_t b = 0; b < row.size(); ++b) {
      std::uint8_t byte = row[b];
      if (byte == 0) continue;
      for (std::size_t k = 0; k < 4; ++k) {
        auto code = (byte >> (2 * k)) & 0b11;
        if (code == packing::kCodePlus) {
          ++plus[4 * b + k];
        } else if (code == packing::kCodeMinus) {
          ++minus[4 * b + k];
        }
      }
    }
  }
  const auto n = row_indices.size();
  TernaryVector v(m);
  for (std::size_t j = 0; j < m; ++j) v.set(j, mode_of_counts(minus[j], n - plus[j] - minus[j], plus[j]));
  return {std::move(synset_id), std::move(v), n};
}

/// One representative per group, in ascending synset_id order.
inline std::vector<SynsetRepresentative> build_all_representatives(const TernaryMatrix& ternary,
                                                                   const SynsetGroups& groups,
                                                                   unsigned threads = 1) {
  std::vector<const SynsetGroups::value_type*> order;
  order.reserve(groups.size());
  for (const auto& g : groups) order.push_back(&g);
  std::vector<SynsetRepresentative> reps(order.size());
  parallel_for(order.size(), threads, [&](std::size_t k) {
    reps[k] = compute_representative(ternary, order[k]->second, order[k]->first);
  });
  return reps;
}

// ---------------------------------------------------------------------------
// FNEREP1

inline constexpr std::string_view kRepresentativeMagic = "FNEREP1";

inline binio::Bytes write_representatives(std::span<const SynsetRepresentative> reps) {
  const std::size_t m = reps.empty() ? 0 : reps.front().n_features();
  binio::Bytes out;
  binio::put_bytes(out, kRepresentativeMagic);
  binio::put_u32(out, static_cast<std::uint32_t>(reps.size()));
  binio::put_u32(out, static_cast<std::uint32_t>(m));
  for (const auto& r : reps) {
    if (r.n_features() != m) throw Error(ErrorKind::DimensionMismatch, "representative " + r.synset_id);
    if (r.synset_id.size() > 0xFFFF) throw Error(ErrorKind::InvalidArgument, "synset id too long");
    binio::put_u16(out, static_cast<std::uint16_t>(r.synset_id.size()));
    binio::put_bytes(out, r.synset_id);
    binio::put_u32(out, static_cast<std::uint32_t>(r.n_source_samples));
    binio::put_bytes(out, r.ternary.packed());
  }
  return out;
}

inline std::vector<SynsetRepresentative> read_representatives(std::span<const std::uint8_t> data) {
  binio::Reader in(data);
  in.expect_magic(kRepresentativeMagic);
  std::size_t count = in.u32("synset_count");
  std::size_t m = in.u32("n_features");
  std::vector<SynsetRepresentative> reps;
  reps.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    auto id = in.string(in.u16("id length"), "synset id");
    auto n = in.u32("n_source_samples");
    auto packed = in.bytes(packing::packed_bytes(m), "ternary row");
    reps.emplace_back(std::move(id), TernaryVector::from_packed(m, packed), n);
  }
  return reps;
}

inline std::vector<SynsetRepresentative> read_representatives(const std::filesystem::path& path) {
  return read_representatives(binio::read_file(path));
}

}  // namespace vd
