#pragma once

// Synset-level diagnostics: within-synset co-occurrence of presence features
// against taxonomy depth, and bootstrap stability of representatives.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vd/correlation.hpp"
#include "vd/distance.hpp"
#include "vd/ingest.hpp"
#include "vd/lexical.hpp"
#include "vd/representative.hpp"

namespace vd {

struct SynsetConsistency {
  std::string synset_id;
  std::size_t n_images = 0;
  std::size_t depth = 0;
  std::optional<double> consistency;  // absent for single-image synsets
};

struct ConsistencyReport {
  std::vector<SynsetConsistency> synsets;
  std::optional<double> spearman_rho;  // consistency vs depth
  static constexpr const char* statistic = "mean pairwise Jaccard of per-image presence sets";
};

/// Mean pairwise Jaccard similarity of the images' presence sets (empty vs
/// empty counts as 1). Needs at least two rows.
inline double presence_consistency(const TernaryMatrix& ternary, std::span<const std::size_t> rows) {
  std::vector<PresenceBitset> sets;
  sets.reserve(rows.size());
  for (auto i : rows) {
    if (i >= ternary.n_samples()) throw Error(ErrorKind::IndexOutOfRange, "row " + std::to_string(i));
    sets.push_back(presence_of_packed(ternary.row(i), ternary.n_features()));
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t b = a + 1; b < sets.size(); ++b) {
      sum += visual_similarity(sets[a], sets[b]);
      ++pairs;
    }
  }
  return pairs ? sum / static_cast<double>(pairs) : 1.0;
}

inline ConsistencyReport consistency_vs_specificity(const TernaryMatrix& ternary, const SynsetGroups& groups,
                                                    const Taxonomy& t) {
  ConsistencyReport report;
  std::vector<double> values, depths;
  for (const auto& [id, rows] : groups) {
    SynsetConsistency c{id, rows.size(), t.depth(id), std::nullopt};
    if (rows.size() >= 2) {
      c.consistency = presence_consistency(ternary, rows);
      values.push_back(*c.consistency);
      depths.push_back(static_cast<double>(c.depth));
    }
    report.synsets.push_back(std::move(c));
  }
  if (values.size() >= 2) {
    try {
      report.spearman_rho = spearman(values, depths);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroVariance) throw;
    }
  }
  return report;
}

struct BootstrapStability {
  std::string synset_id;
  double mean_distance = 0.0;  // vd between full-sample and resampled representatives
  double max_distance = 0.0;
};

/// Resamples each synset's rows with replacement `rounds` times and measures
/// how far the resampled representative moves. Deterministic for a seed.
inline std::vector<BootstrapStability> bootstrap_stability(const TernaryMatrix& ternary, const SynsetGroups& groups,
                                                           std::size_t rounds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto bounded = [&rng](std::uint64_t n) {
    // rejection sampling keeps the draw unbiased and library-independent
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % n;
  };
  std::vector<BootstrapStability> out;
  for (const auto& [id, rows] : groups) {
    auto base = compute_representative(ternary, rows, id);
    BootstrapStability b{id, 0.0, 0.0};
    std::vector<std::size_t> sample(rows.size());
    for (std::size_t r = 0; r < rounds; ++r) {
      for (auto& x : sample) x = rows[bounded(rows.size())];
      double dist = visual_distance(base, compute_representative(ternary, sample, id));
      b.mean_distance += dist;
      b.max_distance = std::max(b.max_distance, dist);
    }
    if (rounds) b.mean_distance /= static_cast<double>(rounds);
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace vd
