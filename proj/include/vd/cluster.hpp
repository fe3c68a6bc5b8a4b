#pragma once

// Average-linkage (UPGMA) agglomerative clustering over a DistanceMatrix,
// dendrogram cuts, adjusted Rand index and Newick export.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vd/distance.hpp"
#include "vd/error.hpp"
#include "vd/text.hpp"

namespace vd {

/// Cluster ids: leaves are 0..S-1, the cluster formed by merge k is S+k.
struct Merge {
  std::size_t left;   // smaller id
  std::size_t right;  // larger id
  double height;
  std::size_t size;

  friend bool operator==(const Merge&, const Merge&) = default;
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<Merge> merges;

  std::size_t n_leaves() const noexcept { return leaves.size(); }
};

enum class Linkage { Average };

/// UPGMA with Lance-Williams updates on a dense working matrix. Among pairs at
/// the minimal distance the lexicographically smallest (min id, max id) pair
/// merges first.
inline Dendrogram agglomerative_cluster(const DistanceMatrix& d, Linkage = Linkage::Average) {
  const auto s = d.size();
  if (s < 2) throw Error(ErrorKind::TooFewSynsets, "clustering needs at least 2 synsets");
  std::vector<double> work(s * s, 0.0);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) work[i * s + j] = d(i, j);

  // slot -> current cluster id / size; slots die when merged away
  std::vector<std::size_t> id(s), size(s, 1);
  std::vector<bool> alive(s, true);
  for (std::size_t k = 0; k < s; ++k) id[k] = k;

  Dendrogram out{d.ids(), {}};
  out.merges.reserve(s - 1);
  for (std::size_t step = 0; step + 1 < s; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best_key{SIZE_MAX, SIZE_MAX};
    for (std::size_t i = 0; i < s; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < s; ++j) {
        if (!alive[j]) continue;
        double v = work[i * s + j];
        std::pair<std::size_t, std::size_t> key{std::min(id[i], id[j]), std::max(id[i], id[j])};
        if (v < best || (v == best && key < best_key)) {
          best = v;
          best_key = key;
          bi = i;
          bj = j;
        }
      }
    }
    const auto ni = static_cast<double>(size[bi]);
    const auto nj = static_cast<double>(size[bj]);
    for (std::size_t k = 0; k < s; ++k) {
      if (!alive[k] || k == bi || k == bj) continue;
      double v = (ni * work[bi * s + k] + nj * work[bj * s + k]) / (ni + nj);
      work[bi * s + k] = work[k * s + bi] = v;
    }
    out.merges.push_back({best_key.first, best_key.second, best, size[bi] + size[bj]});
    size[bi] += size[bj];
    id[bi] = s + step;
    alive[bj] = false;
  }
  return out;
}

/// Flat labels for k clusters obtained by undoing the last k-1 merges. Labels
/// are numbered 0..k-1 in order of each cluster's smallest leaf index.
inline std::vector<std::size_t> cut_dendrogram(const Dendrogram& dg, std::size_t k) {
  const auto s = dg.n_leaves();
  if (k < 1 || k > s) throw Error(ErrorKind::InvalidArgument, "k must lie in [1, " + std::to_string(s) + "]");
  // union-find over the first s-k merges
  std::vector<std::size_t> parent(2 * s - 1);
  for (std::size_t v = 0; v < parent.size(); ++v) parent[v] = v;
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t m = 0; m < s - k; ++m) {
    parent[find(dg.merges[m].left)] = s + m;
    parent[find(dg.merges[m].right)] = s + m;
  }
  std::map<std::size_t, std::size_t> label_of_root;
  std::vector<std::size_t> labels(s);
  for (std::size_t leaf = 0; leaf < s; ++leaf) {
    auto [it, inserted] = label_of_root.try_emplace(find(leaf), label_of_root.size());
    labels[leaf] = it->second;
  }
  return labels;
}

inline double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "partitions differ in length");
  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  std::map<std::size_t, double> ra, rb;
  for (std::size_t k = 0; k < a.size(); ++k) {
    joint[{a[k], b[k]}] += 1;
    ra[a[k]] += 1;
    rb[b[k]] += 1;
  }
  auto pairs = [](double n) { return n * (n - 1) / 2; };
  double index = 0, sum_a = 0, sum_b = 0;
  for (const auto& [_, n] : joint) index += pairs(n);
  for (const auto& [_, n] : ra) sum_a += pairs(n);
  for (const auto& [_, n] : rb) sum_b += pairs(n);
  double total = pairs(static_cast<double>(a.size()));
  double expected = total > 0 ? sum_a * sum_b / total : 0.0;
  double max_index = (sum_a + sum_b) / 2;
  if (max_index == expected) return 1.0;  // both partitions trivial
  return (index - expected) / (max_index - expected);
}

/// Newick with ultrametric branch lengths (a merge at height h sits at h/2).
inline std::string to_newick(const Dendrogram& dg) {
  const auto s = dg.n_leaves();
  std::vector<std::string> label(2 * s - 1);
  std::vector<double> half_height(2 * s - 1, 0.0);
  for (std::size_t leaf = 0; leaf < s; ++leaf) label[leaf] = dg.leaves[leaf];
  for (std::size_t m = 0; m < dg.merges.size(); ++m) {
    const auto& mg = dg.merges[m];
    double h = mg.height / 2;
    label[s + m] = "(" + label[mg.left] + ":" + text::format_number(h - half_height[mg.left]) + "," + label[mg.right] +
                   ":" + text::format_number(h - half_height[mg.right]) + ")";
    half_height[s + m] = h;
  }
  return label.back() + ";";
}

}  // namespace vd
