#pragma once

// Pearson / Spearman comparison of two distance matrices over their shared ids.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vd/distance.hpp"
#include "vd/error.hpp"

namespace vd {

struct AlignedDistances {
  std::vector<std::string> shared_ids;
  std::vector<double> a;
  std::vector<double> b;
};

/// Condensed distances of both matrices restricted to the sorted id
/// intersection, in the same pair order.
inline AlignedDistances align_matrices(const DistanceMatrix& a, const DistanceMatrix& b) {
  AlignedDistances out;
  std::ranges::set_intersection(a.ids(), b.ids(), std::back_inserter(out.shared_ids));
  const auto s = out.shared_ids.size();
  if (s < 2) throw Error(ErrorKind::InsufficientOverlap, std::to_string(s) + " shared synset ids");
  std::vector<std::size_t> ia(s), ib(s);
  for (std::size_t k = 0; k < s; ++k) {
    ia[k] = a.find(out.shared_ids[k]);
    ib[k] = b.find(out.shared_ids[k]);
  }
  out.a.reserve(DistanceMatrix::pair_count(s));
  out.b.reserve(DistanceMatrix::pair_count(s));
  for (std::size_t i = 0; i + 1 < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      out.a.push_back(a(ia[i], ia[j]));
      out.b.push_back(b(ib[i], ib[j]));
    }
  }
  return out;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "vectors differ in length");
  if (x.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 observations");
  const auto n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double dx = x[k] - mx;
    double dy = y[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::ZeroVariance, "input has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// 1-based fractional ranks; tied values share the mean of their positions.
inline std::vector<double> fractional_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t start = 0; start < order.size();) {
    auto end = start + 1;
    while (end < order.size() && v[order[end]] == v[order[start]]) ++end;
    double rank = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
    for (auto k = start; k < end; ++k) ranks[order[k]] = rank;
    start = end;
  }
  return ranks;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "vectors differ in length");
  auto rx = fractional_ranks(x);
  auto ry = fractional_ranks(y);
  return pearson(rx, ry);
}

struct CorrelationReport {
  double pearson_r = 0.0;
  double spearman_rho = 0.0;
  std::size_t n_pairs = 0;
  std::size_t shared_ids = 0;
};

inline CorrelationReport compare_matrices(const DistanceMatrix& a, const DistanceMatrix& b) {
  auto aligned = align_matrices(a, b);
  return {pearson(aligned.a, aligned.b), spearman(aligned.a, aligned.b), aligned.a.size(), aligned.shared_ids.size()};
}

}  // namespace vd
