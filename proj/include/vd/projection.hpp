#pragma once

// 2-D (or k-D) projections: classical MDS from a distance matrix, and PCA over
// the ternary representatives.

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vd/distance.hpp"
#include "vd/eigen.hpp"
#include "vd/error.hpp"
#include "vd/representative.hpp"
#include "vd/text.hpp"

namespace vd {

enum class ProjectionMethod { Mds, Pca };

struct Projection {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> coords;  // one `dims`-vector per id
  ProjectionMethod method = ProjectionMethod::Mds;
  std::map<std::string, double> diagnostics;
};

namespace detail {

/// Coordinates sqrt(lambda_k) * u_k for the top `dims` eigenpairs. Eigenvalues
/// below zero are clamped; their count among the kept pairs is returned.
inline std::size_t embed_from_gram(const EigenDecomposition& eig, std::size_t dims,
                                   std::vector<std::vector<double>>& coords) {
  const auto n = eig.values.size();
  std::size_t clamped = 0;
  coords.assign(n, std::vector<double>(dims, 0.0));
  for (std::size_t k = 0; k < dims && k < n; ++k) {
    double lambda = eig.values[k];
    if (lambda < 0.0) {
      ++clamped;
      lambda = 0.0;
    }
    double scale = std::sqrt(lambda);
    for (std::size_t i = 0; i < n; ++i) coords[i][k] = scale * eig.vectors(i, k);
  }
  return clamped;
}

}  // namespace detail

/// Torgerson scaling: double-centre the squared distances and embed with the
/// top eigenpairs. Reports Kruskal stress-1 and the share of spectral mass
/// carried by negative eigenvalues (non-zero for non-Euclidean inputs).
inline Projection classical_mds(const DistanceMatrix& d, std::size_t dims = 2) {
  const auto s = d.size();
  if (s < 2 || dims < 1) throw Error(ErrorKind::InvalidArgument, "MDS needs at least 2 points and 1 dimension");
  if (std::ranges::all_of(d.condensed(), [](float v) { return v == 0.0f; })) {
    throw Error(ErrorKind::DegenerateMatrix, "all distances are zero");
  }
  SquareMatrix sq(s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) {
      double v = d(i, j);
      sq(i, j) = v * v;
    }
  std::vector<double> row_mean(s, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) row_mean[i] += sq(i, j);
    grand += row_mean[i];
    row_mean[i] /= static_cast<double>(s);
  }
  grand /= static_cast<double>(s * s);
  SquareMatrix gram(s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) gram(i, j) = -0.5 * (sq(i, j) - row_mean[i] - row_mean[j] + grand);

  auto eig = symmetric_eigen(std::move(gram));
  Projection p{d.ids(), {}, ProjectionMethod::Mds, {}};
  auto clamped = detail::embed_from_gram(eig, dims, p.coords);

  double negative = 0.0, absolute = 0.0;
  for (double lambda : eig.values) {
    absolute += std::abs(lambda);
    if (lambda < 0.0) negative -= lambda;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      double e = 0.0;
      for (std::size_t k = 0; k < dims; ++k) {
        double diff = p.coords[i][k] - p.coords[j][k];
        e += diff * diff;
      }
      double target = d(i, j);
      num += (target - std::sqrt(e)) * (target - std::sqrt(e));
      den += target * target;
    }
  }
  p.diagnostics["stress"] = std::sqrt(num / den);
  p.diagnostics["negative_mass"] = absolute > 0.0 ? negative / absolute : 0.0;
  p.diagnostics["clamped_dims"] = static_cast<double>(clamped);
  return p;
}

/// Centred Gram matrix of the representatives seen as real vectors in
/// {-1,0,1}^M. Inner products come from presence/absence bitset popcounts.
inline SquareMatrix centred_representative_gram(std::span<const SynsetRepresentative> reps) {
  const auto s = reps.size();
  const auto m = reps.front().n_features();
  std::vector<PresenceBitset> plus(s), minus(s);
  for (std::size_t i = 0; i < s; ++i) {
    if (reps[i].n_features() != m) throw Error(ErrorKind::DimensionMismatch, "representative " + reps[i].synset_id);
    plus[i] = reps[i].presence;
    minus[i] = PresenceBitset(m);
    for (std::size_t j = 0; j < m; ++j)
      if (reps[i].ternary[j] == -1) minus[i].set(j);
  }
  SquareMatrix k(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i; j < s; ++j) {
      auto pp = detail::intersection_count(plus[i].words(), plus[j].words());
      auto nn = detail::intersection_count(minus[i].words(), minus[j].words());
      auto pn = detail::intersection_count(plus[i].words(), minus[j].words());
      auto np = detail::intersection_count(minus[i].words(), plus[j].words());
      k(i, j) = k(j, i) = static_cast<double>(pp + nn) - static_cast<double>(pn + np);
    }
  }
  std::vector<double> row_mean(s, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) row_mean[i] += k(i, j);
    grand += row_mean[i];
    row_mean[i] /= static_cast<double>(s);
  }
  grand /= static_cast<double>(s * s);
  SquareMatrix g(s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) g(i, j) = k(i, j) - row_mean[i] - row_mean[j] + grand;
  return g;
}

/// Principal-component variances (descending, clamped at 0); the
/// reconstruction error of the top-k components is the sum of the rest.
inline std::vector<double> pca_spectrum(std::span<const SynsetRepresentative> reps) {
  if (reps.size() < 2) throw Error(ErrorKind::TooFewSynsets, "PCA needs at least 2 representatives");
  auto eig = symmetric_eigen(centred_representative_gram(reps));
  for (auto& v : eig.values) v = std::max(v, 0.0);
  return eig.values;
}

inline Projection pca_projection(std::span<const SynsetRepresentative> reps, std::size_t dims = 2) {
  if (reps.size() < 2 || dims < 1) throw Error(ErrorKind::InvalidArgument, "PCA needs at least 2 representatives");
  auto eig = symmetric_eigen(centred_representative_gram(reps));
  double total = 0.0;
  for (double v : eig.values) total += std::max(v, 0.0);
  if (total <= 1e-9) throw Error(ErrorKind::DegenerateMatrix, "representatives have zero variance");
  Projection p{{}, {}, ProjectionMethod::Pca, {}};
  for (const auto& r : reps) p.ids.push_back(r.synset_id);
  detail::embed_from_gram(eig, dims, p.coords);
  for (std::size_t k = 0; k < dims && k < eig.values.size(); ++k) {
    p.diagnostics["explained_variance_" + std::to_string(k + 1)] = std::max(eig.values[k], 0.0) / total;
  }
  return p;
}

/// CSV `synset_id,x,y` (extra dimensions as further columns) under a
/// `# method=..., diag=...` header line.
inline std::string write_projection_csv(const Projection& p) {
  std::string out = "# method=";
  out += p.method == ProjectionMethod::Mds ? "mds" : "pca";
  out += ", diag=";
  bool first = true;
  for (const auto& [k, v] : p.diagnostics) {
    if (!first) out += ';';
    out += k + ':' + text::format_number(v);
    first = false;
  }
  out += '\n';
  for (std::size_t i = 0; i < p.ids.size(); ++i) {
    out += p.ids[i];
    for (double c : p.coords[i]) out += ',' + text::format_number(c == 0.0 ? 0.0 : c);
    out += '\n';
  }
  return out;
}

}  // namespace vd
