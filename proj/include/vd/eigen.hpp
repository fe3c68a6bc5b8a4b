#pragma once

// Cyclic Jacobi eigensolver for dense symmetric matrices.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "vd/error.hpp"

namespace vd {

/// Dense row-major square matrix of doubles.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t size) : n(size), data(size * size, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) noexcept { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data[i * n + j]; }
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  SquareMatrix vectors;        // column k pairs with values[k]
  int sweeps = 0;
};

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue. Each
/// eigenvector is signed so that its largest-magnitude component (first on
/// ties) is positive, which makes downstream projections deterministic.
inline EigenDecomposition symmetric_eigen(SquareMatrix a, double tolerance = 1e-10, int max_sweeps = 100) {
  const auto n = a.n;
  SquareMatrix v(n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  double norm = 0.0;
  for (double x : a.data) norm += x * x;
  const double target = tolerance * std::max(1.0, std::sqrt(norm));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() >= target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p);
          double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k);
          double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p);
          double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](auto x, auto y) { return a(x, x) > a(y, y); });

  EigenDecomposition out{std::vector<double>(n), SquareMatrix(n), sweep};
  for (std::size_t k = 0; k < n; ++k) {
    auto src = order[k];
    out.values[k] = a(src, src);
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v(i, src)) > std::abs(v(pivot, src))) pivot = i;
    double sign = v(pivot, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = sign * v(i, src);
  }
  return out;
}

}  // namespace vd
