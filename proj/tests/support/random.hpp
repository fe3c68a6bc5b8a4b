#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vd/representative.hpp"

namespace testing_support {

/// Ternary row with independent values: +1 w.p. p_plus, -1 w.p. p_minus.
inline std::vector<int> random_row(std::mt19937_64& rng, std::size_t m, double p_plus = 0.3, double p_minus = 0.3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> row(m);
  for (auto& v : row) {
    double x = u(rng);
    v = x < p_plus ? 1 : (x < p_plus + p_minus ? -1 : 0);
  }
  return row;
}

inline vd::TernaryVector to_vector(const std::vector<int>& row) {
  vd::TernaryVector v(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) v.set(j, static_cast<vd::Ternary>(row[j]));
  return v;
}

inline vd::SynsetRepresentative make_rep(const std::string& id, const std::vector<int>& row, std::size_t n = 1) {
  return {id, to_vector(row), n};
}

inline std::string synset_name(std::size_t k) {
  std::string s = std::to_string(k);
  return "s" + std::string(6 - std::min<std::size_t>(6, s.size()), '0') + s;
}

}  // namespace testing_support
