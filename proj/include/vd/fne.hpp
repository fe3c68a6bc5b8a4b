#pragma once

// Full-network embedding post-processing: per-feature standardization,
// ternary discretization, and class-proportion diagnostics.

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vd/binio.hpp"
#include "vd/error.hpp"
#include "vd/ingest.hpp"
#include "vd/ternary.hpp"
#include "vd/text.hpp"

namespace vd {

struct StandardizationStats {
  std::vector<float> means;
  std::vector<float> stddevs;  // population; 0 for constant features

  std::size_t size() const noexcept { return means.size(); }
  friend bool operator==(const StandardizationStats&, const StandardizationStats&) = default;
};

struct Thresholds {
  float ft_minus = -0.25f;
  float ft_plus = 0.15f;

  Thresholds() = default;
  Thresholds(float minus, float plus) : ft_minus(minus), ft_plus(plus) {
    if (!(ft_minus <= 0.0f && 0.0f <= ft_plus)) {
      throw Error(ErrorKind::InvalidArgument, "thresholds must satisfy ft_minus <= 0 <= ft_plus");
    }
  }

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

inline StandardizationStats compute_standardization_stats(const RawEmbeddingMatrix& m) {
  const auto n = m.n_samples();
  const auto f = m.n_features();
  std::vector<double> sum(f, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = m.row(i);
    for (std::size_t j = 0; j < f; ++j) sum[j] += row[j];
  }
  std::vector<double> mean(f);
  for (std::size_t j = 0; j < f; ++j) mean[j] = sum[j] / static_cast<double>(n);

  std::vector<double> sq(f, 0.0);
  std::vector<bool> constant(f, true);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = m.row(i);
    for (std::size_t j = 0; j < f; ++j) {
      double d = row[j] - mean[j];
      sq[j] += d * d;
      if (row[j] != m(0, j)) constant[j] = false;
    }
  }
  StandardizationStats stats{std::vector<float>(f), std::vector<float>(f)};
  for (std::size_t j = 0; j < f; ++j) {
    stats.means[j] = static_cast<float>(mean[j]);
    // Exactly-constant columns get stddev 0 even if rounding left sq[j] > 0.
    stats.stddevs[j] = constant[j] ? 0.0f : static_cast<float>(std::sqrt(sq[j] / static_cast<double>(n)));
  }
  return stats;
}

inline RawEmbeddingMatrix apply_standardization(const RawEmbeddingMatrix& m, const StandardizationStats& stats) {
  if (stats.means.size() != m.n_features() || stats.stddevs.size() != m.n_features()) {
    throw Error(ErrorKind::DimensionMismatch, "stats cover " + std::to_string(stats.means.size()) +
                                                  " features, matrix has " + std::to_string(m.n_features()));
  }
  const auto f = m.n_features();
  std::vector<float> out(m.values().size());
  for (std::size_t i = 0; i < m.n_samples(); ++i) {
    auto row = m.row(i);
    for (std::size_t j = 0; j < f; ++j) {
      double sd = stats.stddevs[j];
      out[i * f + j] = sd > 0.0 ? static_cast<float>((row[j] - static_cast<double>(stats.means[j])) / sd) : 0.0f;
    }
  }
  return {m.n_samples(), f, std::move(out)};
}

struct Standardized {
  RawEmbeddingMatrix matrix;
  StandardizationStats stats;
};

inline Standardized standardize(const RawEmbeddingMatrix& m) {
  auto stats = compute_standardization_stats(m);
  auto z = apply_standardization(m, stats);
  return {std::move(z), std::move(stats)};
}

/// v <= ft_minus -> -1 (checked first), v >= ft_plus -> +1, otherwise 0.
inline Ternary discretize_value(float v, const Thresholds& t) noexcept {
  if (v <= t.ft_minus) return -1;
  if (v >= t.ft_plus) return 1;
  return 0;
}

inline TernaryMatrix discretize(const RawEmbeddingMatrix& standardized, const Thresholds& t) {
  TernaryMatrix out(standardized.n_samples(), standardized.n_features());
  for (std::size_t i = 0; i < standardized.n_samples(); ++i) {
    auto src = standardized.row(i);
    auto dst = out.mutable_row(i);
    for (std::size_t j = 0; j < src.size(); ++j) packing::set(dst, j, discretize_value(src[j], t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Proportions

struct ClassCounts {
  std::uint64_t minus = 0;
  std::uint64_t zero = 0;
  std::uint64_t plus = 0;

  std::uint64_t total() const noexcept { return minus + zero + plus; }
  ClassCounts& operator+=(const ClassCounts& o) noexcept {
    minus += o.minus;
    zero += o.zero;
    plus += o.plus;
    return *this;
  }
};

struct ClassProportions {
  double minus = 0.0;
  double zero = 0.0;
  double plus = 0.0;
  std::uint64_t cells = 0;

  static ClassProportions from(const ClassCounts& c) {
    ClassProportions p;
    p.cells = c.total();
    if (p.cells == 0) return p;
    auto total = static_cast<double>(p.cells);
    p.minus = static_cast<double>(c.minus) / total;
    p.plus = static_cast<double>(c.plus) / total;
    p.zero = 1.0 - p.minus - p.plus;
    return p;
  }
};

struct ScopedProportions {
  std::string scope;  // layer name, or "conv" / "fc" for the per-kind aggregates
  ClassProportions proportions;
};

struct ProportionReport {
  ClassProportions overall;
  std::vector<ScopedProportions> per_layer;
  std::vector<ScopedProportions> per_kind;
};

inline ClassCounts count_classes(const TernaryMatrix& m, std::size_t begin, std::size_t end) {
  ClassCounts c;
  for (std::size_t i = 0; i < m.n_samples(); ++i) {
    auto row = m.row(i);
    for (std::size_t j = begin; j < end; ++j) {
      switch (packing::get(row, j)) {
        case -1: ++c.minus; break;
        case 1: ++c.plus; break;
        default: ++c.zero; break;
      }
    }
  }
  return c;
}

inline ProportionReport feature_type_proportions(const TernaryMatrix& m, const std::optional<LayerLayout>& layout = {}) {
  ProportionReport report;
  if (!layout) {
    report.overall = ClassProportions::from(count_classes(m, 0, m.n_features()));
    return report;
  }
  validate_layout(*layout, m.n_features());
  ClassCounts all, conv, fc;
  bool any_conv = false, any_fc = false;
  for (const auto& seg : layout->segments) {
    auto c = count_classes(m, seg.start, seg.end_exclusive);
    all += c;
    if (seg.kind == LayerKind::Convolutional) {
      conv += c;
      any_conv = true;
    } else {
      fc += c;
      any_fc = true;
    }
    report.per_layer.push_back({seg.layer_name, ClassProportions::from(c)});
  }
  report.overall = ClassProportions::from(all);
  if (any_conv) report.per_kind.push_back({"conv", ClassProportions::from(conv)});
  if (any_fc) report.per_kind.push_back({"fc", ClassProportions::from(fc)});
  return report;
}

// ---------------------------------------------------------------------------
// FNETER1

inline constexpr std::string_view kTernaryMagic = "FNETER1";

struct TernaryFile {
  TernaryMatrix matrix;
  Thresholds thresholds;
};

inline binio::Bytes write_ternary_matrix(const TernaryMatrix& m, const Thresholds& t) {
  binio::Bytes out;
  out.reserve(23 + m.packed().size());
  binio::put_bytes(out, kTernaryMagic);
  binio::put_u32(out, static_cast<std::uint32_t>(m.n_samples()));
  binio::put_u32(out, static_cast<std::uint32_t>(m.n_features()));
  binio::put_f32(out, t.ft_minus);
  binio::put_f32(out, t.ft_plus);
  binio::put_bytes(out, m.packed());
  return out;
}

inline TernaryFile read_ternary_matrix(std::span<const std::uint8_t> data) {
  binio::Reader in(data);
  in.expect_magic(kTernaryMagic);
  std::size_t rows = in.u32("n_samples");
  std::size_t cols = in.u32("n_features");
  float minus = in.f32("ft_minus");
  float plus = in.f32("ft_plus");
  TernaryMatrix m(rows, cols);
  auto packed = in.bytes(m.packed().size(), "packed rows");
  for (std::size_t i = 0; i < rows; ++i) packing::validate_row(packed.subspan(i * m.row_bytes(), m.row_bytes()), cols);
  std::ranges::copy(packed, m.mutable_packed().begin());
  return {std::move(m), Thresholds(minus, plus)};
}

inline TernaryFile read_ternary_matrix(const std::filesystem::path& path) {
  return read_ternary_matrix(binio::read_file(path));
}

// ---------------------------------------------------------------------------
// Stats TSV: feature<TAB>mean<TAB>stddev

inline std::string write_stats(const StandardizationStats& s) {
  std::string out = "# feature\tmean\tstddev\n";
  for (std::size_t j = 0; j < s.size(); ++j) {
    out += std::to_string(j) + '\t' + text::format_number(s.means[j]) + '\t' + text::format_number(s.stddevs[j]) + '\n';
  }
  return out;
}

inline StandardizationStats read_stats(std::string_view source) {
  StandardizationStats s;
  for (const auto& line : text::data_lines(source)) {
    auto fields = text::split_tabs(line.content);
    std::size_t j = 0;
    float mean = 0, sd = 0;
    if (fields.size() != 3 || !text::parse_number(fields[0], j) || j != s.size() ||
        !text::parse_number(fields[1], mean) || !text::parse_number(fields[2], sd) || !(sd >= 0) ||
        !std::isfinite(mean) || !std::isfinite(sd)) {
      throw Error(ErrorKind::MalformedRow, "stats line " + std::to_string(line.number));
    }
    s.means.push_back(mean);
    s.stddevs.push_back(sd);
  }
  return s;
}

}  // namespace vd
