#pragma once

// Seeded synthetic fixtures: raw activations with synset structure, a
// manifest, a tree taxonomy over the synsets, a layer layout and an IC table.
// Randomness comes from raw std::mt19937_64 output (no std distributions,
// whose algorithms are implementation-defined).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vd/ingest.hpp"
#include "vd/text.hpp"

namespace vd {

struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t n_samples = 100;
  std::size_t n_features = 512;
  std::size_t n_synsets = 10;
};

struct SynthFixture {
  RawEmbeddingMatrix raw;
  Manifest manifest;
  std::vector<std::pair<std::string, std::string>> taxonomy_edges;  // child, parent
  LayerLayout layout;
  std::map<std::string, double> information_content;
};

class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

  double normal() {
    if (spare_) {
      double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

inline std::string synth_synset_id(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "n%08zu", 10000000 + k);
  return buf;
}

inline std::string synth_internal_id(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "n%08zu", k);
  return buf;
}

inline SynthFixture make_synth_fixture(const SynthConfig& cfg) {
  if (cfg.n_samples == 0 || cfg.n_features == 0 || cfg.n_synsets == 0 || cfg.n_synsets > cfg.n_samples) {
    throw Error(ErrorKind::InvalidArgument, "synth needs 0 < synsets <= samples and features > 0");
  }
  SynthRng rng(cfg.seed);
  const auto m = cfg.n_features;
  const auto k = cfg.n_synsets;

  // Taxonomy: internal nodes form a random tree under node 0; synsets hang
  // off random internal nodes. Parents always precede children, so it is acyclic.
  SynthFixture fx;
  const std::size_t internal = std::max<std::size_t>(1, k / 3);
  std::vector<std::size_t> internal_parent(internal, 0);
  for (std::size_t i = 1; i < internal; ++i) {
    internal_parent[i] = rng.below(i);
    fx.taxonomy_edges.emplace_back(synth_internal_id(i), synth_internal_id(internal_parent[i]));
  }
  std::vector<std::size_t> synset_parent(k);
  for (std::size_t s = 0; s < k; ++s) {
    synset_parent[s] = rng.below(internal);
    fx.taxonomy_edges.emplace_back(synth_synset_id(s), synth_internal_id(synset_parent[s]));
  }

  // IC from leaf frequencies: p(c) = synsets under c / all synsets.
  std::vector<std::size_t> under(internal, 0);
  for (std::size_t s = 0; s < k; ++s) {
    for (auto n = synset_parent[s];; n = internal_parent[n]) {
      ++under[n];
      if (n == 0) break;
    }
    fx.information_content[synth_synset_id(s)] = -std::log(1.0 / static_cast<double>(k));
  }
  for (std::size_t i = 0; i < internal; ++i) {
    double p = static_cast<double>(under[i]) / static_cast<double>(k);
    fx.information_content[synth_internal_id(i)] = under[i] == 0 ? -std::log(1.0 / static_cast<double>(k)) : -std::log(p);
  }

  // Prototypes: each synset shifts a sparse subset of features; per-feature
  // scale and offset mimic heterogeneous CNN units.
  std::vector<double> prototype(k * m, 0.0);
  for (auto& v : prototype)
    if (rng.uniform() < 0.2) v = 1.5 * (rng.uniform() < 0.7 ? 1.0 : -1.0);
  std::vector<double> scale(m), offset(m);
  for (std::size_t j = 0; j < m; ++j) {
    scale[j] = std::exp(2.0 * rng.uniform() - 1.0);
    offset[j] = 2.0 * rng.uniform();
  }

  std::vector<float> values(cfg.n_samples * m);
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    // round-robin keeps every synset non-empty
    auto s = i < k ? i : rng.below(k);
    fx.manifest.entries.push_back({i, "img_" + std::to_string(i), synth_synset_id(s)});
    for (std::size_t j = 0; j < m; ++j) {
      values[i * m + j] = static_cast<float>(offset[j] + scale[j] * (prototype[s * m + j] + rng.normal()));
    }
  }
  fx.raw = RawEmbeddingMatrix(cfg.n_samples, m, std::move(values));

  const std::size_t conv_end = m >= 4 ? (3 * m) / 4 : m;
  const std::size_t split = conv_end / 2;
  if (split > 0) fx.layout.segments.push_back({"conv_a", LayerKind::Convolutional, 0, split});
  if (conv_end > split) fx.layout.segments.push_back({"conv_b", LayerKind::Convolutional, split, conv_end});
  if (m > conv_end) fx.layout.segments.push_back({"fc", LayerKind::FullyConnected, conv_end, m});
  return fx;
}

inline std::string write_taxonomy_edges(const std::vector<std::pair<std::string, std::string>>& edges) {
  std::string out;
  for (const auto& [c, p] : edges) out += c + '\t' + p + '\n';
  return out;
}

inline std::string write_information_content(const std::map<std::string, double>& ic) {
  std::string out;
  for (const auto& [id, v] : ic) out += id + '\t' + text::format_number(v == 0.0 ? 0.0 : v) + '\n';
  return out;
}

}  // namespace vd
