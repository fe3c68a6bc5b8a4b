#pragma once

// WordNet-style hypernym taxonomy and the lexical similarities used as a
// baseline for the visual distance: path, Wu-Palmer and Lin.
//
// Conventions: depth is the node count of the longest root-to-node hypernym
// path (roots have depth 1); the LCS is the deepest common ancestor (a node is
// its own ancestor), ties going to the smallest id; path length counts edges
// of the shortest path with edges taken as undirected.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vd/distance.hpp"
#include "vd/error.hpp"
#include "vd/text.hpp"

namespace vd {

class Taxonomy {
 public:
  using Edge = std::pair<std::string, std::string>;  // child, parent

  Taxonomy() = default;

  /// Builds and validates the DAG. Duplicate edges are dropped; self loops and
  /// cycles raise CycleDetected.
  static Taxonomy from_edges(std::span<const Edge> edges, std::span<const std::string> extra_nodes = {}) {
    Taxonomy t;
    for (const auto& n : extra_nodes) t.intern(n);
    for (const auto& [child, parent] : edges) {
      auto c = t.intern(child);
      auto p = t.intern(parent);
      if (c == p) throw Error(ErrorKind::CycleDetected, child + " -> " + child);
      auto& ps = t.parents_[c];
      if (std::ranges::find(ps, p) == ps.end()) {
        ps.push_back(p);
        t.children_[p].push_back(c);
      }
    }
    t.finalize();
    return t;
  }

  std::size_t size() const noexcept { return names_.size(); }
  bool contains(std::string_view id) const { return index_.contains(std::string(id)); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t node) const noexcept { return names_[node]; }
  std::span<const std::size_t> parents(std::size_t node) const noexcept { return parents_[node]; }
  std::span<const std::size_t> children(std::size_t node) const noexcept { return children_[node]; }
  std::span<const std::size_t> ancestors(std::size_t node) const noexcept { return ancestors_[node]; }

  std::vector<std::string> roots() const {
    std::vector<std::string> r;
    for (std::size_t n = 0; n < size(); ++n)
      if (parents_[n].empty()) r.push_back(names_[n]);
    std::ranges::sort(r);
    return r;
  }

  std::size_t node(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw Error(ErrorKind::UnknownSynset, std::string(id));
    return it->second;
  }

  std::size_t depth_of(std::size_t node) const noexcept { return depth_[node]; }
  std::size_t depth(std::string_view id) const { return depth_[node(id)]; }

  /// Deepest common ancestor of two nodes; nullopt when none exists.
  std::optional<std::size_t> lcs_node(std::size_t a, std::size_t b) const {
    const auto& x = ancestors_[a];
    const auto& y = ancestors_[b];
    std::optional<std::size_t> best;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
      if (x[i] < y[j]) {
        ++i;
      } else if (y[j] < x[i]) {
        ++j;
      } else {
        auto c = x[i];
        if (!best || depth_[c] > depth_[*best] || (depth_[c] == depth_[*best] && names_[c] < names_[*best])) best = c;
        ++i;
        ++j;
      }
    }
    return best;
  }

  /// Undirected edge distances from `source` to every node (SIZE_MAX when unreachable).
  std::vector<std::size_t> undirected_distances(std::size_t source) const {
    std::vector<std::size_t> dist(size(), SIZE_MAX);
    std::deque<std::size_t> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
      auto n = queue.front();
      queue.pop_front();
      auto visit = [&](std::size_t m) {
        if (dist[m] == SIZE_MAX) {
          dist[m] = dist[n] + 1;
          queue.push_back(m);
        }
      };
      for (auto p : parents_[n]) visit(p);
      for (auto c : children_[n]) visit(c);
    }
    return dist;
  }

 private:
  std::size_t intern(const std::string& id) {
    if (id.empty()) throw Error(ErrorKind::MalformedRow, "empty synset id");
    auto [it, inserted] = index_.try_emplace(id, names_.size());
    if (inserted) {
      names_.push_back(id);
      parents_.emplace_back();
      children_.emplace_back();
    }
    return it->second;
  }

  void finalize() {
    const auto n = size();
    if (n == 0) throw Error(ErrorKind::MalformedRow, "taxonomy is empty");
    // Kahn's algorithm from the roots down; leftovers lie on or below a cycle.
    std::vector<std::size_t> pending(n), order;
    std::deque<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v) {
      pending[v] = parents_[v].size();
      if (pending[v] == 0) ready.push_back(v);
    }
    while (!ready.empty()) {
      auto v = ready.front();
      ready.pop_front();
      order.push_back(v);
      for (auto c : children_[v])
        if (--pending[c] == 0) ready.push_back(c);
    }
    if (order.size() != n) report_cycle(pending);

    depth_.assign(n, 1);
    ancestors_.assign(n, {});
    for (auto v : order) {
      auto& anc = ancestors_[v];
      anc.push_back(v);
      for (auto p : parents_[v]) {
        depth_[v] = std::max(depth_[v], depth_[p] + 1);
        anc.insert(anc.end(), ancestors_[p].begin(), ancestors_[p].end());
      }
      std::ranges::sort(anc);
      anc.erase(std::unique(anc.begin(), anc.end()), anc.end());
    }
  }

  [[noreturn]] void report_cycle(const std::vector<std::size_t>& pending) const {
    // Every unprocessed node has an unprocessed parent, so walking those
    // parents must revisit a node.
    std::size_t v = 0;
    while (pending[v] == 0) ++v;
    std::vector<std::size_t> seen_at(size(), SIZE_MAX), walk;
    while (seen_at[v] == SIZE_MAX) {
      seen_at[v] = walk.size();
      walk.push_back(v);
      for (auto p : parents_[v]) {
        if (pending[p] != 0) {
          v = p;
          break;
        }
      }
    }
    std::string cycle;
    for (auto k = seen_at[v]; k < walk.size(); ++k) cycle += names_[walk[k]] + " -> ";
    throw Error(ErrorKind::CycleDetected, cycle + names_[v]);
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> depth_;
  std::vector<std::vector<std::size_t>> ancestors_;
};

/// Parses `child<TAB>parent` rows. A row with a single column declares a node
/// without adding an edge.
inline Taxonomy parse_taxonomy(std::string_view source) {
  std::vector<Taxonomy::Edge> edges;
  std::vector<std::string> nodes;
  for (const auto& line : text::data_lines(source)) {
    auto f = text::split_tabs(line.content);
    if (f.size() == 1 && !f[0].empty()) {
      nodes.emplace_back(f[0]);
    } else if (f.size() == 2 && !f[0].empty() && !f[1].empty()) {
      edges.emplace_back(std::string(f[0]), std::string(f[1]));
    } else {
      throw Error(ErrorKind::MalformedRow, "taxonomy line " + std::to_string(line.number));
    }
  }
  return Taxonomy::from_edges(edges, nodes);
}

inline std::size_t depth(const Taxonomy& t, std::string_view s) { return t.depth(s); }

inline std::string lcs(const Taxonomy& t, std::string_view s1, std::string_view s2) {
  auto c = t.lcs_node(t.node(s1), t.node(s2));
  if (!c) throw Error(ErrorKind::NoCommonAncestor, std::string(s1) + ", " + std::string(s2));
  return t.name(*c);
}

/// 1 / (1 + shortest undirected path length in edges).
inline double path_similarity(const Taxonomy& t, std::string_view s1, std::string_view s2) {
  auto a = t.node(s1);
  auto b = t.node(s2);
  if (!t.lcs_node(a, b)) throw Error(ErrorKind::NoCommonAncestor, std::string(s1) + ", " + std::string(s2));
  auto d = t.undirected_distances(a)[b];
  return 1.0 / (1.0 + static_cast<double>(d));
}

inline double wup_similarity(const Taxonomy& t, std::string_view s1, std::string_view s2) {
  auto a = t.node(s1);
  auto b = t.node(s2);
  auto c = t.lcs_node(a, b);
  if (!c) throw Error(ErrorKind::NoCommonAncestor, std::string(s1) + ", " + std::string(s2));
  return 2.0 * static_cast<double>(t.depth_of(*c)) / static_cast<double>(t.depth_of(a) + t.depth_of(b));
}

/// IC(c) = -log p(c), read from `synset_id<TAB>ic_value`.
class InformationContent {
 public:
  InformationContent() = default;
  explicit InformationContent(std::map<std::string, double> values) : values_(std::move(values)) {
    for (const auto& [id, v] : values_) {
      if (!std::isfinite(v) || v < 0.0) throw Error(ErrorKind::InvalidArgument, "IC of " + id + " must be finite and >= 0");
    }
  }

  double at(std::string_view id) const {
    auto it = values_.find(std::string(id));
    if (it == values_.end()) throw Error(ErrorKind::MissingIC, std::string(id));
    return it->second;
  }

  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::map<std::string, double> values_;
};

inline InformationContent parse_information_content(std::string_view source) {
  std::map<std::string, double> values;
  for (const auto& line : text::data_lines(source)) {
    auto f = text::split_tabs(line.content);
    double v = 0;
    if (f.size() != 2 || f[0].empty() || !text::parse_number(f[1], v) || !std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::MalformedRow, "IC line " + std::to_string(line.number));
    }
    values[std::string(f[0])] = v;
  }
  return InformationContent(std::move(values));
}

inline double lin_similarity(const Taxonomy& t, const InformationContent& ic, std::string_view s1, std::string_view s2) {
  auto common = lcs(t, s1, s2);
  double denom = ic.at(s1) + ic.at(s2);
  double shared = ic.at(common);
  if (denom <= 0.0) throw Error(ErrorKind::ZeroDenominator, "IC(" + std::string(s1) + ") + IC(" + std::string(s2) + ") = 0");
  return 2.0 * shared / denom;
}

enum class LexicalMeasure { Path, WuPalmer, Lin };

constexpr std::string_view to_string(LexicalMeasure m) noexcept {
  switch (m) {
    case LexicalMeasure::Path: return "path";
    case LexicalMeasure::WuPalmer: return "wup";
    case LexicalMeasure::Lin: return "lin";
  }
  return "?";
}

inline LexicalMeasure parse_measure(std::string_view name) {
  if (name == "path") return LexicalMeasure::Path;
  if (name == "wup") return LexicalMeasure::WuPalmer;
  if (name == "lin") return LexicalMeasure::Lin;
  throw Error(ErrorKind::InvalidArgument, "unknown measure " + std::string(name));
}

inline std::vector<std::string> read_id_list(std::string_view source) {
  std::vector<std::string> ids;
  for (const auto& line : text::data_lines(source)) ids.emplace_back(line.content);
  return ids;
}

/// 1 - similarity over all pairs of `ids` (sorted and deduplicated first).
inline DistanceMatrix lexical_distance_matrix(const Taxonomy& t, std::vector<std::string> ids, LexicalMeasure measure,
                                              const InformationContent* ic = nullptr) {
  std::ranges::sort(ids);
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const auto s = ids.size();
  if (s < 2) throw Error(ErrorKind::TooFewSynsets, "need at least 2 synsets, got " + std::to_string(s));
  if (measure == LexicalMeasure::Lin && !ic) throw Error(ErrorKind::MissingIC, "lin measure requires an IC table");
  std::vector<std::size_t> nodes(s);
  for (std::size_t k = 0; k < s; ++k) nodes[k] = t.node(ids[k]);

  std::vector<float> condensed(DistanceMatrix::pair_count(s));
  for (std::size_t i = 0; i + 1 < s; ++i) {
    std::vector<std::size_t> dist;
    if (measure == LexicalMeasure::Path) dist = t.undirected_distances(nodes[i]);
    for (std::size_t j = i + 1; j < s; ++j) {
      double sim = 0.0;
      try {
        switch (measure) {
          case LexicalMeasure::Path:
            if (!t.lcs_node(nodes[i], nodes[j])) throw Error(ErrorKind::NoCommonAncestor, "no common ancestor");
            sim = 1.0 / (1.0 + static_cast<double>(dist[nodes[j]]));
            break;
          case LexicalMeasure::WuPalmer:
            sim = wup_similarity(t, ids[i], ids[j]);
            break;
          case LexicalMeasure::Lin:
            sim = lin_similarity(t, *ic, ids[i], ids[j]);
            break;
        }
      } catch (const Error& e) {
        throw Error(e.kind(), "pair (" + ids[i] + ", " + ids[j] + "): " + e.what());
      }
      condensed[DistanceMatrix::index(s, i, j)] = static_cast<float>(std::clamp(1.0 - sim, 0.0, 1.0));
    }
  }
  DistanceMatrix::Parameters params{{"conversion", "1-sim"},
                                    {"depth", "longest-root-path,root=1"},
                                    {"lcs_tie", "smallest-id"},
                                    {"path", "undirected-shortest,1/(1+edges)"}};
  return {std::move(ids), std::move(condensed), std::string(to_string(measure)), std::move(params)};
}

}  // namespace vd
