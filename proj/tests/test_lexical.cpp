#include <gtest/gtest.h>

#include <map>
#include <random>

#include "support/expect.hpp"
#include "support/oracles.hpp"
#include "vd/lexical.hpp"

namespace {

using testing_support::kind_of;
using vd::ErrorKind;

const char* kChain = "b\ta\nc\tb\n";
const char* kDiamond = "d\tb\nd\tc\nb\ta\nc\ta\n";

struct RandomTaxonomy {
  std::vector<vd::Taxonomy::Edge> edges;
  std::multimap<std::string, std::string> parents;
  std::vector<std::string> nodes;
};

RandomTaxonomy random_taxonomy(std::mt19937_64& rng, std::size_t n) {
  RandomTaxonomy t;
  for (std::size_t i = 0; i < n; ++i) t.nodes.push_back("n" + std::to_string(100 + i));
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t n_parents = 1 + (rng() % 4 == 0);
    std::set<std::size_t> chosen;
    while (chosen.size() < std::min(n_parents, i)) chosen.insert(rng() % i);
    for (auto p : chosen) {
      t.edges.emplace_back(t.nodes[i], t.nodes[p]);
      t.parents.emplace(t.nodes[i], t.nodes[p]);
    }
  }
  return t;
}

TEST(ParseTaxonomy, Examples) {
  auto t = vd::parse_taxonomy("b\ta\nc\ta\n");
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.roots(), (std::vector<std::string>{"a"}));
  auto d = vd::parse_taxonomy(kDiamond);
  EXPECT_EQ(d.roots(), (std::vector<std::string>{"a"}));
  EXPECT_EQ(d.size(), 4u);
}

TEST(ParseTaxonomy, DeduplicatesAndDeclaresNodes) {
  auto t = vd::parse_taxonomy("# comment\nb\ta\nb\ta\nz\n");
  EXPECT_EQ(t.parents(t.node("b")).size(), 1u);
  EXPECT_EQ(t.roots(), (std::vector<std::string>{"a", "z"}));
}

TEST(ParseTaxonomy, RejectsCyclesAndBadRows) {
  EXPECT_EQ(kind_of([] { vd::parse_taxonomy("a\tb\nb\ta\n"); }), ErrorKind::CycleDetected);
  EXPECT_EQ(kind_of([] { vd::parse_taxonomy("a\ta\n"); }), ErrorKind::CycleDetected);
  EXPECT_EQ(kind_of([] { vd::parse_taxonomy("r\tx\nb\ta\nc\tb\na\tc\n"); }), ErrorKind::CycleDetected);
  EXPECT_EQ(kind_of([] { vd::parse_taxonomy("a\tb\tc\n"); }), ErrorKind::MalformedRow);
  EXPECT_EQ(kind_of([] { vd::parse_taxonomy("a\t\n"); }), ErrorKind::MalformedRow);
  try {
    vd::parse_taxonomy("x\tr\na\tb\nb\tc\nc\ta\n");
    FAIL();
  } catch (const vd::Error& e) {
    std::string msg = e.what();
    for (auto id : {"a", "b", "c"}) EXPECT_NE(msg.find(id), std::string::npos) << msg;
  }
}

TEST(ParseTaxonomy, RejectsInjectedBackEdges) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = random_taxonomy(rng, 3 + rng() % 20);
    // make some node the child of one of its own descendants
    std::string node = t.nodes[1 + rng() % (t.nodes.size() - 1)];
    auto ancestors = oracle::ancestors(t.parents, node);
    std::vector<std::string> up(ancestors.begin(), ancestors.end());
    std::string anc = up[rng() % up.size()];
    t.edges.emplace_back(anc, node);
    EXPECT_EQ(kind_of([&] { vd::Taxonomy::from_edges(t.edges); }), ErrorKind::CycleDetected);
  }
}

TEST(Depth, LongestNodeCountedPath) {
  auto chain = vd::parse_taxonomy(kChain);
  EXPECT_EQ(vd::depth(chain, "a"), 1u);
  EXPECT_EQ(vd::depth(chain, "c"), 3u);
  EXPECT_EQ(vd::depth(vd::parse_taxonomy(kDiamond), "d"), 3u);
  EXPECT_EQ(vd::depth(vd::parse_taxonomy("d\tb\nd\ta\nb\ta\n"), "d"), 3u);
  EXPECT_EQ(kind_of([&] { vd::depth(chain, "zz"); }), ErrorKind::UnknownSynset);
}

TEST(Depth, MatchesPathEnumerationOnRandomDags) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto r = random_taxonomy(rng, 2 + rng() % 25);
    auto t = vd::Taxonomy::from_edges(r.edges);
    for (const auto& n : r.nodes) EXPECT_EQ(t.depth(n), oracle::longest_path_depth(r.parents, n));
  }
}

TEST(Lcs, Examples) {
  auto chain = vd::parse_taxonomy(kChain);
  EXPECT_EQ(vd::lcs(chain, "c", "c"), "c");
  EXPECT_EQ(vd::lcs(chain, "b", "c"), "b");
  auto siblings = vd::parse_taxonomy("b\ta\nc\ta\n");
  EXPECT_EQ(vd::lcs(siblings, "b", "c"), "a");
  // x and y share two depth-2 parents p and q; the smaller id wins
  auto tie = vd::parse_taxonomy("q\tr\np\tr\nx\tq\nx\tp\ny\tq\ny\tp\n");
  EXPECT_EQ(vd::lcs(tie, "x", "y"), "p");
  auto forest = vd::parse_taxonomy("b\ta\nd\tc\n");
  EXPECT_EQ(kind_of([&] { vd::lcs(forest, "b", "d"); }), ErrorKind::NoCommonAncestor);
}

TEST(Lcs, DepthBoundedByBothSynsets) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    auto r = random_taxonomy(rng, 2 + rng() % 25);
    auto t = vd::Taxonomy::from_edges(r.edges);
    for (int q = 0; q < 20; ++q) {
      const auto& a = r.nodes[rng() % r.nodes.size()];
      const auto& b = r.nodes[rng() % r.nodes.size()];
      auto c = vd::lcs(t, a, b);
      EXPECT_LE(t.depth(c), std::min(t.depth(a), t.depth(b)));
      EXPECT_EQ(c, vd::lcs(t, b, a));
      auto common = oracle::ancestors(r.parents, a);
      EXPECT_TRUE(common.contains(c));
      EXPECT_TRUE(oracle::ancestors(r.parents, b).contains(c));
    }
  }
}

TEST(PathSimilarity, Examples) {
  auto chain = vd::parse_taxonomy(kChain);
  EXPECT_EQ(vd::path_similarity(chain, "b", "b"), 1.0);
  EXPECT_EQ(vd::path_similarity(chain, "b", "c"), 0.5);
  EXPECT_EQ(vd::path_similarity(chain, "a", "c"), 1.0 / 3.0);
  auto siblings = vd::parse_taxonomy("b\ta\nc\ta\n");
  EXPECT_EQ(vd::path_similarity(siblings, "b", "c"), 1.0 / 3.0);
  auto forest = vd::parse_taxonomy("b\ta\nd\tc\n");
  EXPECT_EQ(kind_of([&] { vd::path_similarity(forest, "b", "d"); }), ErrorKind::NoCommonAncestor);
}

TEST(PathSimilarity, DecreasesAlongChain) {
  std::string tsv;
  for (int k = 1; k < 12; ++k) tsv += "c" + std::to_string(k) + "\tc" + std::to_string(k - 1) + "\n";
  auto t = vd::parse_taxonomy(tsv);
  for (int k = 1; k < 12; ++k) {
    EXPECT_LT(vd::path_similarity(t, "c0", "c" + std::to_string(k)),
              vd::path_similarity(t, "c0", "c" + std::to_string(k - 1)));
  }
}

TEST(WupSimilarity, Examples) {
  auto chain = vd::parse_taxonomy(kChain);
  EXPECT_EQ(vd::wup_similarity(chain, "c", "c"), 1.0);
  EXPECT_EQ(vd::wup_similarity(chain, "b", "c"), 0.8);
  auto siblings = vd::parse_taxonomy("b\ta\nc\ta\n");
  EXPECT_EQ(vd::wup_similarity(siblings, "b", "c"), 0.5);
}

TEST(LinSimilarity, Examples) {
  auto chain = vd::parse_taxonomy(kChain);
  vd::InformationContent ic({{"a", 0.5}, {"b", 1.0}, {"c", 2.0}});
  EXPECT_EQ(vd::lin_similarity(chain, ic, "b", "c"), 2.0 / 3.0);
  EXPECT_EQ(vd::lin_similarity(chain, ic, "c", "c"), 1.0);
  vd::InformationContent root_zero({{"a", 0.0}, {"b", 1.0}, {"c", 2.0}});
  auto siblings = vd::parse_taxonomy("b\ta\nc\ta\n");
  EXPECT_EQ(vd::lin_similarity(siblings, root_zero, "b", "c"), 0.0);
  vd::InformationContent missing({{"b", 1.0}, {"c", 2.0}});
  EXPECT_EQ(kind_of([&] { vd::lin_similarity(chain, missing, "a", "b"); }), ErrorKind::MissingIC);
  vd::InformationContent zeros({{"a", 0.0}, {"b", 0.0}, {"c", 0.0}});
  EXPECT_EQ(kind_of([&] { vd::lin_similarity(chain, zeros, "a", "a"); }), ErrorKind::ZeroDenominator);
}

TEST(InformationContentFile, Parses) {
  auto ic = vd::parse_information_content("# ic\na\t0.5\nb\t1\n");
  EXPECT_EQ(ic.at("a"), 0.5);
  EXPECT_EQ(ic.size(), 2u);
  EXPECT_EQ(kind_of([] { vd::parse_information_content("a\t-1\n"); }), ErrorKind::MalformedRow);
  EXPECT_EQ(kind_of([] { vd::parse_information_content("a\tnan\n"); }), ErrorKind::MalformedRow);
}

TEST(LexicalDistanceMatrix, ChainWup) {
  auto chain = vd::parse_taxonomy(kChain);
  auto d = vd::lexical_distance_matrix(chain, {"c", "a", "b"}, vd::LexicalMeasure::WuPalmer);
  EXPECT_EQ(d.ids(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(d.metric_name(), "wup");
  EXPECT_EQ(d(0, 1), static_cast<float>(1.0 - 2.0 / 3.0));
  EXPECT_EQ(d(0, 2), 0.5f);
  EXPECT_EQ(d(1, 2), static_cast<float>(1.0 - 0.8));
  EXPECT_EQ(kind_of([&] { vd::lexical_distance_matrix(chain, {"a"}, vd::LexicalMeasure::Path); }),
            ErrorKind::TooFewSynsets);
  EXPECT_EQ(kind_of([&] { vd::lexical_distance_matrix(chain, {"a", "b"}, vd::LexicalMeasure::Lin); }),
            ErrorKind::MissingIC);
  EXPECT_EQ(kind_of([&] { vd::lexical_distance_matrix(chain, {"a", "q"}, vd::LexicalMeasure::Path); }),
            ErrorKind::UnknownSynset);
}

TEST(LexicalDistanceMatrix, ReportsOffendingPair) {
  auto forest = vd::parse_taxonomy("b\ta\nd\tc\n");
  try {
    vd::lexical_distance_matrix(forest, {"a", "b", "d"}, vd::LexicalMeasure::WuPalmer);
    FAIL();
  } catch (const vd::Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoCommonAncestor);
    EXPECT_NE(std::string(e.what()).find("(a, d)"), std::string::npos) << e.what();
  }
}

TEST(LexicalDistanceMatrix, MatchesPairwiseOracle) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    auto r = random_taxonomy(rng, 3 + rng() % 15);
    auto t = vd::Taxonomy::from_edges(r.edges);
    const auto n = r.nodes.size();
    // all-pairs undirected distances by Floyd-Warshall
    std::map<std::string, std::size_t> pos;
    for (std::size_t k = 0; k < n; ++k) pos[r.nodes[k]] = k;
    std::vector<std::vector<std::size_t>> fw(n, std::vector<std::size_t>(n, 1000));
    for (std::size_t k = 0; k < n; ++k) fw[k][k] = 0;
    for (const auto& [c, p] : r.edges) fw[pos[c]][pos[p]] = fw[pos[p]][pos[c]] = 1;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) fw[i][j] = std::min(fw[i][j], fw[i][k] + fw[k][j]);
    std::map<std::string, double> ic_values;
    for (const auto& id : r.nodes) ic_values[id] = static_cast<double>(oracle::longest_path_depth(r.parents, id));
    vd::InformationContent ic(ic_values);

    auto path = vd::lexical_distance_matrix(t, r.nodes, vd::LexicalMeasure::Path);
    auto wup = vd::lexical_distance_matrix(t, r.nodes, vd::LexicalMeasure::WuPalmer);
    auto lin = vd::lexical_distance_matrix(t, r.nodes, vd::LexicalMeasure::Lin, &ic);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto& a = path.ids()[i];
        const auto& b = path.ids()[j];
        // deepest shared ancestor, smallest id on ties
        auto common = oracle::ancestors(r.parents, a);
        std::string best;
        std::size_t best_depth = 0;
        for (const auto& x : oracle::ancestors(r.parents, b)) {
          if (!common.contains(x)) continue;
          auto dx = oracle::longest_path_depth(r.parents, x);
          if (dx > best_depth) {
            best = x;
            best_depth = dx;
          }
        }
        double da = static_cast<double>(oracle::longest_path_depth(r.parents, a));
        double db = static_cast<double>(oracle::longest_path_depth(r.parents, b));
        EXPECT_EQ(path(i, j), static_cast<float>(1.0 - 1.0 / (1.0 + static_cast<double>(fw[pos[a]][pos[b]]))));
        EXPECT_EQ(wup(i, j), static_cast<float>(1.0 - 2.0 * static_cast<double>(best_depth) / (da + db)));
        EXPECT_EQ(lin(i, j), static_cast<float>(std::clamp(1.0 - 2.0 * ic_values[best] / (da + db), 0.0, 1.0)));
        EXPECT_EQ(vd::wup_similarity(t, a, b), vd::wup_similarity(t, b, a));
        EXPECT_EQ(vd::path_similarity(t, a, b), vd::path_similarity(t, b, a));
      }
    }
  }
}

}  // namespace
