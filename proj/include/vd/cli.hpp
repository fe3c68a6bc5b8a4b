#pragma once

// The `vd` command line: one subcommand per pipeline stage, staged files in
// between.
//
// Exit codes: 0 success, 1 usage error, 2 input-format error, 3 computation
// error. Diagnostics go to `err`; data goes to files or `out`.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vd/cluster.hpp"
#include "vd/correlation.hpp"
#include "vd/diagnostics.hpp"
#include "vd/distance.hpp"
#include "vd/fne.hpp"
#include "vd/ingest.hpp"
#include "vd/lexical.hpp"
#include "vd/parallel.hpp"
#include "vd/projection.hpp"
#include "vd/representative.hpp"
#include "vd/synth.hpp"

namespace vd::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInputFormat = 2, kComputation = 3 };

enum class Subcommand { Discretize, Represent, Distmat, Lexmat, Compare, Cluster, Project, Stats, Synth };

struct RunConfig {
  Subcommand subcommand = Subcommand::Discretize;
  std::string input, output, manifest, reps, taxonomy, ids, ic, layout, a, b;
  std::string stats_in, stats_out, compare_with, newick;
  std::string out_raw, out_manifest, out_taxonomy, out_layout, out_ic, out_ids;
  float ft_minus = -0.25f;
  float ft_plus = 0.15f;
  std::string measure = "wup";
  std::string method = "mds";
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  std::size_t k = 0;
  std::size_t bootstrap = 0;
  std::size_t samples = 100, features = 512, synsets = 10;
};

namespace detail {

using json = nlohmann::ordered_json;

inline void write_text_or_print(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    binio::write_text_atomic(path, text);
  }
}

inline json proportions_json(const ClassProportions& p) {
  return {{"minus", p.minus}, {"zero", p.zero}, {"plus", p.plus}, {"cells", p.cells}};
}

inline json dendrogram_json(const Dendrogram& dg) {
  json merges = json::array();
  for (const auto& m : dg.merges) merges.push_back({m.left, m.right, m.height, m.size});
  return {{"linkage", "average"}, {"leaves", dg.leaves}, {"merges", merges}};
}

inline void run_discretize(const RunConfig& c, std::ostream& err) {
  Thresholds t(c.ft_minus, c.ft_plus);
  auto raw = read_raw_matrix(c.input);
  StandardizationStats stats;
  RawEmbeddingMatrix z;
  if (!c.stats_in.empty()) {
    stats = read_stats(binio::read_text_file(c.stats_in));
    z = apply_standardization(raw, stats);
  } else {
    auto s = standardize(raw);
    z = std::move(s.matrix);
    stats = std::move(s.stats);
  }
  auto ternary = discretize(z, t);
  binio::write_file_atomic(c.output, write_ternary_matrix(ternary, t));
  if (!c.stats_out.empty()) binio::write_text_atomic(c.stats_out, write_stats(stats));
  auto p = feature_type_proportions(ternary).overall;
  err << "vd discretize: " << raw.n_samples() << "x" << raw.n_features() << " ft-=" << t.ft_minus
      << " ft+=" << t.ft_plus << " proportions -1/0/+1 = " << p.minus << "/" << p.zero << "/" << p.plus << "\n";
}

inline void run_represent(const RunConfig& c, std::ostream& err) {
  auto tf = read_ternary_matrix(c.input);
  auto manifest = read_manifest(binio::read_text_file(c.manifest));
  if (manifest.size() != tf.matrix.n_samples()) {
    throw Error(ErrorKind::DimensionMismatch, "manifest has " + std::to_string(manifest.size()) +
                                                  " samples, ternary matrix has " +
                                                  std::to_string(tf.matrix.n_samples()));
  }
  auto reps = build_all_representatives(tf.matrix, group_by_synset(manifest), c.threads);
  binio::write_file_atomic(c.output, write_representatives(reps));
  err << "vd represent: " << reps.size() << " synsets, M=" << tf.matrix.n_features() << " (ft-=" << tf.thresholds.ft_minus
      << " ft+=" << tf.thresholds.ft_plus << ", ties->0)\n";
}

inline void run_distmat(const RunConfig& c, std::ostream& err) {
  auto reps = read_representatives(c.reps);
  auto d = distance_matrix(reps, c.threads);
  binio::write_file_atomic(c.output, write_distance_matrix(d));
  err << "vd distmat: " << d.size() << " synsets, " << d.condensed().size() << " pairs\n";
}

inline void run_lexmat(const RunConfig& c, std::ostream& err) {
  auto measure = parse_measure(c.measure);
  auto tax = parse_taxonomy(binio::read_text_file(c.taxonomy));
  auto ids = read_id_list(binio::read_text_file(c.ids));
  std::optional<InformationContent> ic;
  if (!c.ic.empty()) ic = parse_information_content(binio::read_text_file(c.ic));
  auto d = lexical_distance_matrix(tax, std::move(ids), measure, ic ? &*ic : nullptr);
  binio::write_file_atomic(c.output, write_distance_matrix(d));
  err << "vd lexmat: " << c.measure << " over " << d.size() << " synsets\n";
}

inline void run_compare(const RunConfig& c, std::ostream& out) {
  auto report = compare_matrices(read_distance_matrix(c.a), read_distance_matrix(c.b));
  json j{{"pearson", report.pearson_r},
         {"spearman", report.spearman_rho},
         {"n_pairs", report.n_pairs},
         {"shared_ids", report.shared_ids}};
  write_text_or_print(c.output, j.dump(2) + "\n", out);
}

inline void run_cluster(const RunConfig& c, std::ostream& out, std::ostream& err) {
  auto d = read_distance_matrix(c.input);
  std::optional<DistanceMatrix> other;
  if (!c.compare_with.empty()) {
    if (c.k == 0) throw CLI::ValidationError("--compare requires --k");
    other = read_distance_matrix(c.compare_with);
    std::vector<std::string> shared;
    std::ranges::set_intersection(d.ids(), other->ids(), std::back_inserter(shared));
    if (shared.size() < 2) throw Error(ErrorKind::InsufficientOverlap, std::to_string(shared.size()) + " shared ids");
    if (shared.size() != d.size()) err << "vd cluster: restricting to " << shared.size() << " shared synsets\n";
    d = restrict_matrix(d, shared);
    *other = restrict_matrix(*other, shared);
  }
  auto dg = agglomerative_cluster(d);
  auto j = dendrogram_json(dg);
  if (c.k > 0) {
    auto labels = cut_dendrogram(dg, c.k);
    j["k"] = c.k;
    j["labels"] = labels;
    if (other) {
      auto other_labels = cut_dendrogram(agglomerative_cluster(*other), c.k);
      j["compare"] = {{"metric", other->metric_name()},
                      {"labels", other_labels},
                      {"adjusted_rand_index", adjusted_rand_index(labels, other_labels)}};
    }
  }
  if (!c.newick.empty()) binio::write_text_atomic(c.newick, to_newick(dg) + "\n");
  write_text_or_print(c.output, j.dump(2) + "\n", out);
}

inline void run_project(const RunConfig& c, std::ostream& err) {
  Projection p;
  if (c.method == "mds") {
    if (c.input.empty()) throw CLI::ValidationError("--method mds requires --input");
    p = classical_mds(read_distance_matrix(c.input), 2);
    if (p.diagnostics["negative_mass"] > 1e-12) {
      err << "vd project: warning: negative eigenvalues clamped (negative mass " << p.diagnostics["negative_mass"]
          << ")\n";
    }
  } else {
    if (c.reps.empty()) throw CLI::ValidationError("--method pca requires --reps");
    p = pca_projection(read_representatives(c.reps), 2);
  }
  binio::write_text_atomic(c.output, write_projection_csv(p));
  err << "vd project: " << c.method << " over " << p.ids.size() << " synsets\n";
}

inline void run_stats(const RunConfig& c, std::ostream& out) {
  auto tf = read_ternary_matrix(c.input);
  std::optional<LayerLayout> layout;
  if (!c.layout.empty()) layout = read_layer_layout(binio::read_text_file(c.layout));
  auto report = feature_type_proportions(tf.matrix, layout);
  json j;
  j["thresholds"] = {{"ft_minus", tf.thresholds.ft_minus}, {"ft_plus", tf.thresholds.ft_plus}};
  j["proportions"] = proportions_json(report.overall);
  if (layout) {
    json per_layer = json::object(), per_kind = json::object();
    for (const auto& s : report.per_layer) per_layer[s.scope] = proportions_json(s.proportions);
    for (const auto& s : report.per_kind) per_kind[s.scope] = proportions_json(s.proportions);
    j["per_layer"] = per_layer;
    j["per_kind"] = per_kind;
  }
  std::optional<SynsetGroups> groups;
  if (!c.manifest.empty()) {
    auto manifest = read_manifest(binio::read_text_file(c.manifest));
    if (manifest.size() != tf.matrix.n_samples()) throw Error(ErrorKind::DimensionMismatch, "manifest/matrix sample count");
    groups = group_by_synset(manifest);
  }
  if (!c.taxonomy.empty()) {
    if (!groups) throw CLI::ValidationError("--taxonomy requires --manifest");
    auto report2 = consistency_vs_specificity(tf.matrix, *groups, parse_taxonomy(binio::read_text_file(c.taxonomy)));
    json rows = json::array();
    for (const auto& s : report2.synsets) {
      rows.push_back({{"synset", s.synset_id},
                      {"n_images", s.n_images},
                      {"depth", s.depth},
                      {"consistency", s.consistency ? json(*s.consistency) : json(nullptr)}});
    }
    j["consistency"] = {{"statistic", ConsistencyReport::statistic},
                        {"synsets", rows},
                        {"spearman_vs_depth", report2.spearman_rho ? json(*report2.spearman_rho) : json(nullptr)}};
  }
  if (c.bootstrap > 0) {
    if (!groups) throw CLI::ValidationError("--bootstrap requires --manifest");
    json rows = json::array();
    for (const auto& b : bootstrap_stability(tf.matrix, *groups, c.bootstrap, c.seed.value_or(0))) {
      rows.push_back({{"synset", b.synset_id}, {"mean_vd", b.mean_distance}, {"max_vd", b.max_distance}});
    }
    j["bootstrap"] = {{"rounds", c.bootstrap}, {"seed", c.seed.value_or(0)}, {"synsets", rows}};
  }
  write_text_or_print(c.output, j.dump(2) + "\n", out);
}

inline void run_synth(const RunConfig& c, std::ostream& err) {
  if (!c.seed) throw CLI::ValidationError("synth requires --seed");
  auto fx = make_synth_fixture({*c.seed, c.samples, c.features, c.synsets});
  write_raw_matrix(fx.raw, c.out_raw);
  binio::write_text_atomic(c.out_manifest, write_manifest(fx.manifest));
  binio::write_text_atomic(c.out_taxonomy, write_taxonomy_edges(fx.taxonomy_edges));
  if (!c.out_layout.empty()) binio::write_text_atomic(c.out_layout, write_layer_layout(fx.layout));
  if (!c.out_ic.empty()) binio::write_text_atomic(c.out_ic, write_information_content(fx.information_content));
  if (!c.out_ids.empty()) {
    std::string ids;
    for (const auto& [id, _] : group_by_synset(fx.manifest)) ids += id + "\n";
    binio::write_text_atomic(c.out_ids, ids);
  }
  err << "vd synth: seed " << *c.seed << ", " << c.samples << "x" << c.features << ", " << c.synsets << " synsets\n";
}

}  // namespace detail

/// Runs one invocation. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Visual distance between WordNet synsets from CNN activations", "vd"};
  app.require_subcommand(1);
  RunConfig c;
  c.threads = default_thread_count();

  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", c.threads, "Worker threads (default: VD_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
  };

  auto* discretize = app.add_subcommand("discretize", "Standardize raw activations and map them to {-1,0,1}");
  discretize->add_option("--input", c.input, "FNERAW1 raw matrix")->required();
  discretize->add_option("--output", c.output, "FNETER1 ternary matrix")->required();
  discretize->add_option("--ft-minus", c.ft_minus, "Lower threshold (<= 0)")->capture_default_str();
  discretize->add_option("--ft-plus", c.ft_plus, "Upper threshold (>= 0)")->capture_default_str();
  discretize->add_option("--stats-out", c.stats_out, "Write per-feature mean/stddev TSV");
  discretize->add_option("--stats-in", c.stats_in, "Standardize with these statistics instead of the input's own");

  auto* represent = app.add_subcommand("represent", "Per-synset mode representatives");
  represent->add_option("--input", c.input, "FNETER1 ternary matrix")->required();
  represent->add_option("--manifest", c.manifest, "Sample manifest TSV")->required();
  represent->add_option("--output", c.output, "FNEREP1 representatives")->required();
  add_threads(represent);

  auto* distmat = app.add_subcommand("distmat", "All-pairs visual distance matrix");
  distmat->add_option("--reps", c.reps, "FNEREP1 representatives")->required();
  distmat->add_option("--output", c.output, "VDMAT1 distance matrix")->required();
  add_threads(distmat);

  auto* lexmat = app.add_subcommand("lexmat", "Lexical (path / wup / lin) distance matrix");
  lexmat->add_option("--taxonomy", c.taxonomy, "child<TAB>parent TSV")->required();
  lexmat->add_option("--ids", c.ids, "One synset id per line")->required();
  lexmat->add_option("--measure", c.measure, "path, wup or lin")
      ->check(CLI::IsMember({"path", "wup", "lin"}))
      ->capture_default_str();
  lexmat->add_option("--ic", c.ic, "synset<TAB>IC TSV (required for lin)");
  lexmat->add_option("--output", c.output, "VDMAT1 distance matrix")->required();

  auto* compare = app.add_subcommand("compare", "Pearson / Spearman between two distance matrices");
  compare->add_option("--a", c.a, "First VDMAT1 matrix")->required();
  compare->add_option("--b", c.b, "Second VDMAT1 matrix")->required();
  compare->add_option("--output", c.output, "JSON report path (default: stdout)");

  auto* cluster = app.add_subcommand("cluster", "Average-linkage clustering");
  cluster->add_option("--input", c.input, "VDMAT1 matrix")->required();
  cluster->add_option("--k", c.k, "Cut into k flat clusters")->check(CLI::PositiveNumber);
  cluster->add_option("--compare", c.compare_with, "Second matrix; report adjusted Rand index at k");
  cluster->add_option("--output", c.output, "Dendrogram JSON (default: stdout)");
  cluster->add_option("--newick", c.newick, "Also write a Newick tree");

  auto* project = app.add_subcommand("project", "2-D projection (classical MDS or PCA)");
  project->add_option("--input", c.input, "VDMAT1 matrix (mds)");
  project->add_option("--reps", c.reps, "FNEREP1 representatives (pca)");
  project->add_option("--method", c.method, "mds or pca")->check(CLI::IsMember({"mds", "pca"}))->capture_default_str();
  project->add_option("--output", c.output, "CSV synset_id,x,y")->required();

  auto* stats = app.add_subcommand("stats", "Feature-type proportions and synset diagnostics");
  stats->add_option("--input", c.input, "FNETER1 ternary matrix")->required();
  stats->add_option("--layout", c.layout, "Layer layout TSV for per-layer proportions");
  stats->add_option("--manifest", c.manifest, "Sample manifest (consistency / bootstrap)");
  stats->add_option("--taxonomy", c.taxonomy, "Taxonomy TSV (consistency vs depth)");
  stats->add_option("--bootstrap", c.bootstrap, "Bootstrap rounds for representative stability");
  stats->add_option("--seed", c.seed, "Bootstrap seed");
  stats->add_option("--output", c.output, "JSON report path (default: stdout)");

  auto* synth = app.add_subcommand("synth", "Seeded synthetic fixtures");
  synth->add_option("--seed", c.seed, "RNG seed")->required();
  synth->add_option("--samples", c.samples, "Images")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--features", c.features, "Features per image")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--synsets", c.synsets, "Synsets")->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--out-raw", c.out_raw, "FNERAW1 output")->required();
  synth->add_option("--out-manifest", c.out_manifest, "Manifest TSV output")->required();
  synth->add_option("--out-taxonomy", c.out_taxonomy, "Taxonomy TSV output")->required();
  synth->add_option("--out-layout", c.out_layout, "Layer layout TSV output");
  synth->add_option("--out-ic", c.out_ic, "Information content TSV output");
  synth->add_option("--out-ids", c.out_ids, "Synset id list output");

  const std::vector<std::pair<CLI::App*, Subcommand>> table{
      {discretize, Subcommand::Discretize}, {represent, Subcommand::Represent}, {distmat, Subcommand::Distmat},
      {lexmat, Subcommand::Lexmat},         {compare, Subcommand::Compare},     {cluster, Subcommand::Cluster},
      {project, Subcommand::Project},       {stats, Subcommand::Stats},         {synth, Subcommand::Synth}};

  try {
    std::ranges::reverse(args);
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  for (const auto& [sub, kind] : table)
    if (sub->parsed()) c.subcommand = kind;

  try {
    switch (c.subcommand) {
      case Subcommand::Discretize: detail::run_discretize(c, err); break;
      case Subcommand::Represent: detail::run_represent(c, err); break;
      case Subcommand::Distmat: detail::run_distmat(c, err); break;
      case Subcommand::Lexmat: detail::run_lexmat(c, err); break;
      case Subcommand::Compare: detail::run_compare(c, out); break;
      case Subcommand::Cluster: detail::run_cluster(c, out, err); break;
      case Subcommand::Project: detail::run_project(c, err); break;
      case Subcommand::Stats: detail::run_stats(c, out); break;
      case Subcommand::Synth: detail::run_synth(c, err); break;
    }
  } catch (const CLI::ValidationError& e) {
    err << "vd: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "vd: " << e.what() << "\n";
    if (e.kind() == ErrorKind::InvalidArgument && c.subcommand == Subcommand::Discretize) return kUsage;
    return is_format_error(e.kind()) ? kInputFormat : kComputation;
  } catch (const std::exception& e) {
    err << "vd: " << e.what() << "\n";
    return kComputation;
  }
  return kOk;
}

}  // namespace vd::cli
