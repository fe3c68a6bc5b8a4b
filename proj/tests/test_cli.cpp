#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vd/cli.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path kToy = VD_TOY_DIR;

struct Result {
  int code;
  std::string out, err;
};

Result vd_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = vd::cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("vd_cli_") + info->name() + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, HelpExitsZero) {
  auto r = vd_run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("distmat"), std::string::npos);
  EXPECT_EQ(vd_run({"distmat", "--help"}).code, 0);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(vd_run({}).code, 1);
  EXPECT_EQ(vd_run({"frobnicate"}).code, 1);
  EXPECT_EQ(vd_run({"distmat", "--reps", "x"}).code, 1);  // missing --output
  EXPECT_EQ(vd_run({"distmat", "--reps", "x", "--output", "y", "--bogus"}).code, 1);
  EXPECT_EQ(vd_run({"lexmat", "--taxonomy", "t", "--ids", "i", "--measure", "jcn", "--output", "o"}).code, 1);
  EXPECT_EQ(vd_run({"discretize", "--input", (kToy / "raw.fne").string(), "--output", path("t.fnt"), "--ft-minus",
                    "0.5"})
                .code,
            1);
  EXPECT_FALSE(fs::exists(path("t.fnt")));
}

TEST_F(CliTest, FormatErrorsExitTwoAndLeaveNoOutput) {
  std::ofstream(path("bad.fne"), std::ios::binary) << "NOTRAW1xxxxxxxxxxxx";
  auto r = vd_run({"discretize", "--input", path("bad.fne"), "--output", path("out.fnt")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("vd:"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("out.fnt")));
  EXPECT_FALSE(fs::exists(path("out.fnt.tmp")));

  auto raw = slurp(kToy / "raw.fne");
  std::ofstream(path("short.fne"), std::ios::binary) << raw.substr(0, raw.size() - 3);
  EXPECT_EQ(vd_run({"discretize", "--input", path("short.fne"), "--output", path("out.fnt")}).code, 2);
  EXPECT_EQ(vd_run({"discretize", "--input", path("missing.fne"), "--output", path("out.fnt")}).code, 2);
  EXPECT_FALSE(fs::exists(path("out.fnt")));
}

TEST_F(CliTest, TaxonomyErrorsExitCodes) {
  std::ofstream(path("tax.tsv")) << "a\tb\nb\ta\n";
  std::ofstream(path("ids.txt")) << "a\nb\n";
  auto r = vd_run({"lexmat", "--taxonomy", path("tax.tsv"), "--ids", path("ids.txt"), "--output", path("o.vdm")});
  EXPECT_EQ(r.code, 2);  // a cyclic taxonomy is malformed input
  EXPECT_NE(r.err.find("CycleDetected: "), std::string::npos);
  EXPECT_FALSE(fs::exists(path("o.vdm")));

  std::ofstream(path("tax2.tsv")) << "a\tr\nb\tr\n";
  std::ofstream(path("ids2.txt")) << "a\nzzz\n";
  EXPECT_EQ(vd_run({"lexmat", "--taxonomy", path("tax2.tsv"), "--ids", path("ids2.txt"), "--output", path("o.vdm")})
                .code,
            3);
  std::ofstream(path("ids3.txt")) << "a\nb\n";
  EXPECT_EQ(vd_run({"lexmat", "--taxonomy", path("tax2.tsv"), "--ids", path("ids3.txt"), "--measure", "lin",
                    "--output", path("o.vdm")})
                .code,
            3);
}

std::vector<std::string> synth_args(const std::string& prefix) {
  return {"synth",        "--seed",         "7",          "--out-raw",   prefix + "raw.fne", "--out-manifest",
          prefix + "m.tsv", "--out-taxonomy", prefix + "t.tsv", "--out-layout", prefix + "l.tsv",  "--out-ic",
          prefix + "ic.tsv", "--out-ids",     prefix + "ids.txt"};
}

TEST_F(CliTest, SynthIsDeterministic) {
  ASSERT_EQ(vd_run(synth_args(path("a_"))).code, 0);
  ASSERT_EQ(vd_run(synth_args(path("b_"))).code, 0);
  for (const char* f : {"raw.fne", "m.tsv", "t.tsv", "l.tsv", "ic.tsv", "ids.txt"})
    EXPECT_EQ(slurp(path(std::string("a_") + f)), slurp(path(std::string("b_") + f))) << f;

  auto raw = vd::read_raw_matrix(path("a_raw.fne"));
  EXPECT_EQ(raw.n_samples(), 100u);
  EXPECT_EQ(raw.n_features(), 512u);
  auto tax = vd::parse_taxonomy(vd::binio::read_text_file(path("a_t.tsv")));
  for (const auto& id : vd::read_id_list(vd::binio::read_text_file(path("a_ids.txt")))) EXPECT_GE(vd::depth(tax, id), 2u);
}

TEST_F(CliTest, SynthPipelineRunsEveryStage) {
  ASSERT_EQ(vd_run(synth_args(path(""))).code, 0);
  ASSERT_EQ(vd_run({"discretize", "--input", path("raw.fne"), "--output", path("t.fnt"), "--stats-out",
                    path("stats.tsv")})
                .code,
            0);
  ASSERT_EQ(vd_run({"discretize", "--input", path("raw.fne"), "--output", path("t2.fnt"), "--stats-in",
                    path("stats.tsv")})
                .code,
            0);
  EXPECT_EQ(slurp(path("t.fnt")), slurp(path("t2.fnt")));
  ASSERT_EQ(vd_run({"represent", "--input", path("t.fnt"), "--manifest", path("m.tsv"), "--output", path("r.fnr")})
                .code,
            0);
  ASSERT_EQ(vd_run({"distmat", "--reps", path("r.fnr"), "--output", path("vd1.vdm"), "--threads", "1"}).code, 0);
  ASSERT_EQ(vd_run({"distmat", "--reps", path("r.fnr"), "--output", path("vd4.vdm"), "--threads", "4"}).code, 0);
  EXPECT_EQ(slurp(path("vd1.vdm")), slurp(path("vd4.vdm")));

  for (const char* measure : {"path", "wup", "lin"}) {
    auto r = vd_run({"lexmat", "--taxonomy", path("t.tsv"), "--ids", path("ids.txt"), "--measure", measure, "--ic",
                     path("ic.tsv"), "--output", path(std::string(measure) + ".vdm")});
    ASSERT_EQ(r.code, 0) << measure << ": " << r.err;
  }
  auto cmp = vd_run({"compare", "--a", path("vd1.vdm"), "--b", path("wup.vdm")});
  ASSERT_EQ(cmp.code, 0) << cmp.err;
  auto report = nlohmann::json::parse(cmp.out);
  EXPECT_EQ(report["n_pairs"], 45);
  EXPECT_LE(std::abs(report["pearson"].get<double>()), 1.0);

  auto cl = vd_run({"cluster", "--input", path("vd1.vdm"), "--k", "3", "--compare", path("wup.vdm"), "--newick",
                    path("tree.nwk")});
  ASSERT_EQ(cl.code, 0) << cl.err;
  auto tree = nlohmann::json::parse(cl.out);
  EXPECT_EQ(tree["merges"].size(), 9u);
  EXPECT_EQ(tree["labels"].size(), 10u);
  EXPECT_TRUE(tree["compare"].contains("adjusted_rand_index"));
  EXPECT_EQ(slurp(path("tree.nwk")).back(), '\n');

  ASSERT_EQ(vd_run({"project", "--input", path("vd1.vdm"), "--output", path("mds.csv")}).code, 0);
  ASSERT_EQ(vd_run({"project", "--method", "pca", "--reps", path("r.fnr"), "--output", path("pca.csv")}).code, 0);
  EXPECT_EQ(vd_run({"project", "--method", "pca", "--output", path("pca.csv")}).code, 1);

  auto st = vd_run({"stats", "--input", path("t.fnt"), "--layout", path("l.tsv"), "--manifest", path("m.tsv"),
                    "--taxonomy", path("t.tsv"), "--bootstrap", "5", "--seed", "3"});
  ASSERT_EQ(st.code, 0) << st.err;
  auto stats = nlohmann::json::parse(st.out);
  EXPECT_NEAR(stats["proportions"]["minus"].get<double>() + stats["proportions"]["zero"].get<double>() +
                  stats["proportions"]["plus"].get<double>(),
              1.0, 1e-12);
}

TEST_F(CliTest, ManifestMismatchIsReported) {
  ASSERT_EQ(vd_run({"discretize", "--input", (kToy / "raw.fne").string(), "--output", path("t.fnt")}).code, 0);
  std::ofstream(path("m.tsv")) << "0\ta\tn1\n1\tb\tn1\n";
  auto r = vd_run({"represent", "--input", path("t.fnt"), "--manifest", path("m.tsv"), "--output", path("r.fnr")});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(fs::exists(path("r.fnr")));
}

TEST_F(CliTest, GoldenToyPipeline) {
  const auto golden = kToy / "golden";
  ASSERT_EQ(vd_run({"discretize", "--input", (kToy / "raw.fne").string(), "--output", path("tern.fnt")}).code, 0);
  EXPECT_EQ(slurp(path("tern.fnt")), slurp(golden / "tern.fnt"));
  ASSERT_EQ(vd_run({"represent", "--input", path("tern.fnt"), "--manifest", (kToy / "manifest.tsv").string(),
                    "--output", path("reps.fnr")})
                .code,
            0);
  EXPECT_EQ(slurp(path("reps.fnr")), slurp(golden / "reps.fnr"));
  ASSERT_EQ(vd_run({"distmat", "--reps", path("reps.fnr"), "--output", path("vd.vdm")}).code, 0);
  EXPECT_EQ(slurp(path("vd.vdm")), slurp(golden / "vd.vdm"));
  ASSERT_EQ(vd_run({"lexmat", "--taxonomy", (kToy / "taxonomy.tsv").string(), "--ids", (kToy / "ids.txt").string(),
                    "--measure", "wup", "--output", path("wup.vdm")})
                .code,
            0);
  EXPECT_EQ(slurp(path("wup.vdm")), slurp(golden / "wup.vdm"));
  ASSERT_EQ(vd_run({"compare", "--a", path("vd.vdm"), "--b", (golden / "wup.vdm").string(), "--output",
                    path("compare.json")})
                .code,
            0);
  EXPECT_EQ(slurp(path("compare.json")), slurp(golden / "compare.json"));
  ASSERT_EQ(vd_run({"cluster", "--input", path("vd.vdm"), "--k", "2", "--output", path("cluster.json")}).code, 0);
  EXPECT_EQ(slurp(path("cluster.json")), slurp(golden / "cluster.json"));
}

TEST_F(CliTest, GoldenFilesMatchGenerator) {
  std::string cmd = std::string("\"") + VD_MAKE_GOLDEN + "\" \"" + dir_.string() + "\" 2>/dev/null";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  for (const char* f : {"raw.fne", "manifest.tsv", "taxonomy.tsv", "ids.txt", "golden/tern.fnt", "golden/reps.fnr",
                        "golden/vd.vdm", "golden/wup.vdm", "golden/compare.json", "golden/cluster.json"})
    EXPECT_EQ(slurp(dir_ / f), slurp(kToy / f)) << f;
}

}  // namespace
