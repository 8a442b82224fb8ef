#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "chatud/chat.hpp"
#include "chatud/error.hpp"
#include "chatud/pipeline.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using chatud::cli::run_command;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

// Strip the elapsed_ms column, the only nondeterministic output.
std::string summary_without_times(const std::string& out) {
  std::string result;
  std::istringstream in(out);
  for (std::string line; std::getline(in, line);) {
    auto tab = line.rfind('\t');
    result += (tab == std::string::npos ? line : line.substr(0, tab)) + "\n";
  }
  return result;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("chatud_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path copy_corpus() {
    fs::path c = dir_ / "corpus";
    fs::copy(fs::path(CHATUD_FIXTURES) / "corpus", c, fs::copy_options::recursive);
    return c;
  }
  fs::path copy_fixture(const std::string& name) {
    fs::copy_file(fs::path(CHATUD_FIXTURES) / name, dir_ / name);
    return dir_ / name;
  }

  fs::path dir_;
};

const char* kClean =
    "@UTF8\n@Begin\n@Languages:\teng\n@Participants:\tCHI Target_Child\n"
    "@ID:\teng|x|CHI|||||Target_Child|||\n*CHI:\tmore ball .\n@End\n";

}  // namespace

TEST_F(CliTest, MorphotagBrownOneGolden) {
  auto cha = copy_fixture("brown_one.cha");
  auto conllu = copy_fixture("brown_one.conllu");
  auto r = run({"morphotag", "--conllu", conllu.string(), cha.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.err, "");
  auto t = chatud::parse_chat(slurp(cha));
  const auto& u = t.utterances.at(0);
  ASSERT_NE(u.tier("%mor"), nullptr);
  EXPECT_EQ(*u.tier("%mor"),
            "cconj|but pron|you-Prs-Nom-S2 aux|do-Fin-Ind-Pres-S2~part|not verb|have-Inf-S "
            "det|a-Ind-Art adj|brown-Pos-S1 noun|one .");
  EXPECT_EQ(*u.tier("%gra"),
            "1|5|CC 2|5|NSUBJ 3|5|AUX 4|5|ADVMOD 5|0|ROOT 6|8|DET 7|8|AMOD 8|5|OBJ 9|5|PUNCT");
}

TEST_F(CliTest, EnglishCompatAndOverwriteWarning) {
  auto cha = copy_fixture("brown_one.cha");
  auto conllu = copy_fixture("brown_one.conllu");
  auto first = run({"--english-compat", "morphotag", "--conllu", conllu.string(), cha.string()});
  EXPECT_EQ(first.code, 0) << first.err;
  auto text = slurp(cha);
  EXPECT_NE(text.find("%umor:\t"), std::string::npos);
  EXPECT_NE(text.find("%ugra:\t"), std::string::npos);
  EXPECT_EQ(text.find("%mor:\t"), std::string::npos);
  auto again = run({"--english-compat", "morphotag", "--conllu", conllu.string(), cha.string()});
  EXPECT_EQ(again.code, 0);
  EXPECT_NE(again.err.find("overwrite-tier"), std::string::npos);
  EXPECT_EQ(slurp(cha), text);
  auto strict = run({"--strict", "--english-compat", "morphotag", "--conllu", conllu.string(),
                     cha.string()});
  EXPECT_EQ(strict.code, 1);
}

TEST_F(CliTest, ValidateCleanIsSilent) {
  spit(dir_ / "clean.cha", kClean);
  auto r = run({"validate", (dir_ / "clean.cha").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(r.err, "");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({"frobnicate", "x.cha"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"validate"}).code, 2);
  spit(dir_ / "clean.cha", kClean);
  auto f = (dir_ / "clean.cha").string();
  EXPECT_EQ(run({"--kernel", "4", "align", f}).code, 2);
  EXPECT_EQ(run({"--pad-ms", "-1", "align", f}).code, 2);
  EXPECT_EQ(run({"--jobs", "0", "validate", f}).code, 2);
  EXPECT_EQ(run({"align", "--pass", "sideways", f}).code, 2);
  auto help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("morphotag"), std::string::npos);
}

TEST_F(CliTest, BinaryVersionAndUnknownSubcommand) {
  std::string bin = CHATUD_CLI;
  FILE* p = ::popen((bin + " --version").c_str(), "r");
  ASSERT_NE(p, nullptr);
  char buf[128] = {};
  std::string out;
  while (std::fgets(buf, sizeof buf, p)) out += buf;
  EXPECT_EQ(::pclose(p), 0);
  EXPECT_EQ(out, "chatud " + std::string(chatud::cli::version()) + "\n");
  int status = std::system((bin + " bogus >/dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(status), 2);
}

TEST_F(CliTest, BatchSummaryAndFailureIsolation) {
  fs::create_directories(dir_ / "b");
  spit(dir_ / "b" / "a.cha", kClean);
  spit(dir_ / "b" / "c.cha", kClean);
  // truncated header block
  spit(dir_ / "b" / "b.cha", "@UTF8\n@Begin\n@Participants:\tCHI Target_Child\n*XYZ");
  auto r = run({"--jobs", "3", "validate", (dir_ / "b").string()});
  EXPECT_EQ(r.code, 1);
  auto b = (dir_ / "b").string();
  EXPECT_EQ(summary_without_times(r.out),
            "file\tstatus\tdiagnostics_count\n" + b + "/a.cha\tok\t0\n" + b +
                "/b.cha\tfailed\t1\n" + b + "/c.cha\tok\t0\n");
  EXPECT_NE(r.err.find("b.cha"), std::string::npos);

  fs::create_directories(dir_ / "empty");
  auto e = run({"validate", (dir_ / "empty").string()});
  EXPECT_EQ(e.code, 0);
  EXPECT_EQ(e.out, "file\tstatus\tdiagnostics_count\telapsed_ms\n");
}

TEST_F(CliTest, StrictTurnsDiagnosticsIntoFailure) {
  spit(dir_ / "w.cha",
       "@UTF8\n@Begin\n@Participants:\tCHI Target_Child\n*CHI:\tno [x 2] .\n@End\n");
  auto f = (dir_ / "w.cha").string();
  auto lax = run({"validate", f});
  EXPECT_EQ(lax.code, 0);
  EXPECT_NE(lax.err, "");
  EXPECT_EQ(run({"--strict", "validate", f}).code, 1);
}

TEST_F(CliTest, JobsDoNotChangeOutput) {
  auto one = copy_corpus();
  fs::copy(one, dir_ / "many", fs::copy_options::recursive);
  auto many = dir_ / "many";
  for (const char* stage : {"normalize", "align", "morphotag"}) {
    auto a = run({"-j", "1", stage, one.string()});
    auto b = run({"-j", "4", stage, many.string()});
    EXPECT_EQ(a.code, 0) << stage << a.err;
    EXPECT_EQ(b.code, a.code) << stage;
  }
  for (const char* f : {"eng_sample.cha", "fra_sample.cha"}) {
    EXPECT_EQ(slurp(one / f), slurp(many / f)) << f;
  }
}

TEST_F(CliTest, StagesAreIdempotent) {
  auto c = copy_corpus();
  for (const char* stage : {"normalize", "align", "morphotag"}) {
    ASSERT_EQ(run({stage, c.string()}).code, 0) << stage;
    auto before = slurp(c / "eng_sample.cha") + slurp(c / "fra_sample.cha");
    ASSERT_EQ(run({stage, c.string()}).code, 0) << stage;
    EXPECT_EQ(slurp(c / "eng_sample.cha") + slurp(c / "fra_sample.cha"), before) << stage;
  }
}

TEST_F(CliTest, OutputDirectoryLeavesInputsAlone) {
  auto c = copy_corpus();
  auto original = slurp(c / "eng_sample.cha");
  auto r = run({"-o", (dir_ / "out").string(), "normalize", c.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(c / "eng_sample.cha"), original);
  auto out = slurp(dir_ / "out" / "eng_sample.cha");
  EXPECT_NE(out.find("more ball ball ."), std::string::npos);
  EXPECT_NE(out.find("I singin(g) now ."), std::string::npos);
  for (const auto& e : fs::directory_iterator(dir_ / "out")) {
    EXPECT_EQ(e.path().filename().string().find(".tmp-"), std::string::npos);
  }
}

TEST_F(CliTest, ConfigFileAndFlagsWin) {
  auto c = copy_corpus();
  ASSERT_EQ(run({"normalize", c.string()}).code, 0);
  spit(dir_ / "run.ini", "pad-ms=0\nno-tighten=true\n");
  auto f = (c / "eng_sample.cha").string();
  ASSERT_EQ(run({"--config", (dir_ / "run.ini").string(), "align", "--pass", "utterance", f}).code, 0);
  auto t = chatud::parse_chat(slurp(f));
  ASSERT_TRUE(t.utterances[0].time.has_value());
  EXPECT_EQ(t.utterances[0].time->start_ms, 500);
  ASSERT_EQ(run({"--config", (dir_ / "run.ini").string(), "--pad-ms", "100", "align", "--pass",
                 "utterance", f})
                .code,
            0);
  t = chatud::parse_chat(slurp(f));
  EXPECT_EQ(t.utterances[0].time->start_ms, 400);
  spit(dir_ / "bad.ini", "kernel=banana\n");
  EXPECT_EQ(run({"--config", (dir_ / "bad.ini").string(), "validate", f}).code, 2);
}

TEST_F(CliTest, AlignWritesBulletsAndWor) {
  auto c = copy_corpus();
  ASSERT_EQ(run({"normalize", c.string()}).code, 0);
  auto r = run({"--strict", "align", (c / "eng_sample.cha").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  auto t = chatud::parse_chat(slurp(c / "eng_sample.cha"));
  // the dropped filled pause in utterance 1 does not move its interval off "you"
  EXPECT_EQ(t.utterances[1].time->start_ms, 2200);
  EXPECT_EQ(*t.utterances[3].tier("%wor"),
            "I'm \x15" "6200_6600\x15 gonna \x15" "6600_7000\x15 throw \x15" "7000_7400\x15 "
            "it \x15" "7400_7800\x15 .");
  fs::remove_all(c / "fra_sample.attn");
  auto missing = run({"align", (c / "fra_sample.cha").string()});
  EXPECT_EQ(missing.code, 1);
}

TEST_F(CliTest, MissingAttentionForOneUtterance) {
  auto c = copy_corpus();
  ASSERT_EQ(run({"normalize", c.string()}).code, 0);
  fs::remove(c / "fra_sample.attn" / "u1.attn");
  auto f = (c / "fra_sample.cha").string();
  auto r = run({"align", f});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("missing-attention"), std::string::npos);
  auto t = chatud::parse_chat(slurp(f));
  EXPECT_EQ(t.utterances[1].tier("%wor"), nullptr);
  EXPECT_NE(t.utterances[2].tier("%wor"), nullptr);
}

TEST_F(CliTest, AnalyzeReportsAndJson) {
  auto c = copy_corpus();
  for (const char* stage : {"normalize", "align", "morphotag"}) {
    ASSERT_EQ(run({stage, c.string()}).code, 0) << stage;
  }
  auto f = (c / "eng_sample.cha").string();
  auto json = (dir_ / "report.json").string();
  auto r = run({"analyze", "--measures", "--speaker", "CHI", "--freq", "gra:relation:*COMP",
                "--mattr-window", "3", "--json", json, f});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(f + "\tCHI\t2\t6\t"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find("XCOMP"), std::string::npos) << r.out;
  auto mot = run({"analyze", "--speaker", "MOT", "--freq", "gra:relation:*COMP", f});
  EXPECT_EQ(mot.out, f + "\tgra:relation:*COMP\tXCOMP\t2\n");
  auto doc = nlohmann::json::parse(slurp(json));
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_EQ(doc[0]["measures"][0]["speaker"], "CHI");
  EXPECT_TRUE(doc[0]["measures"][0]["lemma_based"].get<bool>());
  EXPECT_EQ(run({"analyze", "--measures", "--speaker", "NOBODY", f}).code, 1);
}

TEST_F(CliTest, DotExportFromTiers) {
  auto cha = copy_fixture("brown_one.cha");
  auto conllu = copy_fixture("brown_one.conllu");
  ASSERT_EQ(run({"morphotag", "--conllu", conllu.string(), cha.string()}).code, 0);
  fs::remove(conllu);
  auto r = run({"--dot-dir", (dir_ / "dot").string(), "dot", cha.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  auto g = oracle::parse_dot(slurp(dir_ / "dot" / "brown_one.u0.dot"));
  ASSERT_TRUE(g.ok) << g.error;
  EXPECT_EQ(g.node_labels.size(), 9u);
  EXPECT_EQ(g.edges.size(), 8u);
}

TEST_F(CliTest, SegmentBuildsTranscript) {
  spit(dir_ / "t.txt", "well you know stop\n");
  spit(dir_ / "t.labels", "1\n5\n0\n4\n");
  auto out = (dir_ / "seg.cha").string();
  auto r = run({"-o", out, "segment", (dir_ / "t.txt").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  auto t = chatud::parse_chat(slurp(out));
  ASSERT_EQ(t.utterances.size(), 1u);
  EXPECT_EQ(chatud::serialize_main_line(t.utterances[0]), "well you , know stop !");
  EXPECT_EQ(run({"validate", out}).code, 0);
}

TEST_F(CliTest, RetokenizeJapanese) {
  spit(dir_ / "ja.cha",
       "@UTF8\n@Begin\n@Languages:\tjpn\n@Participants:\tCHI Target_Child\n"
       "@ID:\tjpn|x|CHI|||||Target_Child|||\n*CHI:\tカルト団体 .\n@End\n");
  spit(dir_ / "ja.labels", "B I I B I\n");
  spit(dir_ / "ja.conllu",
       "1\tカルト\tカルト\tNOUN\t_\t_\t2\tcompound\t_\t_\n"
       "2\t団体\t団体\tNOUN\t_\t_\t0\troot\t_\t_\n"
       "3\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_\n\n");
  auto f = (dir_ / "ja.cha").string();
  auto r = run({"morphotag", "--retokenize", (dir_ / "ja.labels").string(), f});
  EXPECT_EQ(r.code, 0) << r.err;
  auto t = chatud::parse_chat(slurp(f));
  EXPECT_EQ(chatud::serialize_main_line(t.utterances[0]), "カルト 団体 .");
  EXPECT_EQ(*t.utterances[0].tier("%mor"), "noun|カルト noun|団体 .");
}
