#include "chatud/pipeline.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chatud/aligner.hpp"
#include "chatud/analysis.hpp"
#include "chatud/chat.hpp"
#include "chatud/conllu.hpp"
#include "chatud/error.hpp"
#include "chatud/morphosyntax.hpp"
#include "chatud/normalize.hpp"
#include "chatud/segmenter.hpp"
#include "chatud/text.hpp"

#ifndef CHATUD_DEFAULT_DATA_DIR
#define CHATUD_DEFAULT_DATA_DIR "data"
#endif
#ifndef CHATUD_VERSION
#define CHATUD_VERSION "0.0.0"
#endif

namespace chatud::cli {

namespace fs = std::filesystem;

namespace {

enum class Cmd { kValidate, kNormalize, kSegment, kAlign, kMorphotag, kAnalyze, kDot };

struct Request {
  Cmd cmd = Cmd::kValidate;
  PipelineConfig cfg;
  std::vector<std::string> inputs;
  std::string output;
  // align
  std::string pass = "both";
  // morphotag / dot
  std::string conllu;
  std::string retokenize;
  // analyze
  std::vector<std::string> speakers;
  bool measures = false;
  std::vector<std::string> freq_specs;
  std::size_t mattr_window = analysis::kDefaultMattrWindow;
  std::string json_path;
  // segment
  std::string labels;
  std::string seg_speaker = "CHI";
  std::string seg_role = "Target_Child";
};

struct FileResult {
  std::string file;
  bool ok = true;
  Diagnostics diags;
  std::string report;
  nlohmann::ordered_json json;
  double elapsed_ms = 0.0;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write(const fs::path& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::kIo, "cannot replace " + path.string() + ": " + ec.message());
  }
}

fs::path sidecar(const fs::path& cha, std::string_view suffix) {
  fs::path p = cha.parent_path() / cha.stem();
  p += std::string(suffix);
  return p;
}

// Raw language code ("eng") used for lexicon file names.
std::string raw_language(const Transcript& t, const PipelineConfig& cfg) {
  if (!cfg.language.empty()) return cfg.language;
  const Header* h = t.header("Languages");
  if (h == nullptr || !h->value) return "";
  auto first = text::split(text::collapse_ws(*h->value), ',').front();
  return std::string(text::trim(first));
}

std::optional<fs::path> default_lexicon(std::string_view kind, const std::string& lang) {
  static const std::map<std::string, std::string> kThree = {
      {"en", "eng"}, {"fr", "fra"}, {"de", "deu"}, {"es", "spa"},
      {"it", "ita"}, {"pt", "por"}, {"nl", "nld"}, {"ja", "jpn"}};
  if (lang.empty()) return std::nullopt;
  std::vector<std::string> names = {text::to_lower_ascii(lang)};
  auto canon = text::canonical_language(lang);
  auto it = kThree.find(canon);
  if (it != kThree.end()) names.push_back(it->second);
  names.push_back(canon);
  for (const auto& n : names) {
    fs::path p = data_dir() / "lexicons" / std::string(kind) / (n + ".tsv");
    if (fs::exists(p)) return p;
  }
  return std::nullopt;
}

normalize::RepairLexicon repair_lexicon_for(const Transcript& t, const PipelineConfig& cfg) {
  auto lang = raw_language(t, cfg);
  if (!cfg.repair_lexicon.empty()) {
    return normalize::load_repair_lexicon(cfg.repair_lexicon, lang);
  }
  if (auto p = default_lexicon("repair", lang)) return normalize::load_repair_lexicon(*p, lang);
  return normalize::RepairLexicon{lang, {}};
}

morph::MwtLexicon mwt_lexicon_for(const Transcript& t, const PipelineConfig& cfg) {
  auto lang = raw_language(t, cfg);
  if (!cfg.mwt_lexicon.empty()) return morph::load_mwt_lexicon(cfg.mwt_lexicon, lang);
  if (auto p = default_lexicon("mwt", lang)) return morph::load_mwt_lexicon(*p, lang);
  morph::MwtLexicon lex;
  lex.language = text::canonical_language(lang);
  return lex;
}

fs::path output_for(const Request& req, const fs::path& in, bool batch) {
  if (req.output.empty()) return in;
  if (batch) return fs::path(req.output) / in.filename();
  return req.output;
}

std::vector<ud::ConlluSentence> load_sentences(const Request& req, const fs::path& in,
                                               bool batch) {
  fs::path p = (!req.conllu.empty() && !batch) ? fs::path(req.conllu)
                                                : sidecar(in, ".conllu");
  return ud::parse_conllu(read_file(p));
}

void write_dot_files(const fs::path& dir, const fs::path& in,
                     const std::vector<std::string>& graphs) {
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (graphs[i].empty()) continue;
    atomic_write(dir / (in.stem().string() + ".u" + std::to_string(i) + ".dot"),
                 graphs[i]);
  }
}

// --- per-command file processing -------------------------------------------

void do_validate(const Request&, const fs::path& in, FileResult& r) {
  auto t = parse_chat(read_file(in));
  for (auto& d : validate(t)) r.diags.push_back(std::move(d));
}

void do_normalize(const Request& req, const fs::path& in, bool batch, FileResult& r) {
  auto t = parse_chat(read_file(in));
  auto lex = repair_lexicon_for(t, req.cfg);
  auto out = normalize::normalize_transcript(t, lex, &r.diags);
  atomic_write(output_for(req, in, batch), serialize_chat(out));
}

void do_align(const Request& req, const fs::path& in, bool batch, FileResult& r) {
  auto t = parse_chat(read_file(in));
  bool utt_pass = req.pass == "utterance" || req.pass == "both";
  bool word_pass = req.pass == "word" || req.pass == "both";
  if (utt_pass) {
    auto b = align::load_backplate(sidecar(in, ".backplate.json"));
    t = align::recover_utterance_times(t, b, req.cfg.pad_ms);
  }
  if (word_pass) {
    fs::path dir = sidecar(in, ".attn");
    if (!fs::is_directory(dir)) {
      throw Error(ErrorCode::kIo, "attention directory " + dir.string() + " not found");
    }
    std::vector<std::optional<align::UtteranceAttention>> att(t.utterances.size());
    for (std::size_t i = 0; i < t.utterances.size(); ++i) {
      const auto& u = t.utterances[i];
      if (std::none_of(u.tokens.begin(), u.tokens.end(), is_alignable)) continue;
      fs::path m = dir / ("u" + std::to_string(i) + ".attn");
      fs::path g = dir / ("u" + std::to_string(i) + ".groups.json");
      if (!fs::exists(m) || !fs::exists(g)) {
        report(&r.diags, "missing-attention",
               "no attention files for utterance " + std::to_string(i), u.line);
        continue;
      }
      att[i] = align::UtteranceAttention{align::load_attention(m),
                                         align::load_token_groups(g)};
    }
    align::WordPassOptions opts;
    opts.kernel = req.cfg.kernel;
    opts.frame_ms = req.cfg.frame_ms;
    // Tightening only when the utterance pass ran too, so that re-running a
    // word-only pass reproduces its own output.
    opts.tighten = req.cfg.tighten && utt_pass;
    t = align::recover_word_times(t, att, opts, &r.diags);
  }
  atomic_write(output_for(req, in, batch), serialize_chat(t));
}

void retokenize_from_file(Transcript& t, const fs::path& labels_path) {
  auto lines = text::split(read_file(labels_path), '\n');
  if (!lines.empty() && text::trim(lines.back()).empty()) lines.pop_back();
  if (lines.size() != t.utterances.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(lines.size()) + " label lines for " +
                    std::to_string(t.utterances.size()) + " utterances");
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto& u = t.utterances[i];
    std::string joined;
    for (const auto& tok : u.tokens) joined += tok.surface;
    auto tokens = morph::decode_word_boundaries(text::utf8_chars(joined),
                                                morph::parse_boundary_labels(lines[i]));
    u = morph::retokenize_utterance(u, tokens);
  }
}

void do_morphotag(const Request& req, const fs::path& in, bool batch, FileResult& r) {
  auto t = parse_chat(read_file(in));
  if (!req.retokenize.empty()) retokenize_from_file(t, req.retokenize);
  auto sentences = load_sentences(req, in, batch);
  if (sentences.size() != t.utterances.size()) {
    throw Error(ErrorCode::kAlignmentMismatch,
                std::to_string(sentences.size()) + " CONLL-U sentences for " +
                    std::to_string(t.utterances.size()) + " utterances");
  }
  auto lex = mwt_lexicon_for(t, req.cfg);
  morph::FeatureOptions fo;
  fo.suppress_singular = req.cfg.suppress_singular;
  const std::string mor_name = req.cfg.english_compat ? "%umor" : "%mor";
  const std::string gra_name = req.cfg.english_compat ? "%ugra" : "%gra";
  std::vector<std::string> graphs(t.utterances.size());
  for (std::size_t i = 0; i < t.utterances.size(); ++i) {
    auto& u = t.utterances[i];
    if (std::none_of(u.tokens.begin(), u.tokens.end(), is_mor_eligible)) continue;
    auto s = morph::apply_mwt_correction(sentences[i], lex);
    auto mor = morph::emit_mor(s, u, fo, &r.diags);
    auto gra = morph::emit_gra(s);
    if (u.tier(mor_name) != nullptr) {
      report(&r.diags, "overwrite-tier", "replacing existing " + mor_name, u.line);
    }
    u.set_tier(mor_name, std::move(mor));
    u.set_tier(gra_name, std::move(gra));
    if (!req.cfg.dot_dir.empty()) graphs[i] = morph::export_dot(s, u.terminator);
  }
  atomic_write(output_for(req, in, batch), serialize_chat(t));
  if (!req.cfg.dot_dir.empty()) write_dot_files(req.cfg.dot_dir, in, graphs);
}

void do_dot(const Request& req, const fs::path& in, bool batch, FileResult& r) {
  auto t = parse_chat(read_file(in));
  fs::path conllu = (!req.conllu.empty() && !batch) ? fs::path(req.conllu)
                                                     : sidecar(in, ".conllu");
  std::vector<std::string> graphs(t.utterances.size());
  if (fs::exists(conllu)) {
    auto sentences = ud::parse_conllu(read_file(conllu));
    if (sentences.size() != t.utterances.size()) {
      throw Error(ErrorCode::kAlignmentMismatch,
                  std::to_string(sentences.size()) + " CONLL-U sentences for " +
                      std::to_string(t.utterances.size()) + " utterances");
    }
    auto lex = mwt_lexicon_for(t, req.cfg);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      graphs[i] = morph::export_dot(morph::apply_mwt_correction(sentences[i], lex),
                                    t.utterances[i].terminator);
    }
  } else {
    for (std::size_t i = 0; i < t.utterances.size(); ++i) {
      const auto& u = t.utterances[i];
      const std::string* mor = u.tier("%mor");
      const std::string* gra = u.tier("%gra");
      if (mor == nullptr) mor = u.tier("%umor");
      if (gra == nullptr) gra = u.tier("%ugra");
      if (mor == nullptr || gra == nullptr) continue;
      try {
        graphs[i] = morph::export_dot(morph::sentence_from_tiers(*mor, *gra), u.terminator);
      } catch (const Error& e) {
        report(&r.diags, std::string(error_code_name(e.code())), e.what(), u.line);
      }
    }
  }
  fs::path dir = !req.cfg.dot_dir.empty() ? req.cfg.dot_dir
                 : !req.output.empty()    ? fs::path(req.output)
                                          : in.parent_path();
  write_dot_files(dir, in, graphs);
}

void do_analyze(const Request& req, const fs::path& in, FileResult& r) {
  auto t = parse_chat(read_file(in));
  std::vector<std::string> speakers = req.speakers;
  if (speakers.empty()) {
    for (const auto& p : t.participants()) {
      bool has = std::any_of(t.utterances.begin(), t.utterances.end(),
                             [&](const Utterance& u) { return u.speaker_code == p.code; });
      if (has) speakers.push_back(p.code);
    }
  }
  bool want_measures = req.measures || req.freq_specs.empty();
  std::string file = in.string();
  r.json["file"] = file;
  if (want_measures) {
    std::vector<analysis::MeasureReport> reports;
    for (const auto& s : speakers) {
      try {
        reports.push_back(analysis::measures(t, s, req.mattr_window));
      } catch (const Error& e) {
        // only reachable for speakers named on the command line
        r.diags.push_back({"", 0, std::string(error_code_name(e.code())), e.what(),
                           Severity::kError});
        r.ok = false;
      }
    }
    auto tsv = text::split(analysis::format_measures_tsv(reports), '\n');
    for (std::size_t i = 1; i < tsv.size(); ++i) {
      if (!tsv[i].empty()) r.report += file + "\t" + tsv[i] + "\n";
    }
    r.json["measures"] = nlohmann::ordered_json::parse(analysis::format_measures_json(reports));
  }
  for (const auto& spec : req.freq_specs) {
    auto q = analysis::parse_freq_spec(spec);
    q.speakers.insert(req.speakers.begin(), req.speakers.end());
    analysis::FreqTable table;
    try {
      table = analysis::freq(t, q);
    } catch (const Error& e) {
      report(&r.diags, std::string(error_code_name(e.code())), e.what());
      continue;
    }
    nlohmann::ordered_json counts = nlohmann::ordered_json::array();
    for (const auto& [term, n] : table) {
      r.report += file + "\t" + spec + "\t" + term + "\t" + std::to_string(n) + "\n";
      counts.push_back({term, n});
    }
    r.json["freq"][spec] = counts;
  }
}

void do_segment(const Request& req, const fs::path& in, FileResult& r) {
  (void)r;
  auto tokens = text::split_ws(read_file(in));
  fs::path labels = req.labels.empty() ? fs::path(in).replace_extension(".labels")
                                      : fs::path(req.labels);
  seg::FileLabelProvider provider(labels);
  Transcript t;
  std::string lang = req.cfg.language.empty() ? "eng" : req.cfg.language;
  t.headers = {{"UTF8", std::nullopt},
               {"Begin", std::nullopt},
               {"Languages", lang},
               {"Participants", req.seg_speaker + " " + req.seg_role},
               {"ID", lang + "|segment|" + req.seg_speaker + "|||||" + req.seg_role + "|||"}};
  t.utterances = seg::segment_with_provider(tokens, provider, req.seg_speaker);
  t.trailing_headers = {{"End", std::nullopt}};
  fs::path out = req.output.empty() ? fs::path(in).replace_extension(".cha")
                                    : fs::path(req.output);
  atomic_write(out, serialize_chat(t));
}

FileResult process(const Request& req, const fs::path& in, bool batch) {
  FileResult r;
  r.file = in.string();
  auto t0 = std::chrono::steady_clock::now();
  try {
    switch (req.cmd) {
      case Cmd::kValidate: do_validate(req, in, r); break;
      case Cmd::kNormalize: do_normalize(req, in, batch, r); break;
      case Cmd::kAlign: do_align(req, in, batch, r); break;
      case Cmd::kMorphotag: do_morphotag(req, in, batch, r); break;
      case Cmd::kAnalyze: do_analyze(req, in, r); break;
      case Cmd::kDot: do_dot(req, in, batch, r); break;
      case Cmd::kSegment: do_segment(req, in, r); break;
    }
  } catch (const Error& e) {
    r.ok = false;
    r.diags.push_back({"", e.line(), std::string(error_code_name(e.code())), e.what(),
                       Severity::kError});
  } catch (const std::exception& e) {
    r.ok = false;
    r.diags.push_back({"", 0, "internal", e.what(), Severity::kError});
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  for (auto& d : r.diags) d.file = r.file;
  return r;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs, bool* batch) {
  std::vector<fs::path> files;
  *batch = inputs.size() > 1;
  for (const auto& in : inputs) {
    fs::path p(in);
    if (!fs::is_directory(p)) {
      files.push_back(p);
      continue;
    }
    *batch = true;
    std::vector<fs::path> found;
    for (const auto& e : fs::directory_iterator(p)) {
      if (e.is_regular_file() && e.path().extension() == ".cha") found.push_back(e.path());
    }
    std::sort(found.begin(), found.end());
    files.insert(files.end(), found.begin(), found.end());
  }
  return files;
}

void add_pipeline_options(CLI::App& app, PipelineConfig& cfg, bool& no_tighten,
                          std::string& output) {
  app.add_option("--language", cfg.language, "Language code overriding @Languages");
  app.add_option("--repair-lexicon", cfg.repair_lexicon, "Repair lexicon file");
  app.add_option("--mwt-lexicon", cfg.mwt_lexicon, "Multiword-token lexicon file");
  app.add_option("--pad-ms", cfg.pad_ms, "Utterance padding in ms");
  app.add_option("--kernel", cfg.kernel, "Median filter width (odd)");
  app.add_option("--frame-ms", cfg.frame_ms, "Encoder frame length in ms");
  app.add_flag("--no-tighten", no_tighten, "Keep padded utterance bullets after the word pass");
  app.add_flag("--english-compat", cfg.english_compat, "Write %umor/%ugra");
  app.add_flag("--suppress-singular", cfg.suppress_singular, "Omit bare singular tags");
  app.add_option("--dot-dir", cfg.dot_dir, "Directory for .dot exports");
  app.add_flag("--strict", cfg.strict, "Treat diagnostics as failures");
  app.add_option("-j,--jobs", cfg.jobs, "Files processed in parallel");
  app.add_option("-o,--output", output, "Output file, or directory in batch mode");
}

}  // namespace

void check_config(const PipelineConfig& cfg) {
  if (cfg.kernel < 1 || cfg.kernel % 2 == 0) {
    throw Error(ErrorCode::kUsage, "--kernel must be odd and >= 1");
  }
  if (cfg.pad_ms < 0) throw Error(ErrorCode::kUsage, "--pad-ms must be >= 0");
  if (cfg.frame_ms <= 0) throw Error(ErrorCode::kUsage, "--frame-ms must be > 0");
  if (cfg.jobs < 1) throw Error(ErrorCode::kUsage, "--jobs must be >= 1");
}

fs::path data_dir() {
  if (const char* env = std::getenv("CHATUD_DATA_DIR"); env != nullptr && *env) {
    return env;
  }
  return CHATUD_DEFAULT_DATA_DIR;
}

std::string_view version() { return CHATUD_VERSION; }

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  Request req;
  bool no_tighten = false;
  CLI::App app{"CHAT transcript toolkit: normalization, segmentation, alignment, "
               "UD morphosyntax and sample measures",
               "chatud"};
  app.set_version_flag("--version", "chatud " + std::string(version()));
  app.set_config("--config", "", "Flat key=value configuration file (flags win)");
  add_pipeline_options(app, req.cfg, no_tighten, req.output);
  app.require_subcommand(1);

  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("inputs", req.inputs, ".cha files or directories")->required();
    return sub;
  };
  auto* validate_cmd = add("validate", "Check transcripts");
  auto* normalize_cmd = add("normalize", "Apply repair lexicons and expand repetitions");
  auto* align_cmd = add("align", "Recover utterance and word timings");
  align_cmd->add_option("--pass", req.pass, "utterance, word or both")
      ->check(CLI::IsMember({"utterance", "word", "both"}));
  auto* morph_cmd = add("morphotag", "Write %mor/%gra from CONLL-U analyses");
  morph_cmd->add_option("--conllu", req.conllu, "CONLL-U file (single input)");
  morph_cmd->add_option("--retokenize", req.retokenize,
                        "B/I character labels, one line per utterance");
  auto* analyze_cmd = add("analyze", "Compute MLU/TTR/NDW/MATTR and FREQ");
  analyze_cmd->add_option("--speaker", req.speakers, "Speaker code (repeatable)");
  analyze_cmd->add_flag("--measures", req.measures, "Report sample measures");
  analyze_cmd->add_option("--freq", req.freq_specs, "tier:facet[:pattern] (repeatable)");
  analyze_cmd->add_option("--mattr-window", req.mattr_window, "MATTR window")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--json", req.json_path, "Also write a JSON report here");
  auto* dot_cmd = add("dot", "Export dependency graphs as DOT");
  dot_cmd->add_option("--conllu", req.conllu, "CONLL-U file (single input)");
  auto* segment_cmd = app.add_subcommand("segment", "Build utterances from tokens and labels");
  segment_cmd->fallthrough();
  segment_cmd->add_option("tokens", req.inputs, "Whitespace-separated token file")
      ->required()
      ->expected(1);
  segment_cmd->add_option("--labels", req.labels, "Label sidecar (default: TOKENS.labels)");
  segment_cmd->add_option("--speaker", req.seg_speaker, "Speaker code");
  segment_cmd->add_option("--role", req.seg_role, "Speaker role");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    if (code == 0) return 0;
    err << app.help();
    return 2;
  }
  req.cfg.tighten = !no_tighten;
  try {
    check_config(req.cfg);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
  if (app.got_subcommand(validate_cmd)) req.cmd = Cmd::kValidate;
  if (app.got_subcommand(normalize_cmd)) req.cmd = Cmd::kNormalize;
  if (app.got_subcommand(align_cmd)) req.cmd = Cmd::kAlign;
  if (app.got_subcommand(morph_cmd)) req.cmd = Cmd::kMorphotag;
  if (app.got_subcommand(analyze_cmd)) req.cmd = Cmd::kAnalyze;
  if (app.got_subcommand(dot_cmd)) req.cmd = Cmd::kDot;
  if (app.got_subcommand(segment_cmd)) req.cmd = Cmd::kSegment;

  for (const auto& in : req.inputs) {
    if (fs::is_directory(in)) {
      std::error_code ec;
      fs::directory_iterator probe(in, ec);
      if (ec) {
        err << "cannot read directory " << in << ": " << ec.message() << "\n";
        return 1;
      }
    }
  }
  bool batch = false;
  auto files = expand_inputs(req.inputs, &batch);
  if (req.cmd == Cmd::kSegment) batch = false;

  std::vector<FileResult> results(files.size());
  const long n = static_cast<long>(files.size());
#pragma omp parallel for schedule(dynamic) num_threads(req.cfg.jobs)
  for (long i = 0; i < n; ++i) {
    results[static_cast<std::size_t>(i)] = process(req, files[static_cast<std::size_t>(i)], batch);
  }

  bool failed = false, any_diag = false;
  nlohmann::ordered_json json_doc = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    for (const auto& d : r.diags) err << format_diagnostic(d) << "\n";
    out << r.report;
    failed = failed || !r.ok;
    any_diag = any_diag || !r.diags.empty();
    if (!r.json.is_null()) json_doc.push_back(r.json);
  }
  if (req.cmd == Cmd::kAnalyze && !req.json_path.empty()) {
    try {
      atomic_write(req.json_path, json_doc.dump(2) + "\n");
    } catch (const Error& e) {
      err << e.what() << "\n";
      failed = true;
    }
  }
  if (batch) {
    out << "file\tstatus\tdiagnostics_count\telapsed_ms\n";
    for (const auto& r : results) {
      char ms[32];
      std::snprintf(ms, sizeof ms, "%.1f", r.elapsed_ms);
      out << r.file << "\t" << (r.ok ? "ok" : "failed") << "\t" << r.diags.size()
          << "\t" << ms << "\n";
    }
  }
  if (failed || (req.cfg.strict && any_diag)) return 1;
  return 0;
}

}  // namespace chatud::cli
