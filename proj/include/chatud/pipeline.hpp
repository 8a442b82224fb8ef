#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

// Command-line front end: one subcommand per pipeline stage.
namespace chatud::cli {

struct PipelineConfig {
  std::string language;  // empty: take it from the transcript
  std::filesystem::path repair_lexicon;
  std::filesystem::path mwt_lexicon;
  std::int64_t pad_ms = 500;
  int kernel = 7;
  std::int64_t frame_ms = 20;
  bool tighten = true;
  bool english_compat = false;  // write %umor/%ugra
  bool suppress_singular = false;
  std::filesystem::path dot_dir;
  bool strict = false;
  int jobs = 1;
};

// Throws Error{kUsage} when kernel is even or < 1, pad_ms < 0, frame_ms <= 0
// or jobs < 1.
void check_config(const PipelineConfig& cfg);

// CHATUD_DATA_DIR from the environment, else the configured install path.
std::filesystem::path data_dir();

std::string_view version();

// Exit status: 0 ok, 1 a file failed (or any diagnostic under --strict),
// 2 usage error. args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace chatud::cli
