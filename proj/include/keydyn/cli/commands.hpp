#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "keydyn/eval/report.hpp"

namespace keydyn::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitEmpty = 2;         // featurize accepted nothing
inline constexpr int kExitParse = 3;         // unreadable CSV or session JSON
inline constexpr int kExitMissingClass = 4;  // a class or too few subjects for the folds
inline constexpr int kExitIo = 5;

/// Maps a library error to the exit code above.
int exit_code_for(const Error& e);

/// Seed from the command line, else KEYDYN_SEED, else 0.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

/// Writes through a sibling temp file and renames, so a failed run never
/// leaves a partial file behind.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

struct FeaturizeArgs {
  std::filesystem::path input;    // directory of *.json sessions or a .jsonl log
  std::filesystem::path out_dir;  // receives turkish.csv, password.csv, concat.csv, rejects.log
};
int cmd_featurize(const FeaturizeArgs& args, std::ostream& out, std::ostream& err);

struct EvalArgs {
  std::vector<std::filesystem::path> data;
  std::vector<std::filesystem::path> impostors;
  std::string algo = "all";
  std::string dataset = "all";
  std::optional<std::uint64_t> seed;
  int folds = 5;
  int jobs = 1;
  bool fold_average = false;
  std::string format = "text";
  std::optional<std::filesystem::path> output;
  AlgorithmConfig config;
};
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);

struct StatsArgs {
  std::filesystem::path data;
  std::optional<std::filesystem::path> output;
};
int cmd_stats(const StatsArgs& args, std::ostream& out, std::ostream& err);

struct ExportArgs {
  std::filesystem::path store;
  std::string phrase = "turkish";
  bool deidentify = false;
  std::optional<std::filesystem::path> output;
};
int cmd_export(const ExportArgs& args, std::ostream& out, std::ostream& err);

struct SynthArgs {
  std::filesystem::path out_dir;
  int subjects = 100;
  int sessions = 5;
  int first_id = 1;
  bool impostors = false;
  bool raw = false;  // also write raw.jsonl
  std::optional<std::uint64_t> seed;
};
int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err);

struct ServeArgs {
  std::filesystem::path store;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::filesystem::path> static_dir;
};
int cmd_serve(const ServeArgs& args, std::ostream& out, std::ostream& err);

}  // namespace keydyn::cli
