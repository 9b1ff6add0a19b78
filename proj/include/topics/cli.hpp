#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace topics {

// All pipeline parameters. JSON config keys match the CLI flag names
// (e.g. "min-count" for --min-count); flags passed on the command line
// override config values.
struct RunConfig {
  std::filesystem::path corpus;     // empty: <out>/corpus.filtered.jsonl
  std::filesystem::path stopwords;  // empty: built-in list
  std::filesystem::path out = "out";

  std::optional<int> min_year;
  std::optional<int> max_year;
  std::vector<std::string> venues;  // ingest: allowlist; analyze: selection

  int min_count = 10;
  std::optional<int> topics;
  std::optional<std::pair<int, int>> topic_range;  // inclusive
  int seeds_per_t = 1;
  std::uint64_t seed = 1;

  int cv_n = 20;
  int cv_window = 110;
  double cv_gamma = 1.0;

  int min_papers = 10;

  int mds_n_init = 4;
  int mds_max_iter = 300;
  double mds_tol = 1e-7;

  int kde_folds = 5;
  std::vector<double> kde_grid;  // empty: automatic log-spaced grid

  bool dump_matrix = false;
};

RunConfig load_run_config(const std::filesystem::path& path);

// "lo:hi" -> {lo, hi}; throws InputError on malformed input.
std::pair<int, int> parse_topic_range(const std::string& text);

// The analyze subcommand's analysis names in canonical execution order.
const std::vector<std::string>& known_analyses();

void run_ingest(const RunConfig& config);
void run_fit(const RunConfig& config);
void run_analyze(const RunConfig& config,
                 const std::vector<std::string>& analyses);

// Exit code mapping: 0 ok, 2 input/schema, 3 missing artifact, 4 bad
// selector, 1 anything else.
int exit_code_for(const std::exception& error);

}  // namespace topics
