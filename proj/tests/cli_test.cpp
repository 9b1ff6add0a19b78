#include "topics/cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "topics/corpus.hpp"
#include "topics/errors.hpp"
#include "support/synthetic.hpp"

using namespace topics;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_planted_corpus(const fs::path& dir, std::uint64_t seed = 3) {
  const auto planted = synthetic::planted_topic_corpus(seed, 15);
  const auto path = dir / "corpus.jsonl";
  save_corpus(path, planted.corpus);
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

int run_binary(const std::string& arguments, const fs::path& stderr_file) {
  const char* binary = std::getenv("TOPICS_CLI");
  REQUIRE(binary != nullptr);
  const std::string command = std::string(binary) + " " + arguments +
                              " > /dev/null 2> " + stderr_file.string();
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

RunConfig base_config(const fs::path& out) {
  RunConfig config;
  config.out = out;
  config.seed = 11;
  config.min_count = 10;
  config.min_papers = 10;
  return config;
}

}  // namespace

TEST_CASE("parse_topic_range accepts lo:hi") {
  CHECK(parse_topic_range("2:8") == std::pair<int, int>{2, 8});
  CHECK(parse_topic_range("5:5") == std::pair<int, int>{5, 5});
  CHECK_THROWS_AS(parse_topic_range("8"), InputError);
  CHECK_THROWS_AS(parse_topic_range("8:2"), InputError);
  CHECK_THROWS_AS(parse_topic_range("0:4"), InputError);
  CHECK_THROWS_AS(parse_topic_range("a:b"), InputError);
}

TEST_CASE("load_run_config reads flag-named keys") {
  const auto dir = temp_dir("cli_config");
  const auto path = dir / "config.json";
  std::ofstream(path) << R"({
    "corpus": "in.jsonl", "out": "results", "seed": 99,
    "min-count": 5, "topic-range": "2:6", "seeds-per-t": 3,
    "cv-n": 15, "cv-window": 50, "cv-gamma": 2.0,
    "min-papers": 4, "venues": ["A", "B"],
    "mds-n-init": 2, "mds-max-iter": 100, "mds-tol": 1e-6,
    "kde-folds": 4, "kde-grid": [0.1, 0.2], "dump-matrix": true
  })";
  const RunConfig config = load_run_config(path);
  CHECK(config.corpus == "in.jsonl");
  CHECK(config.out == "results");
  CHECK(config.seed == 99);
  CHECK(config.min_count == 5);
  REQUIRE(config.topic_range.has_value());
  CHECK(config.topic_range->first == 2);
  CHECK(config.topic_range->second == 6);
  CHECK(config.seeds_per_t == 3);
  CHECK(config.cv_n == 15);
  CHECK(config.cv_window == 50);
  CHECK(config.cv_gamma == 2.0);
  CHECK(config.min_papers == 4);
  CHECK(config.venues == std::vector<std::string>{"A", "B"});
  CHECK(config.mds_n_init == 2);
  CHECK(config.kde_folds == 4);
  CHECK(config.kde_grid == std::vector<double>{0.1, 0.2});
  CHECK(config.dump_matrix);

  CHECK_THROWS_AS(load_run_config(dir / "missing.json"), InputError);
}

TEST_CASE("run_ingest writes the filtered corpus, report and stats") {
  const auto dir = temp_dir("cli_ingest");
  RunConfig config = base_config(dir / "out");
  config.corpus = write_planted_corpus(dir);
  run_ingest(config);

  CHECK(fs::exists(config.out / "corpus.filtered.jsonl"));
  CHECK(fs::exists(config.out / "corpus_stats.csv"));
  const auto report =
      nlohmann::json::parse(slurp(config.out / "filter_report.json"));
  CHECK(report.at("kept").get<int>() == 200);
  CHECK(report.at("removed_missing_abstract").get<int>() == 0);

  // re-ingesting its own output is a no-op
  RunConfig again = base_config(dir / "out2");
  again.corpus = config.out / "corpus.filtered.jsonl";
  run_ingest(again);
  const auto second =
      nlohmann::json::parse(slurp(again.out / "filter_report.json"));
  CHECK(second.at("kept").get<int>() == 200);
  CHECK(slurp(config.out / "corpus.filtered.jsonl") ==
        slurp(again.out / "corpus.filtered.jsonl"));
}

TEST_CASE("run_fit with a fixed topic count writes the model only") {
  const auto dir = temp_dir("cli_fit_fixed");
  RunConfig config = base_config(dir / "out");
  config.corpus = write_planted_corpus(dir);
  run_ingest(config);
  config.corpus.clear();  // fall back to <out>/corpus.filtered.jsonl
  config.topics = 4;
  run_fit(config);

  CHECK(fs::exists(config.out / "model.json"));
  CHECK(fs::exists(config.out / "fit_summary.json"));
  CHECK(fs::exists(config.out / "abstract_lengths_before.csv"));
  CHECK(fs::exists(config.out / "term_ranks_after.svg"));
  CHECK_FALSE(fs::exists(config.out / "sweep.csv"));
  CHECK_FALSE(fs::exists(config.out / "coherence_curve.svg"));

  const auto summary =
      nlohmann::json::parse(slurp(config.out / "fit_summary.json"));
  CHECK(summary.at("t").get<int>() == 4);
}

TEST_CASE("run_fit sweep writes per-seed rows and curves") {
  const auto dir = temp_dir("cli_fit_sweep");
  RunConfig config = base_config(dir / "out");
  config.corpus = write_planted_corpus(dir);
  run_ingest(config);
  config.corpus.clear();
  config.topic_range = {{2, 4}};
  config.seeds_per_t = 1;
  run_fit(config);

  const std::string sweep = slurp(config.out / "sweep.csv");
  CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 4);  // header + 3
  CHECK(fs::exists(config.out / "sweep_curve.csv"));
  CHECK(fs::exists(config.out / "coherence_curve.svg"));
  CHECK(fs::exists(config.out / "error_curve.svg"));
  CHECK(fs::exists(config.out / "model.json"));
}

TEST_CASE("run_fit demands exactly one topic specification") {
  const auto dir = temp_dir("cli_fit_bad");
  RunConfig config = base_config(dir / "out");
  config.corpus = write_planted_corpus(dir);
  CHECK_THROWS_AS(run_fit(config), InputError);
  config.topics = 3;
  config.topic_range = {{2, 4}};
  CHECK_THROWS_AS(run_fit(config), InputError);
}

TEST_CASE("repeated fit runs are byte-identical") {
  const auto dir = temp_dir("cli_fit_det");
  const auto corpus = write_planted_corpus(dir);
  for (const char* out : {"out1", "out2"}) {
    RunConfig config = base_config(dir / out);
    config.corpus = corpus;
    run_ingest(config);
    config.corpus.clear();
    config.topics = 4;
    run_fit(config);
  }
  CHECK(slurp(dir / "out1/model.json") == slurp(dir / "out2/model.json"));
  CHECK(slurp(dir / "out1/fit_summary.json") ==
        slurp(dir / "out2/fit_summary.json"));
  CHECK(slurp(dir / "out1/term_ranks_after.csv") ==
        slurp(dir / "out2/term_ranks_after.csv"));
}

TEST_CASE("run_analyze writes the requested analyses") {
  const auto dir = temp_dir("cli_analyze");
  RunConfig config = base_config(dir / "out");
  config.corpus = write_planted_corpus(dir);
  run_ingest(config);
  config.corpus.clear();
  config.topics = 4;
  run_fit(config);

  run_analyze(config, {"diversity", "map", "topics"});
  CHECK(fs::exists(config.out / "diversity.csv"));
  CHECK(fs::exists(config.out / "diversity_grid.csv"));
  CHECK(fs::exists(config.out / "diversity_grid.svg"));
  CHECK(fs::exists(config.out / "venue_map.csv"));
  CHECK(fs::exists(config.out / "topics.csv"));
  CHECK_FALSE(fs::exists(config.out / "trajectories.csv"));

  // four venues qualify for the map, ENS values are within bounds
  const std::string map_csv = slurp(config.out / "venue_map.csv");
  CHECK(std::count(map_csv.begin(), map_csv.end(), '\n') == 5);
  std::ifstream diversity(config.out / "diversity.csv");
  std::string line;
  std::getline(diversity, line);
  int rows = 0;
  while (std::getline(diversity, line)) {
    const auto comma = line.rfind(',');
    const double ens = std::stod(line.substr(comma + 1));
    CHECK(ens >= 1.0);
    CHECK(ens <= 4.0);
    ++rows;
  }
  CHECK(rows == 4);

  CHECK_THROWS_AS(run_analyze(config, {"nonsense"}), SelectorError);
  config.venues = {"NoSuchVenue"};
  CHECK_THROWS_AS(run_analyze(config, {"diversity"}), SelectorError);
}

TEST_CASE("run_analyze without a model reports the missing artifact") {
  const auto dir = temp_dir("cli_analyze_missing");
  RunConfig config = base_config(dir / "out");
  fs::create_directories(config.out);
  CHECK_THROWS_AS(run_analyze(config, {"topics"}), MissingArtifactError);
}

TEST_CASE("exit codes map error categories") {
  CHECK(exit_code_for(InputError("x")) == 2);
  CHECK(exit_code_for(MissingArtifactError("x")) == 3);
  CHECK(exit_code_for(SelectorError("x")) == 4);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("the binary returns documented exit codes") {
  const auto dir = temp_dir("cli_binary");
  const auto errors = dir / "stderr.txt";

  // schema violation on line 2 -> exit 2, stderr names the line
  const auto bad = dir / "bad.jsonl";
  std::ofstream(bad)
      << R"({"id":"p1","title":"T","abstract":"x","venue":"A","year":2000})"
      << "\n{\"id\":\"p2\"}\n";
  CHECK(run_binary("ingest --corpus " + bad.string() + " --out " +
                       (dir / "out").string(),
                   errors) == 2);
  CHECK(slurp(errors).find("line 2") != std::string::npos);

  // missing model -> exit 3
  fs::create_directories(dir / "empty");
  const auto corpus = write_planted_corpus(dir);
  std::ofstream(dir / "empty/corpus.filtered.jsonl")
      << slurp(corpus);
  CHECK(run_binary("analyze --out " + (dir / "empty").string(), errors) == 3);

  // unknown analysis selector -> exit 4
  RunConfig config = base_config(dir / "fitted");
  config.corpus = corpus;
  run_ingest(config);
  config.corpus.clear();
  config.topics = 4;
  run_fit(config);
  CHECK(run_binary("analyze --out " + (dir / "fitted").string() +
                       " --analyses bogus",
                   errors) == 4);
  CHECK(run_binary("analyze --out " + (dir / "fitted").string() +
                       " --venues NoSuchVenue --analyses diversity",
                   errors) == 4);

  // happy path ingest -> exit 0
  CHECK(run_binary("ingest --corpus " + corpus.string() + " --out " +
                       (dir / "ok").string(),
                   errors) == 0);
}
