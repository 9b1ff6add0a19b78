#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topics/cli.hpp"
#include "topics/errors.hpp"

namespace {

// Raw flag values; only options the user actually passed override the config.
struct FlagValues {
  std::string config_path;
  std::string corpus;
  std::string stopwords;
  std::string out;
  std::uint64_t seed = 0;
  int min_papers = 0;
  std::vector<std::string> venues;
  int min_year = 0;
  int max_year = 0;
  int min_count = 0;
  int topics = 0;
  std::string topic_range;
  int seeds_per_t = 0;
  int cv_n = 0;
  int cv_window = 0;
  double cv_gamma = 0.0;
  int mds_n_init = 0;
  int mds_max_iter = 0;
  double mds_tol = 0.0;
  int kde_folds = 0;
  std::vector<double> kde_grid;
  bool dump_matrix = false;
  std::vector<std::string> analyses;
};

void add_shared_options(CLI::App& cmd, FlagValues& flags) {
  cmd.add_option("--config", flags.config_path, "JSON config file");
  cmd.add_option("--corpus", flags.corpus, "corpus JSONL file");
  cmd.add_option("--out", flags.out, "output directory");
  cmd.add_option("--seed", flags.seed, "random seed");
  cmd.add_option("--min-papers", flags.min_papers,
                 "minimum papers per venue-year aggregate");
  cmd.add_option("--venues", flags.venues, "comma-separated venue list")
      ->delimiter(',');
}

topics::RunConfig merge(const CLI::App& cmd, const FlagValues& flags) {
  topics::RunConfig config;
  if (cmd.count("--config") > 0) {
    config = topics::load_run_config(flags.config_path);
  }
  auto passed = [&](const std::string& name) {
    return cmd.get_option_no_throw(name) != nullptr && cmd.count(name) > 0;
  };
  if (passed("--corpus")) config.corpus = flags.corpus;
  if (passed("--stopwords")) config.stopwords = flags.stopwords;
  if (passed("--out")) config.out = flags.out;
  if (passed("--seed")) config.seed = flags.seed;
  if (passed("--min-papers")) config.min_papers = flags.min_papers;
  if (passed("--venues")) config.venues = flags.venues;
  if (passed("--min-year")) config.min_year = flags.min_year;
  if (passed("--max-year")) config.max_year = flags.max_year;
  if (passed("--min-count")) config.min_count = flags.min_count;
  if (passed("--topics")) config.topics = flags.topics;
  if (passed("--topic-range")) {
    config.topic_range = topics::parse_topic_range(flags.topic_range);
  }
  if (passed("--seeds-per-t")) config.seeds_per_t = flags.seeds_per_t;
  if (passed("--cv-n")) config.cv_n = flags.cv_n;
  if (passed("--cv-window")) config.cv_window = flags.cv_window;
  if (passed("--cv-gamma")) config.cv_gamma = flags.cv_gamma;
  if (passed("--mds-n-init")) config.mds_n_init = flags.mds_n_init;
  if (passed("--mds-max-iter")) config.mds_max_iter = flags.mds_max_iter;
  if (passed("--mds-tol")) config.mds_tol = flags.mds_tol;
  if (passed("--kde-folds")) config.kde_folds = flags.kde_folds;
  if (passed("--kde-grid")) config.kde_grid = flags.kde_grid;
  if (passed("--dump-matrix")) config.dump_matrix = flags.dump_matrix;
  // --topics on the command line replaces a configured range and vice versa
  if (passed("--topics") && !passed("--topic-range")) {
    config.topic_range.reset();
  }
  if (passed("--topic-range") && !passed("--topics")) {
    config.topics.reset();
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic space analysis of publication corpora"};
  app.require_subcommand(1);

  FlagValues ingest_flags;
  CLI::App* ingest = app.add_subcommand(
      "ingest", "load, validate and filter a corpus");
  add_shared_options(*ingest, ingest_flags);
  ingest->add_option("--min-year", ingest_flags.min_year, "drop papers before");
  ingest->add_option("--max-year", ingest_flags.max_year, "drop papers after");

  FlagValues fit_flags;
  CLI::App* fit = app.add_subcommand(
      "fit", "build the tf-idf matrix and train the topic model");
  add_shared_options(*fit, fit_flags);
  fit->add_option("--stopwords", fit_flags.stopwords, "stopword list file");
  fit->add_option("--topics", fit_flags.topics, "fixed topic number");
  fit->add_option("--topic-range", fit_flags.topic_range,
                  "sweep topic numbers lo:hi");
  fit->add_option("--seeds-per-t", fit_flags.seeds_per_t,
                  "models per topic number in a sweep");
  fit->add_option("--min-count", fit_flags.min_count,
                  "minimum corpus frequency of a vocabulary term");
  fit->add_option("--cv-n", fit_flags.cv_n, "coherence top terms (default 20)");
  fit->add_option("--cv-window", fit_flags.cv_window,
                  "coherence sliding window size (default 110)");
  fit->add_option("--cv-gamma", fit_flags.cv_gamma,
                  "coherence NPMI weight (default 1.0)");
  fit->add_flag("--dump-matrix", fit_flags.dump_matrix,
                "write the tf-idf matrix in coordinate format");

  FlagValues analyze_flags;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "export analyses and plots from a fitted model");
  add_shared_options(*analyze, analyze_flags);
  analyze->add_option("--analyses", analyze_flags.analyses,
                      "comma-separated subset of: topics, similarities, "
                      "importances, map, trajectories, heatmaps, diversity, "
                      "density")
      ->delimiter(',');
  analyze->add_option("--mds-n-init", analyze_flags.mds_n_init,
                      "MDS random restarts");
  analyze->add_option("--mds-max-iter", analyze_flags.mds_max_iter,
                      "MDS iteration cap");
  analyze->add_option("--mds-tol", analyze_flags.mds_tol,
                      "MDS convergence tolerance");
  analyze->add_option("--kde-folds", analyze_flags.kde_folds,
                      "KDE cross-validation folds");
  analyze->add_option("--kde-grid", analyze_flags.kde_grid,
                      "comma-separated KDE bandwidth grid")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ingest->parsed()) {
      topics::run_ingest(merge(*ingest, ingest_flags));
    } else if (fit->parsed()) {
      topics::run_fit(merge(*fit, fit_flags));
    } else if (analyze->parsed()) {
      topics::run_analyze(merge(*analyze, analyze_flags),
                          analyze_flags.analyses);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return topics::exit_code_for(e);
  }
  return 0;
}
