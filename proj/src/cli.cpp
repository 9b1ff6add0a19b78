#include "topics/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <unordered_set>

#include <json.hpp>

#include "topics/coherence.hpp"
#include "topics/corpus.hpp"
#include "topics/csv.hpp"
#include "topics/errors.hpp"
#include "topics/kde.hpp"
#include "topics/mds.hpp"
#include "topics/nmf.hpp"
#include "topics/svg.hpp"
#include "topics/text.hpp"
#include "topics/trajectory.hpp"

namespace topics {

namespace {

namespace fs = std::filesystem;

// Guards the output directory against concurrent writers.
class OutputLock {
 public:
  explicit OutputLock(const fs::path& directory)
      : lock_path_(directory / ".lock") {
    fs::create_directories(directory);
    std::FILE* file = std::fopen(lock_path_.c_str(), "wx");
    if (file == nullptr) {
      throw Error("output directory is locked by another run: " +
                  lock_path_.string());
    }
    std::fclose(file);
  }
  ~OutputLock() {
    std::error_code ec;
    fs::remove(lock_path_, ec);
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  fs::path lock_path_;
};

fs::path corpus_path(const RunConfig& config) {
  return config.corpus.empty() ? config.out / "corpus.filtered.jsonl"
                               : config.corpus;
}

StopwordSet resolve_stopwords(const RunConfig& config) {
  return config.stopwords.empty() ? builtin_stopwords()
                                  : load_stopwords(config.stopwords);
}

std::string topic_label(const TopicModel& model, int topic) {
  auto ranked = top_terms(model, topic,
                          std::min<int>(2, static_cast<int>(model.term_count())));
  std::string label = "topic_" + std::to_string(topic) + ":";
  for (const auto& [term, weight] : ranked) {
    label += ' ';
    label += term;
  }
  return label;
}

std::vector<std::string> topic_labels(const TopicModel& model) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(model.topic_count()));
  for (int j = 0; j < model.topic_count(); ++j) {
    labels.push_back(topic_label(model, j));
  }
  return labels;
}

// Deterministic unique filename fragment per venue.
std::map<std::string, std::string> venue_file_names(
    const std::vector<std::string>& venues) {
  std::map<std::string, std::string> names;
  std::unordered_set<std::string> used;
  for (const std::string& venue : venues) {  // callers pass sorted venues
    std::string base;
    for (char c : venue) {
      const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-';
      base += keep ? c : '_';
    }
    if (base.empty()) {
      base = "venue";
    }
    std::string candidate = base;
    int suffix = 1;
    while (!used.insert(candidate).second) {
      candidate = base + "_" + std::to_string(++suffix);
    }
    names[venue] = candidate;
  }
  return names;
}

void write_json(const fs::path& path, const nlohmann::json& object) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InputError("cannot write file: " + path.string());
  }
  out << object.dump(2) << '\n';
}

void write_length_stats(const fs::path& csv_path, const fs::path& svg_path,
                        const LengthStats& stats, std::string_view title) {
  CsvWriter csv(csv_path);
  csv.field("bin_start").field("bin_end").field("count");
  csv.end_row();
  for (std::size_t bin = 0; bin < stats.histogram.size(); ++bin) {
    csv.field(static_cast<std::int64_t>(bin) * stats.bin_width)
        .field(static_cast<std::int64_t>(bin + 1) * stats.bin_width)
        .field(stats.histogram[bin]);
    csv.end_row();
  }
  svg::write_histogram(svg_path, stats.histogram, stats.bin_width, title,
                       "abstract length (tokens)");
}

void write_ranking(const fs::path& csv_path, const fs::path& svg_path,
                   const std::vector<RankedTerm>& ranking,
                   std::string_view title) {
  CsvWriter csv(csv_path);
  csv.field("rank").field("term").field("frequency");
  csv.end_row();
  svg::Series series;
  series.label = "frequency";
  for (const RankedTerm& row : ranking) {
    csv.field(row.rank).field(row.term).field(row.frequency);
    csv.end_row();
    series.xs.push_back(static_cast<double>(row.rank));
    series.ys.push_back(static_cast<double>(row.frequency));
  }
  if (!series.xs.empty()) {
    svg::write_curve(svg_path, {series}, title, "log10 rank",
                     "log10 frequency", /*log_log=*/true);
  }
}

nlohmann::json length_stats_json(const LengthStats& stats) {
  return {{"documents", stats.documents},
          {"mean", stats.mean},
          {"median", stats.median},
          {"stddev", stats.stddev},
          {"bin_width", stats.bin_width}};
}

std::uint64_t venue_seed(const RunConfig& config, const std::string& venue) {
  return config.seed ^ fnv1a64(venue);
}

}  // namespace

RunConfig load_run_config(const fs::path& path) {
  std::ifstream file(path);
  if (!file) {
    throw InputError("cannot open config file: " + path.string());
  }
  nlohmann::json object;
  try {
    file >> object;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config file " + path.string() + ": " + e.what());
  }

  RunConfig config;
  try {
    if (object.contains("corpus")) {
      config.corpus = object.at("corpus").get<std::string>();
    }
    if (object.contains("stopwords")) {
      config.stopwords = object.at("stopwords").get<std::string>();
    }
    if (object.contains("out")) {
      config.out = object.at("out").get<std::string>();
    }
    if (object.contains("min-year")) {
      config.min_year = object.at("min-year").get<int>();
    }
    if (object.contains("max-year")) {
      config.max_year = object.at("max-year").get<int>();
    }
    if (object.contains("venues")) {
      config.venues = object.at("venues").get<std::vector<std::string>>();
    }
    if (object.contains("min-count")) {
      config.min_count = object.at("min-count").get<int>();
    }
    if (object.contains("topics")) {
      config.topics = object.at("topics").get<int>();
    }
    if (object.contains("topic-range")) {
      config.topic_range =
          parse_topic_range(object.at("topic-range").get<std::string>());
    }
    if (object.contains("seeds-per-t")) {
      config.seeds_per_t = object.at("seeds-per-t").get<int>();
    }
    if (object.contains("seed")) {
      config.seed = object.at("seed").get<std::uint64_t>();
    }
    if (object.contains("cv-n")) {
      config.cv_n = object.at("cv-n").get<int>();
    }
    if (object.contains("cv-window")) {
      config.cv_window = object.at("cv-window").get<int>();
    }
    if (object.contains("cv-gamma")) {
      config.cv_gamma = object.at("cv-gamma").get<double>();
    }
    if (object.contains("min-papers")) {
      config.min_papers = object.at("min-papers").get<int>();
    }
    if (object.contains("mds-n-init")) {
      config.mds_n_init = object.at("mds-n-init").get<int>();
    }
    if (object.contains("mds-max-iter")) {
      config.mds_max_iter = object.at("mds-max-iter").get<int>();
    }
    if (object.contains("mds-tol")) {
      config.mds_tol = object.at("mds-tol").get<double>();
    }
    if (object.contains("kde-folds")) {
      config.kde_folds = object.at("kde-folds").get<int>();
    }
    if (object.contains("kde-grid")) {
      config.kde_grid = object.at("kde-grid").get<std::vector<double>>();
    }
    if (object.contains("dump-matrix")) {
      config.dump_matrix = object.at("dump-matrix").get<bool>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config file " + path.string() + ": " + e.what());
  }
  return config;
}

std::pair<int, int> parse_topic_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InputError("topic range must be 'lo:hi', got '" + text + "'");
  }
  try {
    const int lo = std::stoi(text.substr(0, colon));
    const int hi = std::stoi(text.substr(colon + 1));
    if (lo < 1 || hi < lo) {
      throw InputError("topic range must satisfy 1 <= lo <= hi");
    }
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InputError("topic range must be 'lo:hi', got '" + text + "'");
  }
}

const std::vector<std::string>& known_analyses() {
  static const std::vector<std::string> kNames = {
      "topics",       "similarities", "importances", "map",
      "trajectories", "heatmaps",     "diversity",   "density"};
  return kNames;
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const InputError*>(&error) != nullptr) {
    return 2;
  }
  if (dynamic_cast<const MissingArtifactError*>(&error) != nullptr) {
    return 3;
  }
  if (dynamic_cast<const SelectorError*>(&error) != nullptr) {
    return 4;
  }
  return 1;
}

void run_ingest(const RunConfig& config) {
  if (config.corpus.empty()) {
    throw InputError("ingest requires --corpus");
  }
  const PublicationCorpus raw = load_corpus(config.corpus);

  FilterOptions options;
  options.min_year = config.min_year;
  options.max_year = config.max_year;
  if (!config.venues.empty()) {
    options.venue_allowlist.emplace(config.venues.begin(), config.venues.end());
  }
  const auto [filtered, report] = filter_corpus(raw, options);

  OutputLock lock(config.out);
  save_corpus(config.out / "corpus.filtered.jsonl", filtered);
  write_json(config.out / "filter_report.json",
             {{"removed_missing_abstract", report.removed_missing_abstract},
              {"removed_title_heuristic", report.removed_title_heuristic},
              {"removed_by_year_or_venue", report.removed_by_year_or_venue},
              {"kept", report.kept}});

  CsvWriter stats(config.out / "corpus_stats.csv");
  stats.field("venue").field("year").field("count");
  stats.end_row();
  for (const VenueYearCount& row : corpus_stats(filtered)) {
    stats.field(row.venue).field(row.year).field(row.count);
    stats.end_row();
  }

  std::cout << "ingest: kept " << report.kept << " of " << raw.size()
            << " records\n";
}

namespace {

void write_text_stats(const RunConfig& config, const PublicationCorpus& corpus,
                      const StopwordSet& stopwords,
                      const TermDocumentMatrix& matrix) {
  const LengthStats before = abstract_length_stats(corpus, stopwords, false);
  const LengthStats after = abstract_length_stats(corpus, stopwords, true);
  write_length_stats(config.out / "abstract_lengths_before.csv",
                     config.out / "abstract_lengths_before.svg", before,
                     "Abstract lengths before stopword removal");
  write_length_stats(config.out / "abstract_lengths_after.csv",
                     config.out / "abstract_lengths_after.svg", after,
                     "Abstract lengths after stopword removal");

  write_ranking(config.out / "term_ranks_before.csv",
                config.out / "term_ranks_before.svg",
                term_frequency_ranking(corpus, stopwords, false),
                "Term frequency by rank (before stopword removal)");
  write_ranking(config.out / "term_ranks_after.csv",
                config.out / "term_ranks_after.svg",
                term_frequency_ranking(corpus, stopwords, true),
                "Term frequency by rank (after stopword removal)");

  write_json(config.out / "text_stats.json",
             {{"abstract_lengths",
               {{"before", length_stats_json(before)},
                {"after", length_stats_json(after)}}},
              {"dropped_doc_ids", matrix.dropped_doc_ids}});
}

void write_sweep_outputs(const RunConfig& config, const SweepResult& sweep) {
  {
    CsvWriter csv(config.out / "sweep.csv");
    csv.field("t").field("seed").field("coherence").field(
        "reconstruction_error");
    csv.field("relative_error");
    csv.end_row();
    for (const SweepEntry& entry : sweep.entries) {
      if (entry.failed) {
        continue;
      }
      csv.field(entry.topic_count)
          .field(static_cast<std::int64_t>(entry.seed))
          .field(entry.coherence)
          .field(entry.reconstruction_error)
          .field(entry.relative_error);
      csv.end_row();
    }
  }
  {
    CsvWriter csv(config.out / "sweep_curve.csv");
    csv.field("t").field("best_coherence").field("mean_error").field(
        "mean_relative_error");
    csv.end_row();
    for (const SweepCurvePoint& point : sweep.curve) {
      csv.field(point.topic_count)
          .field(point.best_coherence)
          .field(point.mean_error)
          .field(point.mean_relative_error);
      csv.end_row();
    }
  }

  svg::Series coherence_series;
  svg::Series error_series;
  svg::Series relative_series;
  coherence_series.label = "best coherence";
  error_series.label = "mean error";
  relative_series.label = "mean relative error";
  for (const SweepCurvePoint& point : sweep.curve) {
    const auto t = static_cast<double>(point.topic_count);
    coherence_series.xs.push_back(t);
    coherence_series.ys.push_back(point.best_coherence);
    error_series.xs.push_back(t);
    error_series.ys.push_back(point.mean_error);
    relative_series.xs.push_back(t);
    relative_series.ys.push_back(point.mean_relative_error);
  }
  svg::write_curve(config.out / "coherence_curve.svg", {coherence_series},
                   "Model coherence by topic number", "topic number t",
                   "C_V coherence");
  svg::write_curve(config.out / "error_curve.svg", {error_series},
                   "Reconstruction error by topic number", "topic number t",
                   "Frobenius error");
}

}  // namespace

void run_fit(const RunConfig& config) {
  if (config.topics.has_value() == config.topic_range.has_value()) {
    throw InputError("fit requires exactly one of --topics or --topic-range");
  }

  const PublicationCorpus corpus = load_corpus(corpus_path(config));
  if (corpus.size() == 0) {
    throw InputError("corpus is empty");
  }
  const StopwordSet stopwords = resolve_stopwords(config);

  const Vocabulary vocab = build_vocabulary(corpus, config.min_count, stopwords);
  const TermDocumentMatrix matrix = tfidf_matrix(corpus, vocab);
  if (matrix.document_count() == 0) {
    throw InputError("every document dropped; nothing to factorize");
  }

  std::vector<TokenStream> streams;
  streams.reserve(corpus.size());
  for (const PublicationRecord& record : corpus.records()) {
    streams.push_back(tokenize(record.abstract_text, stopwords));
  }
  const WindowIndex index = build_window_index(streams, config.cv_window);

  OutputLock lock(config.out);
  write_text_stats(config, corpus, stopwords, matrix);
  if (config.dump_matrix) {
    write_matrix_coordinate(config.out / "tdm.txt", matrix);
  }

  CvParams params;
  params.top_terms = config.cv_n;
  params.window_size = config.cv_window;
  params.gamma = config.cv_gamma;

  TopicModel model;
  nlohmann::json summary;
  if (config.topic_range) {
    std::vector<int> candidates;
    for (int t = config.topic_range->first; t <= config.topic_range->second;
         ++t) {
      candidates.push_back(t);
    }
    SweepResult sweep =
        select_topic_number(matrix, vocab, index, candidates,
                            config.seeds_per_t, config.seed, {}, params);
    write_sweep_outputs(config, sweep);
    model = std::move(*sweep.best_model);
    summary["t"] = sweep.best_topic_count;
    summary["seed"] = sweep.best_seed;
    for (const SweepEntry& entry : sweep.entries) {
      if (!entry.failed && entry.topic_count == sweep.best_topic_count &&
          entry.seed == sweep.best_seed) {
        summary["coherence"] = entry.coherence;
        summary["reconstruction_error"] = entry.reconstruction_error;
        summary["relative_error"] = entry.relative_error;
      }
    }
  } else {
    auto [fitted, trace] =
        factorize(matrix, vocab, *config.topics, config.seed);
    model = std::move(fitted);
    const double v_norm = frobenius_norm(matrix.weights);
    summary["t"] = *config.topics;
    summary["seed"] = config.seed;
    summary["coherence"] =
        model_coherence(model, index, params.top_terms, params.gamma)
            .model_coherence;
    summary["reconstruction_error"] = trace.errors.back();
    summary["relative_error"] =
        v_norm > 0.0 ? trace.errors.back() / v_norm : 0.0;
  }

  summary["iterations"] = model.iterations;
  summary["documents"] = model.document_count();
  summary["vocabulary_size"] = model.term_count();
  summary["dropped_documents"] = matrix.dropped_doc_ids.size();
  save_model(config.out / "model.json", model);
  write_json(config.out / "fit_summary.json", summary);

  std::cout << "fit: t=" << model.topic_count() << " n=" << model.term_count()
            << " d=" << model.document_count() << '\n';
}

namespace {

struct AnalyzeContext {
  const RunConfig& config;
  const TopicModel& model;
  const PublicationCorpus& corpus;
  std::vector<std::string> venues;  // sorted selection
  std::map<std::string, std::string> file_names;
  std::vector<std::string> labels;
};

void analyze_topics(const AnalyzeContext& ctx) {
  const int k = std::min<int>(10, static_cast<int>(ctx.model.term_count()));
  CsvWriter csv(ctx.config.out / "topics.csv");
  csv.field("topic").field("rank").field("term").field("weight");
  csv.end_row();
  std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(k));
  for (int topic = 0; topic < ctx.model.topic_count(); ++topic) {
    const auto ranked = top_terms(ctx.model, topic, k);
    for (int rank = 0; rank < k; ++rank) {
      csv.field(topic)
          .field(rank + 1)
          .field(ranked[rank].first)
          .field(ranked[rank].second);
      csv.end_row();
      rows[static_cast<std::size_t>(rank)].push_back(ranked[rank].first);
    }
  }
  svg::write_table(ctx.config.out / "topics.svg", ctx.labels, rows,
                   "Topics by top ranked terms");
}

void analyze_similarities(const AnalyzeContext& ctx) {
  const Eigen::MatrixXd similarity = topic_similarity_matrix(ctx.model);
  CsvWriter csv(ctx.config.out / "topic_similarity.csv");
  csv.field("topic");
  for (const std::string& label : ctx.labels) {
    csv.field(label);
  }
  csv.end_row();
  for (Eigen::Index i = 0; i < similarity.rows(); ++i) {
    csv.field(ctx.labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < similarity.cols(); ++j) {
      csv.field(similarity(i, j));
    }
    csv.end_row();
  }
  svg::write_heatmap(ctx.config.out / "topic_similarity.svg", similarity,
                     ctx.labels, ctx.labels, "Topic cosine similarities");
}

void analyze_importances(const AnalyzeContext& ctx) {
  const auto normalized = yearly_topic_importances(ctx.model, ctx.corpus,
                                                   ImportanceMode::normalized);
  const auto absolute = yearly_topic_importances(ctx.model, ctx.corpus,
                                                 ImportanceMode::absolute);
  CsvWriter csv(ctx.config.out / "importances.csv");
  csv.field("year").field("mode");
  for (int j = 0; j < ctx.model.topic_count(); ++j) {
    csv.field("topic_" + std::to_string(j));
  }
  csv.end_row();
  auto emit = [&](const std::vector<YearImportance>& rows,
                  std::string_view mode) {
    for (const YearImportance& row : rows) {
      csv.field(static_cast<std::int64_t>(row.year)).field(mode);
      for (Eigen::Index j = 0; j < row.weights.size(); ++j) {
        csv.field(row.weights(j));
      }
      csv.end_row();
    }
  };
  emit(normalized, "normalized");
  emit(absolute, "absolute");

  auto to_matrix = [&](const std::vector<YearImportance>& rows) {
    Eigen::MatrixXd m(ctx.model.topic_count(),
                      static_cast<Eigen::Index>(rows.size()));
    for (std::size_t c = 0; c < rows.size(); ++c) {
      m.col(static_cast<Eigen::Index>(c)) = rows[c].weights;
    }
    return m;
  };
  std::vector<std::string> years;
  years.reserve(normalized.size());
  for (const YearImportance& row : normalized) {
    years.push_back(std::to_string(row.year));
  }
  svg::write_stacked_bars(ctx.config.out / "importances_normalized.svg", years,
                          ctx.labels, to_matrix(normalized),
                          "Relative topic importance by year");
  svg::write_stacked_bars(ctx.config.out / "importances_absolute.svg", years,
                          ctx.labels, to_matrix(absolute),
                          "Absolute topic importance by year");
}

void analyze_map(const AnalyzeContext& ctx) {
  std::vector<std::string> qualifying;
  std::vector<Eigen::VectorXd> centroids;
  for (const std::string& venue : ctx.venues) {
    try {
      VenueEmbedding embedding = venue_embedding(ctx.model, ctx.corpus, venue);
      if (embedding.paper_count >= ctx.config.min_papers) {
        qualifying.push_back(venue);
        centroids.push_back(std::move(embedding.centroid));
      }
    } catch (const InputError&) {
      // venue with no embedded papers
    }
  }
  if (qualifying.size() < 2) {
    throw InputError("topical map needs at least two venues with " +
                     std::to_string(ctx.config.min_papers) + "+ papers");
  }

  MdsOptions options;
  options.n_init = ctx.config.mds_n_init;
  options.max_iterations = ctx.config.mds_max_iter;
  options.tolerance = ctx.config.mds_tol;
  const auto embedding =
      mds(pairwise_distances(centroids), ctx.config.seed, options);

  CsvWriter csv(ctx.config.out / "venue_map.csv");
  csv.field("label").field("x").field("y");
  csv.end_row();
  std::vector<svg::LabeledPoint> points;
  for (std::size_t i = 0; i < qualifying.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    csv.field(qualifying[i])
        .field(embedding.points(row, 0))
        .field(embedding.points(row, 1));
    csv.end_row();
    points.push_back(
        {qualifying[i], embedding.points(row, 0), embedding.points(row, 1)});
  }
  svg::write_scatter(ctx.config.out / "venue_map.svg", points,
                     "Topical map of venues");
}

void write_trajectories_csv(const AnalyzeContext& ctx) {
  CsvWriter csv(ctx.config.out / "trajectories.csv");
  csv.field("venue").field("year").field("paper_count");
  for (int j = 0; j < ctx.model.topic_count(); ++j) {
    csv.field("topic_" + std::to_string(j));
  }
  csv.end_row();
  for (const std::string& venue : ctx.venues) {
    const TopicTrajectory trajectory =
        venue_trajectory(ctx.model, ctx.corpus, venue, ctx.config.min_papers);
    for (const TrajectoryPoint& point : trajectory.points) {
      csv.field(venue)
          .field(static_cast<std::int64_t>(point.year))
          .field(point.paper_count);
      for (Eigen::Index j = 0; j < point.centroid.size(); ++j) {
        csv.field(point.centroid(j));
      }
      csv.end_row();
    }
  }
}

void analyze_trajectories(const AnalyzeContext& ctx) {
  write_trajectories_csv(ctx);
  for (const std::string& venue : ctx.venues) {
    const TopicTrajectory trajectory =
        venue_trajectory(ctx.model, ctx.corpus, venue, ctx.config.min_papers);
    if (trajectory.points.empty()) {
      continue;  // below min_papers everywhere, like DMKD in the heatmap case
    }
    const auto selected = relevant_topics(trajectory, 2,
                                          RelevanceMeasure::mean);
    const auto projected =
        project_trajectory(trajectory, selected[0], selected[1]);

    const std::string& stem = ctx.file_names.at(venue);
    CsvWriter csv(ctx.config.out / ("trajectory_" + stem + ".csv"));
    csv.field("year")
        .field("topic_" + std::to_string(selected[0]))
        .field("topic_" + std::to_string(selected[1]));
    csv.end_row();
    std::vector<int> years;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const ProjectedPoint& point : projected) {
      csv.field(static_cast<std::int64_t>(point.year))
          .field(point.x)
          .field(point.y);
      csv.end_row();
      years.push_back(point.year);
      xs.push_back(point.x);
      ys.push_back(point.y);
    }
    svg::write_trajectory_path(
        ctx.config.out / ("trajectory_" + stem + ".svg"), years, xs, ys,
        ctx.labels[static_cast<std::size_t>(selected[0])],
        ctx.labels[static_cast<std::size_t>(selected[1])],
        "Trajectory of " + venue);
  }
}

void analyze_heatmaps(const AnalyzeContext& ctx) {
  write_trajectories_csv(ctx);
  for (const std::string& venue : ctx.venues) {
    const TopicTrajectory trajectory =
        venue_trajectory(ctx.model, ctx.corpus, venue, ctx.config.min_papers);
    if (trajectory.points.empty()) {
      continue;
    }
    Eigen::MatrixXd values(static_cast<Eigen::Index>(trajectory.points.size()),
                           ctx.model.topic_count());
    std::vector<std::string> years;
    for (std::size_t r = 0; r < trajectory.points.size(); ++r) {
      values.row(static_cast<Eigen::Index>(r)) =
          trajectory.points[r].centroid.transpose();
      years.push_back(std::to_string(trajectory.points[r].year));
    }
    svg::write_heatmap(
        ctx.config.out / ("heatmap_" + ctx.file_names.at(venue) + ".svg"),
        values, years, ctx.labels, "Trajectory of " + venue);
  }
}

void analyze_diversity(const AnalyzeContext& ctx) {
  const std::unordered_set<std::string> selected(ctx.venues.begin(),
                                                 ctx.venues.end());
  {
    CsvWriter csv(ctx.config.out / "diversity.csv");
    csv.field("venue").field("ens");
    csv.end_row();
    for (const DiversityRow& row :
         venue_diversity_ranking(ctx.model, ctx.corpus)) {
      if (selected.count(row.venue)) {
        csv.field(row.venue).field(row.effective_species);
        csv.end_row();
      }
    }
  }

  const DiversityGrid grid =
      diversity_over_time(ctx.model, ctx.corpus, ctx.config.min_papers);
  {
    CsvWriter csv(ctx.config.out / "diversity_grid.csv");
    csv.field("venue").field("year").field("ens");
    csv.end_row();
    for (std::size_t v = 0; v < grid.venues.size(); ++v) {
      if (!selected.count(grid.venues[v])) {
        continue;
      }
      for (std::size_t y = 0; y < grid.years.size(); ++y) {
        csv.field(grid.venues[v])
            .field(static_cast<std::int64_t>(grid.years[y]));
        if (grid.cells[v][y]) {
          csv.field(*grid.cells[v][y]);
        } else {
          csv.field("missing");
        }
        csv.end_row();
      }
    }
  }

  std::vector<std::string> row_labels;
  std::vector<std::size_t> kept_rows;
  for (std::size_t v = 0; v < grid.venues.size(); ++v) {
    if (selected.count(grid.venues[v])) {
      row_labels.push_back(grid.venues[v]);
      kept_rows.push_back(v);
    }
  }
  Eigen::MatrixXd values(static_cast<Eigen::Index>(kept_rows.size()) + 1,
                         static_cast<Eigen::Index>(grid.years.size()));
  const double nan = std::nan("");
  for (std::size_t r = 0; r < kept_rows.size(); ++r) {
    for (std::size_t y = 0; y < grid.years.size(); ++y) {
      const auto& cell = grid.cells[kept_rows[r]][y];
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(y)) =
          cell ? *cell : nan;
    }
  }
  for (std::size_t y = 0; y < grid.years.size(); ++y) {
    values(values.rows() - 1, static_cast<Eigen::Index>(y)) =
        grid.average_row[y] ? *grid.average_row[y] : nan;
  }
  row_labels.push_back("(average)");
  std::vector<std::string> year_labels;
  for (int year : grid.years) {
    year_labels.push_back(std::to_string(year));
  }
  svg::write_heatmap(ctx.config.out / "diversity_grid.svg", values, row_labels,
                     year_labels, "Topic diversity over time");
}

void analyze_density(const AnalyzeContext& ctx) {
  for (const std::string& venue : ctx.venues) {
    std::vector<std::string> ids;
    for (const std::string& doc_id : ctx.model.doc_ids) {
      const PublicationRecord* record = ctx.corpus.find(doc_id);
      if (record != nullptr && record->venue == venue) {
        ids.push_back(doc_id);
      }
    }
    if (ids.size() < static_cast<std::size_t>(
                         std::max(ctx.config.kde_folds, 2))) {
      std::cerr << "density: skipping venue '" << venue
                << "' with only " << ids.size() << " embedded papers\n";
      continue;
    }
    const std::uint64_t seed = venue_seed(ctx.config, venue);
    ids = sample_papers(ids, 1000, seed);

    std::unordered_map<std::string, Eigen::Index> column_of;
    for (std::size_t col = 0; col < ctx.model.doc_ids.size(); ++col) {
      column_of.emplace(ctx.model.doc_ids[col],
                        static_cast<Eigen::Index>(col));
    }
    std::vector<Eigen::VectorXd> embeddings;
    embeddings.reserve(ids.size());
    for (const std::string& doc_id : ids) {
      embeddings.push_back(ctx.model.H.col(column_of.at(doc_id)));
    }

    MdsOptions options;
    options.n_init = ctx.config.mds_n_init;
    options.max_iterations = ctx.config.mds_max_iter;
    options.tolerance = ctx.config.mds_tol;
    const auto embedded =
        mds(pairwise_distances(embeddings), seed + 1, options);

    const std::vector<double> grid_spec =
        ctx.config.kde_grid.empty()
            ? default_bandwidth_grid<double>(embedded.points)
            : ctx.config.kde_grid;
    const auto fit =
        kde_fit<double>(embedded.points, grid_spec, ctx.config.kde_folds,
                        seed + 2);

    const double h = fit.model.bandwidth;
    const double x_min = embedded.points.col(0).minCoeff() - 3 * h;
    const double x_max = embedded.points.col(0).maxCoeff() + 3 * h;
    const double y_min = embedded.points.col(1).minCoeff() - 3 * h;
    const double y_max = embedded.points.col(1).maxCoeff() + 3 * h;
    const auto density =
        kde_density_grid(fit.model, x_min, x_max, y_min, y_max, 80);

    const std::string& stem = ctx.file_names.at(venue);
    {
      CsvWriter csv(ctx.config.out / ("density_" + stem + ".csv"));
      csv.field("x").field("y").field("density");
      csv.end_row();
      for (Eigen::Index iy = 0; iy < density.ys.size(); ++iy) {
        for (Eigen::Index ix = 0; ix < density.xs.size(); ++ix) {
          csv.field(density.xs(ix))
              .field(density.ys(iy))
              .field(density.values(iy, ix));
          csv.end_row();
        }
      }
    }
    std::vector<std::pair<double, double>> samples;
    {
      CsvWriter csv(ctx.config.out / ("density_points_" + stem + ".csv"));
      csv.field("doc_id").field("x").field("y");
      csv.end_row();
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        csv.field(ids[i])
            .field(embedded.points(row, 0))
            .field(embedded.points(row, 1));
        csv.end_row();
        samples.emplace_back(embedded.points(row, 0),
                             embedded.points(row, 1));
      }
    }
    svg::write_density_map(ctx.config.out / ("density_" + stem + ".svg"),
                           density.xs, density.ys, density.values, samples,
                           "Topic density of " + venue + " (bandwidth " +
                               format_double(h) + ")");
  }
}

}  // namespace

void run_analyze(const RunConfig& config,
                 const std::vector<std::string>& analyses) {
  std::vector<std::string> requested =
      analyses.empty() ? known_analyses() : analyses;
  for (const std::string& name : requested) {
    if (std::find(known_analyses().begin(), known_analyses().end(), name) ==
        known_analyses().end()) {
      throw SelectorError("unknown analysis: '" + name + "'");
    }
  }

  const TopicModel model = load_model(config.out / "model.json");
  const PublicationCorpus corpus = load_corpus(corpus_path(config));

  AnalyzeContext ctx{config, model, corpus, {}, {}, {}};
  if (config.venues.empty()) {
    ctx.venues = corpus.venues();
  } else {
    for (const std::string& venue : config.venues) {
      if (!corpus.has_venue(venue)) {
        throw SelectorError("unknown venue: '" + venue + "'");
      }
    }
    ctx.venues = config.venues;
    std::sort(ctx.venues.begin(), ctx.venues.end());
    ctx.venues.erase(std::unique(ctx.venues.begin(), ctx.venues.end()),
                     ctx.venues.end());
  }
  ctx.file_names = venue_file_names(ctx.venues);
  ctx.labels = topic_labels(model);

  OutputLock lock(config.out);
  for (const std::string& name : known_analyses()) {
    if (std::find(requested.begin(), requested.end(), name) ==
        requested.end()) {
      continue;
    }
    if (name == "topics") {
      analyze_topics(ctx);
    } else if (name == "similarities") {
      analyze_similarities(ctx);
    } else if (name == "importances") {
      analyze_importances(ctx);
    } else if (name == "map") {
      analyze_map(ctx);
    } else if (name == "trajectories") {
      analyze_trajectories(ctx);
    } else if (name == "heatmaps") {
      analyze_heatmaps(ctx);
    } else if (name == "diversity") {
      analyze_diversity(ctx);
    } else if (name == "density") {
      analyze_density(ctx);
    }
    std::cout << "analyze: " << name << " done\n";
  }
}

}  // namespace topics
