#include "topics/trajectory.hpp"

#include <algorithm>
#include <map>

#include "topics/errors.hpp"

namespace topics {

namespace {

// Columns of H grouped by (venue, year) via the record metadata. Documents
// dropped from the matrix have no column and are skipped.
std::map<std::pair<std::string, int>, std::vector<Eigen::Index>> group_columns(
    const TopicModel& model, const PublicationCorpus& corpus) {
  std::map<std::pair<std::string, int>, std::vector<Eigen::Index>> groups;
  for (std::size_t col = 0; col < model.doc_ids.size(); ++col) {
    const PublicationRecord* record = corpus.find(model.doc_ids[col]);
    if (record == nullptr) {
      throw InputError("model document '" + model.doc_ids[col] +
                       "' is not in the corpus");
    }
    groups[{record->venue, record->year}].push_back(
        static_cast<Eigen::Index>(col));
  }
  return groups;
}

Eigen::VectorXd column_mean(const TopicModel& model,
                            const std::vector<Eigen::Index>& columns) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(model.topic_count());
  for (Eigen::Index col : columns) {
    sum += model.H.col(col);
  }
  return sum / static_cast<double>(columns.size());
}

void require_known_venue(const PublicationCorpus& corpus,
                         std::string_view venue) {
  if (!corpus.has_venue(venue)) {
    throw SelectorError("unknown venue: '" + std::string(venue) + "'");
  }
}

}  // namespace

VenueEmbedding venue_embedding(const TopicModel& model,
                               const PublicationCorpus& corpus,
                               std::string_view venue) {
  require_known_venue(corpus, venue);
  std::vector<Eigen::Index> columns;
  for (std::size_t col = 0; col < model.doc_ids.size(); ++col) {
    const PublicationRecord* record = corpus.find(model.doc_ids[col]);
    if (record != nullptr && record->venue == venue) {
      columns.push_back(static_cast<Eigen::Index>(col));
    }
  }
  if (columns.empty()) {
    throw InputError("venue '" + std::string(venue) +
                     "' has no embedded papers");
  }
  VenueEmbedding embedding;
  embedding.venue = std::string(venue);
  embedding.centroid = column_mean(model, columns);
  embedding.paper_count = static_cast<std::int64_t>(columns.size());
  return embedding;
}

TopicTrajectory venue_trajectory(const TopicModel& model,
                                 const PublicationCorpus& corpus,
                                 std::string_view venue, int min_papers) {
  require_known_venue(corpus, venue);
  TopicTrajectory trajectory;
  trajectory.venue = std::string(venue);
  for (const auto& [key, columns] : group_columns(model, corpus)) {
    if (key.first != venue ||
        columns.size() < static_cast<std::size_t>(min_papers)) {
      continue;
    }
    trajectory.points.push_back({key.second, column_mean(model, columns),
                                 static_cast<std::int64_t>(columns.size())});
  }
  // group_columns is keyed by (venue, year), so points are already ascending
  return trajectory;
}

std::vector<YearImportance> yearly_topic_importances(
    const TopicModel& model, const PublicationCorpus& corpus,
    ImportanceMode mode) {
  std::map<int, std::pair<Eigen::VectorXd, std::int64_t>> by_year;
  for (const auto& [key, columns] : group_columns(model, corpus)) {
    auto& [sum, count] = by_year
                             .try_emplace(key.second,
                                          Eigen::VectorXd::Zero(
                                              model.topic_count()),
                                          0)
                             .first->second;
    for (Eigen::Index col : columns) {
      sum += model.H.col(col);
    }
    count += static_cast<std::int64_t>(columns.size());
  }

  std::vector<YearImportance> rows;
  rows.reserve(by_year.size());
  for (auto& [year, data] : by_year) {
    YearImportance row;
    row.year = year;
    row.paper_count = data.second;
    row.weights = mode == ImportanceMode::normalized
                      ? (data.first / static_cast<double>(data.second)).eval()
                      : std::move(data.first);
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd topic_similarity_matrix(const TopicModel& model) {
  const Eigen::Index t = model.topic_count();
  Eigen::VectorXd norms(t);
  for (Eigen::Index j = 0; j < t; ++j) {
    norms(j) = model.W.col(j).norm();
    if (norms(j) == 0.0) {
      throw InputError("topic " + std::to_string(j) + " has a zero vector");
    }
  }
  Eigen::MatrixXd similarity(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    similarity(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < t; ++j) {
      const double value =
          model.W.col(i).dot(model.W.col(j)) / (norms(i) * norms(j));
      similarity(i, j) = value;
      similarity(j, i) = value;
    }
  }
  return similarity;
}

double venue_diversity(const VenueEmbedding& embedding) {
  return effective_species(embedding.centroid);
}

std::vector<DiversityRow> venue_diversity_ranking(
    const TopicModel& model, const PublicationCorpus& corpus) {
  std::vector<DiversityRow> rows;
  for (const std::string& venue : corpus.venues()) {
    try {
      rows.push_back({venue, venue_diversity(venue_embedding(model, corpus,
                                                             venue))});
    } catch (const InputError&) {
      // venue with no embedded papers
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const DiversityRow& a, const DiversityRow& b) {
                     return a.effective_species > b.effective_species;
                   });
  return rows;
}

DiversityGrid diversity_over_time(const TopicModel& model,
                                  const PublicationCorpus& corpus,
                                  int min_papers) {
  DiversityGrid grid;
  grid.venues = corpus.venues();
  grid.years = corpus.years();

  std::map<int, std::size_t> year_position;
  for (std::size_t i = 0; i < grid.years.size(); ++i) {
    year_position[grid.years[i]] = i;
  }
  grid.cells.assign(grid.venues.size(),
                    std::vector<std::optional<double>>(grid.years.size()));

  const auto groups = group_columns(model, corpus);
  for (std::size_t v = 0; v < grid.venues.size(); ++v) {
    for (const auto& [key, columns] : groups) {
      if (key.first != grid.venues[v] ||
          columns.size() < static_cast<std::size_t>(min_papers)) {
        continue;
      }
      const Eigen::VectorXd mean = column_mean(model, columns);
      grid.cells[v][year_position.at(key.second)] = effective_species(mean);
    }
  }

  grid.average_row.assign(grid.years.size(), std::nullopt);
  for (std::size_t y = 0; y < grid.years.size(); ++y) {
    double sum = 0.0;
    int present = 0;
    for (std::size_t v = 0; v < grid.venues.size(); ++v) {
      if (grid.cells[v][y]) {
        sum += *grid.cells[v][y];
        ++present;
      }
    }
    if (present > 0) {
      grid.average_row[y] = sum / present;
    }
  }
  return grid;
}

std::vector<int> relevant_topics(const TopicTrajectory& trajectory, int k,
                                 RelevanceMeasure measure) {
  if (trajectory.points.empty()) {
    throw InputError("relevant_topics: empty trajectory");
  }
  const Eigen::Index t = trajectory.points.front().centroid.size();
  if (k < 0 || k > t) {
    throw SelectorError("relevant_topics: k out of range");
  }

  Eigen::VectorXd score(t);
  for (Eigen::Index topic = 0; topic < t; ++topic) {
    double mean = 0.0;
    double maximum = -1.0;
    double minimum = 2.0;
    for (const TrajectoryPoint& point : trajectory.points) {
      const double w = point.centroid(topic);
      mean += w;
      maximum = std::max(maximum, w);
      minimum = std::min(minimum, w);
    }
    switch (measure) {
      case RelevanceMeasure::mean:
        score(topic) = mean / static_cast<double>(trajectory.points.size());
        break;
      case RelevanceMeasure::max:
        score(topic) = maximum;
        break;
      case RelevanceMeasure::span:
        score(topic) = maximum - minimum;
        break;
    }
  }

  std::vector<int> order(static_cast<std::size_t>(t));
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = static_cast<int>(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return score(a) > score(b);  // stable sort keeps lower index on ties
  });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

std::vector<ProjectedPoint> project_trajectory(const TopicTrajectory& trajectory,
                                               int topic_i, int topic_j) {
  if (trajectory.points.empty()) {
    return {};
  }
  const Eigen::Index t = trajectory.points.front().centroid.size();
  if (topic_i < 0 || topic_j < 0 || topic_i >= t || topic_j >= t ||
      topic_i == topic_j) {
    throw SelectorError("project_trajectory: invalid topic pair");
  }
  std::vector<ProjectedPoint> points;
  points.reserve(trajectory.points.size());
  for (const TrajectoryPoint& point : trajectory.points) {
    points.push_back(
        {point.year, point.centroid(topic_i), point.centroid(topic_j)});
  }
  return points;
}

}  // namespace topics
