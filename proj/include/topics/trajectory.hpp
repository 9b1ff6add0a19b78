#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "topics/corpus.hpp"
#include "topics/nmf.hpp"
#include "topics/simplex.hpp"

namespace topics {

struct VenueEmbedding {
  std::string venue;
  Eigen::VectorXd centroid;  // simplex vector of length t
  std::int64_t paper_count = 0;
  std::optional<int> year;  // absent for the all-years embedding
};

struct TrajectoryPoint {
  int year = 0;
  Eigen::VectorXd centroid;
  std::int64_t paper_count = 0;
};

struct TopicTrajectory {
  std::string venue;
  std::vector<TrajectoryPoint> points;  // strictly increasing year
};

// Mean of all embedded papers of the venue across years, so years with more
// papers weigh more.
VenueEmbedding venue_embedding(const TopicModel& model,
                               const PublicationCorpus& corpus,
                               std::string_view venue);

// One point per year with at least min_papers embedded papers, ascending by
// year. The trajectory may be empty. Throws SelectorError for unknown venues.
TopicTrajectory venue_trajectory(const TopicModel& model,
                                 const PublicationCorpus& corpus,
                                 std::string_view venue, int min_papers = 10);

enum class ImportanceMode { normalized, absolute };

struct YearImportance {
  int year = 0;
  Eigen::VectorXd weights;  // normalized: simplex; absolute: sums to count
  std::int64_t paper_count = 0;
};

std::vector<YearImportance> yearly_topic_importances(
    const TopicModel& model, const PublicationCorpus& corpus,
    ImportanceMode mode);

// Cosine similarities between topic vectors; symmetric, unit diagonal,
// entries in [0, 1].
Eigen::MatrixXd topic_similarity_matrix(const TopicModel& model);

// exp of the Shannon entropy of the centroid.
double venue_diversity(const VenueEmbedding& embedding);

struct DiversityRow {
  std::string venue;
  double effective_species = 0.0;
};

// All-years diversity per venue, sorted descending.
std::vector<DiversityRow> venue_diversity_ranking(
    const TopicModel& model, const PublicationCorpus& corpus);

struct DiversityGrid {
  std::vector<std::string> venues;  // sorted
  std::vector<int> years;           // sorted
  // cells[v][y]: ENS where at least min_papers papers exist, else missing
  std::vector<std::vector<std::optional<double>>> cells;
  std::vector<std::optional<double>> average_row;  // mean over present cells
};

DiversityGrid diversity_over_time(const TopicModel& model,
                                  const PublicationCorpus& corpus,
                                  int min_papers = 10);

enum class RelevanceMeasure { mean, max, span };

// Top-k topic indices by the chosen relevance score, descending, ties to the
// lower index.
std::vector<int> relevant_topics(const TopicTrajectory& trajectory, int k = 2,
                                 RelevanceMeasure measure =
                                     RelevanceMeasure::mean);

struct ProjectedPoint {
  int year = 0;
  double x = 0.0;
  double y = 0.0;
};

std::vector<ProjectedPoint> project_trajectory(const TopicTrajectory& trajectory,
                                               int topic_i, int topic_j);

}  // namespace topics
