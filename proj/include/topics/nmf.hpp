#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "topics/factorization.hpp"
#include "topics/text.hpp"

namespace topics {

// Finalized factor pair: W columns are topic vectors, H columns document
// embeddings, both on the unit simplex.
struct TopicModel {
  Eigen::MatrixXd W;  // n x t
  Eigen::MatrixXd H;  // t x d
  std::vector<std::string> terms;    // size n, aligned with W rows
  std::vector<std::string> doc_ids;  // size d, aligned with H columns
  std::uint64_t seed = 0;
  int iterations = 0;

  Eigen::Index topic_count() const { return W.cols(); }
  Eigen::Index term_count() const { return W.rows(); }
  Eigen::Index document_count() const { return H.cols(); }
};

// Seeded multiplicative-update factorization of the tf-idf matrix followed by
// finalize_factors. Identical inputs and seed give bit-identical models.
std::pair<TopicModel, FitTrace<double>> factorize(
    const TermDocumentMatrix& matrix, const Vocabulary& vocab, int topic_count,
    std::uint64_t seed, const FactorizationOptions& options = {});

// k terms with the largest weight in the topic column, descending, ties
// broken lexicographically.
std::vector<std::pair<std::string, double>> top_terms(const TopicModel& model,
                                                      int topic, int k = 10);

// Simplex embedding of a held-out document given as a column over the model
// vocabulary.
Eigen::VectorXd embed_document(const TopicModel& model,
                               const Eigen::SparseVector<double>& column,
                               int max_iterations = 400,
                               double relative_tolerance = 1e-9);

// JSON persistence; weights carry 17 significant digits so that a reloaded
// model is bit-identical.
void save_model(const std::filesystem::path& path, const TopicModel& model);
TopicModel load_model(const std::filesystem::path& path);

}  // namespace topics
