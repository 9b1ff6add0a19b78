#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "topics/nmf.hpp"
#include "topics/text.hpp"

namespace topics {

// Pseudo-document occurrence statistics: a sliding window of the given size
// and step 1 per document, or the whole document when it is no longer than
// the window.
class WindowIndex {
 public:
  WindowIndex() = default;

  std::uint32_t total_windows() const { return total_windows_; }
  int window_size() const { return window_size_; }
  std::uint64_t corpus_fingerprint() const { return fingerprint_; }

  bool contains(std::string_view term) const;
  // Sorted window ids; throws InputError for unindexed terms.
  const std::vector<std::uint32_t>& windows(std::string_view term) const;

  double probability(std::string_view term) const;
  double joint_probability(std::string_view a, std::string_view b) const;

  friend WindowIndex build_window_index(const std::vector<TokenStream>& docs,
                                        int window_size);

 private:
  std::uint32_t total_windows_ = 0;
  int window_size_ = 0;
  std::uint64_t fingerprint_ = 0;
  std::unordered_map<std::string, std::vector<std::uint32_t>> postings_;
};

WindowIndex build_window_index(const std::vector<TokenStream>& docs,
                               int window_size = 110);

// log((p(w,v)+eps) / (p(w)p(v))) / (-log(p(w,v)+eps)), natural logarithm.
double npmi(std::string_view w, std::string_view v, const WindowIndex& index,
            double eps = 1e-12);

// sign(x) * |x|^gamma, so gamma powers keep the NPMI sign.
double signed_power(double value, double gamma);

// Component i is NPMI(word, top_terms[i])^gamma.
Eigen::VectorXd context_vector(std::string_view word,
                               const std::vector<std::string>& top_terms,
                               const WindowIndex& index, double gamma = 1.0);

struct TopicCv {
  double value = 0.0;
  int terms_used = 0;
  bool truncated = false;     // fewer than the requested n terms available
  int zero_vectors = 0;       // context vectors that contributed similarity 0
};

// Mean cosine similarity between each of the first n context vectors and
// their sum.
TopicCv topic_coherence_cv(const std::vector<std::string>& top_terms,
                           const WindowIndex& index, int n = 20,
                           double gamma = 1.0);

struct CvParams {
  int top_terms = 20;
  int window_size = 110;
  double gamma = 1.0;
  double eps = 1e-12;
};

struct CoherenceResult {
  std::vector<TopicCv> per_topic;
  double model_coherence = 0.0;  // arithmetic mean of the per-topic values
  CvParams params;
};

CoherenceResult model_coherence(const TopicModel& model,
                                const WindowIndex& index, int n = 20,
                                double gamma = 1.0);

struct SweepEntry {
  int topic_count = 0;
  std::uint64_t seed = 0;
  double coherence = 0.0;
  double reconstruction_error = 0.0;
  double relative_error = 0.0;
  bool failed = false;
};

struct SweepCurvePoint {
  int topic_count = 0;
  double best_coherence = 0.0;
  double mean_error = 0.0;
  double mean_relative_error = 0.0;
};

struct SweepResult {
  int best_topic_count = 0;
  std::uint64_t best_seed = 0;
  std::vector<SweepEntry> entries;     // one per (t, seed)
  std::vector<SweepCurvePoint> curve;  // one per t
  std::optional<TopicModel> best_model;
};

// Trains seeds_per_t models per candidate t with seeds base_seed ..
// base_seed+seeds_per_t-1, scores each by C_V, keeps the per-t maximum and
// returns the argmax t (ties to the smaller t). Individual training failures
// are recorded and skipped; throws InputError if every fit fails.
SweepResult select_topic_number(const TermDocumentMatrix& matrix,
                                const Vocabulary& vocab,
                                const WindowIndex& index,
                                const std::vector<int>& topic_counts,
                                int seeds_per_t, std::uint64_t base_seed,
                                const FactorizationOptions& options = {},
                                const CvParams& params = {});

}  // namespace topics
