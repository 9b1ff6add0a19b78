#include "topics/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "topics/errors.hpp"
#include "topics/random.hpp"

namespace topics {

bool WindowIndex::contains(std::string_view term) const {
  return postings_.count(std::string(term)) > 0;
}

const std::vector<std::uint32_t>& WindowIndex::windows(
    std::string_view term) const {
  auto it = postings_.find(std::string(term));
  if (it == postings_.end()) {
    throw InputError("term not indexed: '" + std::string(term) + "'");
  }
  return it->second;
}

double WindowIndex::probability(std::string_view term) const {
  return static_cast<double>(windows(term).size()) /
         static_cast<double>(total_windows_);
}

double WindowIndex::joint_probability(std::string_view a,
                                      std::string_view b) const {
  const auto& wa = windows(a);
  const auto& wb = windows(b);
  std::size_t joint = 0;
  auto ia = wa.begin();
  auto ib = wb.begin();
  while (ia != wa.end() && ib != wb.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++joint;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(joint) / static_cast<double>(total_windows_);
}

WindowIndex build_window_index(const std::vector<TokenStream>& docs,
                               int window_size) {
  if (window_size < 1) {
    throw InputError("window size must be >= 1");
  }

  WindowIndex index;
  index.window_size_ = window_size;

  std::uint64_t fingerprint = 0xcbf29ce484222325ULL;
  std::uint32_t window_id = 0;
  std::unordered_map<std::string, int> in_window;  // term -> count in window

  for (const TokenStream& tokens : docs) {
    for (const std::string& token : tokens) {
      fingerprint ^= fnv1a64(token);
      fingerprint *= 0x100000001b3ULL;
    }
    const auto length = static_cast<std::int64_t>(tokens.size());
    const std::int64_t positions =
        length > window_size ? length - window_size + 1 : 1;

    in_window.clear();
    auto enter = [&](const std::string& term) {
      if (++in_window[term] == 1) {
        auto& ids = index.postings_[term];
        if (ids.empty() || ids.back() != window_id) {
          ids.push_back(window_id);
        }
      }
    };
    auto record_window = [&] {
      // re-list terms still present after the slide
      for (const auto& [term, count] : in_window) {
        if (count > 0) {
          auto& ids = index.postings_[term];
          if (ids.back() != window_id) {
            ids.push_back(window_id);
          }
        }
      }
    };

    const std::int64_t first_span = std::min<std::int64_t>(length, window_size);
    for (std::int64_t i = 0; i < first_span; ++i) {
      enter(tokens[i]);
    }
    ++window_id;
    for (std::int64_t start = 1; start < positions; ++start) {
      --in_window[tokens[start - 1]];
      enter(tokens[start + window_size - 1]);
      record_window();
      ++window_id;
    }
  }

  index.total_windows_ = window_id;
  index.fingerprint_ = fingerprint;
  for (auto& [term, ids] : index.postings_) {
    (void)term;
    ids.shrink_to_fit();
  }
  return index;
}

double npmi(std::string_view w, std::string_view v, const WindowIndex& index,
            double eps) {
  if (index.total_windows() == 0) {
    throw InputError("window index is empty");
  }
  const double joint = index.joint_probability(w, v);
  const double pw = index.probability(w);
  const double pv = index.probability(v);
  const double numerator = std::log((joint + eps) / (pw * pv));
  const double denominator = -std::log(joint + eps);
  return numerator / denominator;
}

double signed_power(double value, double gamma) {
  if (gamma == 1.0) {
    return value;
  }
  const double magnitude = std::pow(std::abs(value), gamma);
  return value < 0.0 ? -magnitude : magnitude;
}

Eigen::VectorXd context_vector(std::string_view word,
                               const std::vector<std::string>& top_terms,
                               const WindowIndex& index, double gamma) {
  Eigen::VectorXd components(static_cast<Eigen::Index>(top_terms.size()));
  for (std::size_t i = 0; i < top_terms.size(); ++i) {
    components(static_cast<Eigen::Index>(i)) =
        signed_power(npmi(word, top_terms[i], index), gamma);
  }
  return components;
}

TopicCv topic_coherence_cv(const std::vector<std::string>& top_terms,
                           const WindowIndex& index, int n, double gamma) {
  if (n < 1) {
    throw InputError("topic_coherence_cv: n must be >= 1");
  }
  const auto used = std::min<std::size_t>(top_terms.size(),
                                          static_cast<std::size_t>(n));
  if (used == 0) {
    throw InputError("topic_coherence_cv: no terms given");
  }
  const std::vector<std::string> terms(top_terms.begin(),
                                       top_terms.begin() + used);

  std::vector<Eigen::VectorXd> vectors;
  vectors.reserve(used);
  for (const std::string& term : terms) {
    vectors.push_back(context_vector(term, terms, index, gamma));
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(used));
  for (const Eigen::VectorXd& v : vectors) {
    sum += v;
  }

  TopicCv result;
  result.terms_used = static_cast<int>(used);
  result.truncated = used < static_cast<std::size_t>(n);
  const double sum_norm = sum.norm();
  double total = 0.0;
  for (const Eigen::VectorXd& v : vectors) {
    const double norm = v.norm();
    if (norm == 0.0 || sum_norm == 0.0) {
      ++result.zero_vectors;
      continue;  // contributes similarity 0
    }
    total += v.dot(sum) / (norm * sum_norm);
  }
  result.value = total / static_cast<double>(used);
  return result;
}

CoherenceResult model_coherence(const TopicModel& model,
                                const WindowIndex& index, int n, double gamma) {
  CoherenceResult result;
  result.params.top_terms = n;
  result.params.window_size = index.window_size();
  result.params.gamma = gamma;

  const auto t = static_cast<int>(model.topic_count());
  double total = 0.0;
  for (int topic = 0; topic < t; ++topic) {
    auto ranked = top_terms(
        model, topic,
        std::min<int>(n, static_cast<int>(model.term_count())));
    std::vector<std::string> terms;
    terms.reserve(ranked.size());
    for (auto& [term, weight] : ranked) {
      if (weight > 0.0) {
        terms.push_back(std::move(term));
      }
    }
    TopicCv cv = topic_coherence_cv(terms, index, n, gamma);
    total += cv.value;
    result.per_topic.push_back(std::move(cv));
  }
  result.model_coherence = total / static_cast<double>(t);
  return result;
}

SweepResult select_topic_number(const TermDocumentMatrix& matrix,
                                const Vocabulary& vocab,
                                const WindowIndex& index,
                                const std::vector<int>& topic_counts,
                                int seeds_per_t, std::uint64_t base_seed,
                                const FactorizationOptions& options,
                                const CvParams& params) {
  if (topic_counts.empty()) {
    throw InputError("select_topic_number: no candidate topic counts");
  }
  if (seeds_per_t < 1) {
    throw InputError("select_topic_number: seeds_per_t must be >= 1");
  }

  const double v_norm = frobenius_norm(matrix.weights);
  SweepResult result;
  double best_overall = -std::numeric_limits<double>::infinity();

  for (int t : topic_counts) {
    SweepCurvePoint point;
    point.topic_count = t;
    point.best_coherence = -std::numeric_limits<double>::infinity();
    double error_sum = 0.0;
    int succeeded = 0;

    for (int offset = 0; offset < seeds_per_t; ++offset) {
      const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(offset);
      SweepEntry entry;
      entry.topic_count = t;
      entry.seed = seed;
      try {
        auto [model, trace] = factorize(matrix, vocab, t, seed, options);
        entry.coherence =
            model_coherence(model, index, params.top_terms, params.gamma)
                .model_coherence;
        entry.reconstruction_error = trace.errors.back();
        entry.relative_error =
            v_norm > 0.0 ? entry.reconstruction_error / v_norm : 0.0;
        if (entry.coherence > point.best_coherence) {
          point.best_coherence = entry.coherence;
        }
        const bool wins =
            entry.coherence > best_overall ||
            (entry.coherence == best_overall &&
             result.best_model.has_value() && t < result.best_topic_count);
        if (wins) {
          best_overall = entry.coherence;
          result.best_topic_count = t;
          result.best_seed = seed;
          result.best_model = std::move(model);
        }
        error_sum += entry.reconstruction_error;
        ++succeeded;
      } catch (const Error&) {
        entry.failed = true;
      }
      result.entries.push_back(entry);
    }

    if (succeeded > 0) {
      point.mean_error = error_sum / succeeded;
      point.mean_relative_error = v_norm > 0.0 ? point.mean_error / v_norm : 0.0;
      result.curve.push_back(point);
    }
  }

  if (!result.best_model.has_value()) {
    throw InputError("select_topic_number: every candidate fit failed");
  }
  return result;
}

}  // namespace topics
