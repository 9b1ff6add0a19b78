#include "topics/nmf.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "topics/errors.hpp"

namespace topics {

std::pair<TopicModel, FitTrace<double>> factorize(
    const TermDocumentMatrix& matrix, const Vocabulary& vocab, int topic_count,
    std::uint64_t seed, const FactorizationOptions& options) {
  if (static_cast<std::size_t>(matrix.term_count()) != vocab.size()) {
    throw InputError("matrix rows do not match the vocabulary size");
  }
  auto [factors, trace] =
      factorize_matrix<double>(matrix.weights, topic_count, seed, options);
  finalize_factors(factors);

  TopicModel model;
  model.W = std::move(factors.W);
  model.H = std::move(factors.H);
  model.terms = vocab.terms();
  model.doc_ids = matrix.doc_ids;
  model.seed = seed;
  model.iterations = trace.iterations;
  return {std::move(model), std::move(trace)};
}

std::vector<std::pair<std::string, double>> top_terms(const TopicModel& model,
                                                      int topic, int k) {
  if (topic < 0 || topic >= model.topic_count()) {
    throw SelectorError("topic index " + std::to_string(topic) +
                        " out of range [0, " +
                        std::to_string(model.topic_count()) + ")");
  }
  if (k < 0 || k > model.term_count()) {
    throw SelectorError("top_terms: k out of range");
  }

  std::vector<int> order(static_cast<std::size_t>(model.term_count()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = static_cast<int>(i);
  }
  const auto& column = model.W;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double wa = column(a, topic);
    const double wb = column(b, topic);
    if (wa != wb) {
      return wa > wb;
    }
    return model.terms[a] < model.terms[b];
  });

  std::vector<std::pair<std::string, double>> ranked;
  ranked.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    ranked.emplace_back(model.terms[order[i]], column(order[i], topic));
  }
  return ranked;
}

Eigen::VectorXd embed_document(const TopicModel& model,
                               const Eigen::SparseVector<double>& column,
                               int max_iterations, double relative_tolerance) {
  return embed_column<double>(model.W, column, max_iterations,
                              relative_tolerance);
}

namespace {

void append_number(std::string& out, double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  out += buffer;
}

void append_matrix_column_major(std::string& out, const Eigen::MatrixXd& m) {
  out += '[';
  bool first = true;
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (Eigen::Index row = 0; row < m.rows(); ++row) {
      if (!first) {
        out += ',';
      }
      first = false;
      append_number(out, m(row, col));
    }
  }
  out += ']';
}

void append_strings(std::string& out, const std::vector<std::string>& values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += nlohmann::json(values[i]).dump();
  }
  out += ']';
}

}  // namespace

void save_model(const std::filesystem::path& path, const TopicModel& model) {
  // Hand-rolled writer so the weight formatting (17 significant digits) and
  // key order are fixed.
  std::string out;
  out += "{\"t\":" + std::to_string(model.topic_count());
  out += ",\"n\":" + std::to_string(model.term_count());
  out += ",\"d\":" + std::to_string(model.document_count());
  out += ",\"seed\":" + std::to_string(model.seed);
  out += ",\"iterations\":" + std::to_string(model.iterations);
  out += ",\"terms\":";
  append_strings(out, model.terms);
  out += ",\"doc_ids\":";
  append_strings(out, model.doc_ids);
  out += ",\"W\":";
  append_matrix_column_major(out, model.W);
  out += ",\"H\":";
  append_matrix_column_major(out, model.H);
  out += "}\n";

  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw InputError("cannot write model file: " + path.string());
  }
  file << out;
}

namespace {

Eigen::MatrixXd matrix_from_column_major(const nlohmann::json& values,
                                         Eigen::Index rows,
                                         Eigen::Index cols) {
  if (!values.is_array() ||
      values.size() != static_cast<std::size_t>(rows * cols)) {
    throw InputError("model file: matrix size mismatch");
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index col = 0; col < cols; ++col) {
    for (Eigen::Index row = 0; row < rows; ++row) {
      m(row, col) = values[k++].get<double>();
    }
  }
  return m;
}

}  // namespace

TopicModel load_model(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) {
    throw MissingArtifactError("cannot open model file: " + path.string());
  }
  nlohmann::json object;
  try {
    file >> object;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("model file " + path.string() + ": " + e.what());
  }

  TopicModel model;
  try {
    const auto t = object.at("t").get<Eigen::Index>();
    const auto n = object.at("n").get<Eigen::Index>();
    const auto d = object.at("d").get<Eigen::Index>();
    model.seed = object.at("seed").get<std::uint64_t>();
    model.iterations = object.at("iterations").get<int>();
    model.terms = object.at("terms").get<std::vector<std::string>>();
    model.doc_ids = object.at("doc_ids").get<std::vector<std::string>>();
    model.W = matrix_from_column_major(object.at("W"), n, t);
    model.H = matrix_from_column_major(object.at("H"), t, d);
    if (model.terms.size() != static_cast<std::size_t>(n) ||
        model.doc_ids.size() != static_cast<std::size_t>(d)) {
      throw InputError("model file: terms/doc_ids size mismatch");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("model file " + path.string() + ": " + e.what());
  }
  return model;
}

}  // namespace topics
