#include "topics/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "topics/errors.hpp"

namespace topics {

namespace {

bool is_token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Token multisets per document, shared by the frequency-based operations.
std::vector<TokenStream> tokenized_abstracts(const PublicationCorpus& corpus,
                                             const StopwordSet& stopwords) {
  std::vector<TokenStream> streams;
  streams.reserve(corpus.size());
  for (const PublicationRecord& record : corpus.records()) {
    streams.push_back(tokenize(record.abstract_text, stopwords));
  }
  return streams;
}

}  // namespace

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open stopword list: " + path.string());
  }
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (!line.empty()) {
      words.insert(line);
    }
  }
  return words;
}

const StopwordSet& builtin_stopwords() {
  static const StopwordSet words = [] {
    static const char* kWords[] = {
#include "stopwords_data.inc"
    };
    return StopwordSet(std::begin(kWords), std::end(kWords));
  }();
  return words;
}

TokenStream tokenize(std::string_view text, const StopwordSet& stopwords) {
  TokenStream tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() > 1 && !stopwords.count(current)) {
      tokens.push_back(current);
    }
    current.clear();
  };
  for (char raw : text) {
    const char c = ascii_lower(raw);
    if (is_token_char(c)) {
      current.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> terms,
                       std::vector<std::int64_t> df,
                       std::vector<std::int64_t> cf)
    : terms_(std::move(terms)), df_(std::move(df)), cf_(std::move(cf)) {
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    index_.emplace(terms_[i], static_cast<int>(i));
  }
}

int Vocabulary::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  return it == index_.end() ? -1 : it->second;
}

Vocabulary build_vocabulary(const PublicationCorpus& corpus, int min_count,
                            const StopwordSet& stopwords) {
  if (min_count < 1) {
    throw InputError("min_count must be >= 1");
  }
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> stats;  // cf, df
  TokenStream seen;
  for (const PublicationRecord& record : corpus.records()) {
    TokenStream tokens = tokenize(record.abstract_text, stopwords);
    seen.clear();
    for (std::string& token : tokens) {
      auto& [cf, df] = stats[token];
      ++cf;
      if (std::find(seen.begin(), seen.end(), token) == seen.end()) {
        ++df;
        seen.push_back(std::move(token));
      }
    }
  }

  std::vector<std::string> terms;
  std::vector<std::int64_t> df;
  std::vector<std::int64_t> cf;
  for (const auto& [term, counts] : stats) {
    if (counts.first >= min_count) {
      terms.push_back(term);
      cf.push_back(counts.first);
      df.push_back(counts.second);
    }
  }
  if (terms.empty()) {
    throw InputError("no term reaches min_count " + std::to_string(min_count) +
                     "; the vocabulary would be empty");
  }
  return Vocabulary(std::move(terms), std::move(df), std::move(cf));
}

double tfidf_weight(std::int64_t tf, std::int64_t df, std::int64_t total_docs) {
  return static_cast<double>(tf) *
         std::log(static_cast<double>(total_docs) / static_cast<double>(df));
}

Eigen::SparseVector<double> tfidf_column(const TokenStream& tokens,
                                         const Vocabulary& vocab,
                                         std::int64_t total_docs) {
  std::map<int, std::int64_t> tf;
  for (const std::string& token : tokens) {
    const int index = vocab.index_of(token);
    if (index >= 0) {
      ++tf[index];
    }
  }
  Eigen::SparseVector<double> column(static_cast<Eigen::Index>(vocab.size()));
  double norm_squared = 0.0;
  for (const auto& [index, count] : tf) {
    const double weight =
        tfidf_weight(count, vocab.document_frequency(index), total_docs);
    if (weight > 0.0) {
      column.insertBack(index) = weight;
      norm_squared += weight * weight;
    }
  }
  if (norm_squared > 0.0) {
    column /= std::sqrt(norm_squared);
  }
  return column;
}

TermDocumentMatrix tfidf_matrix(const PublicationCorpus& corpus,
                                const Vocabulary& vocab) {
  const auto total_docs = static_cast<std::int64_t>(corpus.size());
  static const StopwordSet kNone;

  TermDocumentMatrix result;
  std::vector<Eigen::Triplet<double>> triplets;
  for (const PublicationRecord& record : corpus.records()) {
    // Stopwords never reach the vocabulary, so tokenizing without the
    // stopword list here yields the same counts as the vocabulary pass.
    const TokenStream tokens = tokenize(record.abstract_text, kNone);
    const Eigen::SparseVector<double> column =
        tfidf_column(tokens, vocab, total_docs);
    if (column.nonZeros() == 0) {
      result.dropped_doc_ids.push_back(record.id);
      continue;
    }
    const auto doc = static_cast<int>(result.doc_ids.size());
    for (Eigen::SparseVector<double>::InnerIterator it(column); it; ++it) {
      triplets.emplace_back(static_cast<int>(it.index()), doc, it.value());
    }
    result.doc_ids.push_back(record.id);
  }

  result.weights.resize(static_cast<Eigen::Index>(vocab.size()),
                        static_cast<Eigen::Index>(result.doc_ids.size()));
  result.weights.setFromTriplets(triplets.begin(), triplets.end());
  result.weights.makeCompressed();
  return result;
}

void write_matrix_coordinate(const std::filesystem::path& path,
                             const TermDocumentMatrix& matrix) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write matrix file: " + path.string());
  }
  out << matrix.term_count() << ' ' << matrix.document_count() << ' '
      << matrix.weights.nonZeros() << '\n';
  out.precision(17);
  for (int col = 0; col < matrix.weights.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix.weights, col); it;
         ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

LengthStats abstract_length_stats(const PublicationCorpus& corpus,
                                  const StopwordSet& stopwords,
                                  bool after_stopword_removal, int bin_width) {
  if (bin_width < 1) {
    throw InputError("bin_width must be >= 1");
  }
  static const StopwordSet kNone;
  const StopwordSet& effective = after_stopword_removal ? stopwords : kNone;

  std::vector<std::int64_t> lengths;
  lengths.reserve(corpus.size());
  for (const PublicationRecord& record : corpus.records()) {
    lengths.push_back(static_cast<std::int64_t>(
        tokenize(record.abstract_text, effective).size()));
  }

  LengthStats stats;
  stats.bin_width = bin_width;
  stats.documents = static_cast<std::int64_t>(lengths.size());
  if (lengths.empty()) {
    return stats;
  }

  double sum = 0.0;
  for (std::int64_t length : lengths) {
    const auto bin = static_cast<std::size_t>(length / bin_width);
    if (stats.histogram.size() <= bin) {
      stats.histogram.resize(bin + 1, 0);
    }
    ++stats.histogram[bin];
    sum += static_cast<double>(length);
  }
  stats.mean = sum / static_cast<double>(lengths.size());

  std::sort(lengths.begin(), lengths.end());
  const std::size_t mid = lengths.size() / 2;
  stats.median = lengths.size() % 2 == 1
                     ? static_cast<double>(lengths[mid])
                     : (static_cast<double>(lengths[mid - 1]) +
                        static_cast<double>(lengths[mid])) /
                           2.0;

  double variance = 0.0;
  for (std::int64_t length : lengths) {
    const double diff = static_cast<double>(length) - stats.mean;
    variance += diff * diff;
  }
  stats.stddev = std::sqrt(variance / static_cast<double>(lengths.size()));
  return stats;
}

std::vector<RankedTerm> term_frequency_ranking(const PublicationCorpus& corpus,
                                               const StopwordSet& stopwords,
                                               bool after_stopword_removal) {
  static const StopwordSet kNone;
  const StopwordSet& effective = after_stopword_removal ? stopwords : kNone;

  std::map<std::string, std::int64_t> counts;
  for (const TokenStream& stream : tokenized_abstracts(corpus, effective)) {
    for (const std::string& token : stream) {
      ++counts[token];
    }
  }

  std::vector<RankedTerm> ranking;
  ranking.reserve(counts.size());
  for (const auto& [term, frequency] : counts) {
    ranking.push_back({0, term, frequency});
  }
  // counts map is already lexicographic, so a stable sort by frequency keeps
  // the required tie order.
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const RankedTerm& a, const RankedTerm& b) {
                     return a.frequency > b.frequency;
                   });
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    ranking[i].rank = static_cast<std::int64_t>(i + 1);
  }
  return ranking;
}

}  // namespace topics
