#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/SparseCore>

#include "topics/corpus.hpp"

namespace topics {

using TokenStream = std::vector<std::string>;
using StopwordSet = std::unordered_set<std::string>;

// One lowercase term per line; blank lines ignored.
StopwordSet load_stopwords(const std::filesystem::path& path);

// The versioned list shipped in data/stopwords.txt, compiled in.
const StopwordSet& builtin_stopwords();

// Lowercases, splits on any character outside [a-z0-9], then drops stopwords
// and single-character tokens. Order preserved.
TokenStream tokenize(std::string_view text, const StopwordSet& stopwords);

// Terms ordered lexicographically; only terms whose corpus-wide occurrence
// count reaches min_count survive.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::vector<std::int64_t> df,
             std::vector<std::int64_t> cf);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::string& term(std::size_t index) const { return terms_[index]; }

  // -1 when the term is not in the vocabulary.
  int index_of(std::string_view term) const;

  std::int64_t document_frequency(std::size_t index) const { return df_[index]; }
  std::int64_t corpus_frequency(std::size_t index) const { return cf_[index]; }

 private:
  std::vector<std::string> terms_;
  std::vector<std::int64_t> df_;
  std::vector<std::int64_t> cf_;
  std::unordered_map<std::string, int> index_;
};

// Throws InputError when no term survives the threshold.
Vocabulary build_vocabulary(const PublicationCorpus& corpus, int min_count = 10,
                            const StopwordSet& stopwords = builtin_stopwords());

// tf * ln(total_docs / df)
double tfidf_weight(std::int64_t tf, std::int64_t df, std::int64_t total_docs);

// L2-normalized tf-idf column for one token stream; all-zero when the stream
// has no vocabulary term with positive idf.
Eigen::SparseVector<double> tfidf_column(const TokenStream& tokens,
                                         const Vocabulary& vocab,
                                         std::int64_t total_docs);

// Sparse n x d matrix of L2-normalized tf-idf columns, aligned with corpus
// record order. Documents producing an all-zero column are dropped and their
// ids recorded.
struct TermDocumentMatrix {
  Eigen::SparseMatrix<double> weights;  // n x d
  std::vector<std::string> doc_ids;     // one per column
  std::vector<std::string> dropped_doc_ids;

  Eigen::Index term_count() const { return weights.rows(); }
  Eigen::Index document_count() const { return weights.cols(); }
};

TermDocumentMatrix tfidf_matrix(const PublicationCorpus& corpus,
                                const Vocabulary& vocab);

// Debug export: header "n d nnz", then one "row col value" line per entry.
void write_matrix_coordinate(const std::filesystem::path& path,
                             const TermDocumentMatrix& matrix);

struct LengthStats {
  std::vector<std::int64_t> histogram;  // bin k counts lengths in [k*w,(k+1)*w)
  int bin_width = 10;
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;  // population
  std::int64_t documents = 0;
};

LengthStats abstract_length_stats(const PublicationCorpus& corpus,
                                  const StopwordSet& stopwords,
                                  bool after_stopword_removal,
                                  int bin_width = 10);

struct RankedTerm {
  std::int64_t rank = 0;
  std::string term;
  std::int64_t frequency = 0;
};

// Descending frequency, ties broken lexicographically; rank starts at 1.
std::vector<RankedTerm> term_frequency_ranking(const PublicationCorpus& corpus,
                                               const StopwordSet& stopwords,
                                               bool after_stopword_removal);

}  // namespace topics
