#include "topics/coherence.hpp"

#include <doctest.h>

#include <cmath>

#include "topics/errors.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace topics;

namespace {

std::vector<TokenStream> doc_of_length(int length) {
  TokenStream tokens;
  for (int i = 0; i < length; ++i) {
    tokens.push_back("tok" + std::to_string(i % 7));
  }
  return {tokens};
}

}  // namespace

TEST_CASE("build_window_index window counts") {
  CHECK(build_window_index(doc_of_length(112), 110).total_windows() == 3);
  CHECK(build_window_index(doc_of_length(50), 110).total_windows() == 1);
  {
    std::vector<TokenStream> docs;
    docs.push_back(doc_of_length(111).front());
    docs.push_back(doc_of_length(5).front());
    CHECK(build_window_index(docs, 110).total_windows() == 3);  // 2 + 1
  }
  CHECK(build_window_index({}, 110).total_windows() == 0);
  CHECK_THROWS_AS(build_window_index({}, 0), InputError);
}

TEST_CASE("window index postings are sorted sets of window ids") {
  // sliding windows over "x y x z": window size 2 -> {x y}, {y x}, {x z}
  const std::vector<TokenStream> docs = {{"x", "y", "x", "z"}};
  const WindowIndex index = build_window_index(docs, 2);
  CHECK(index.total_windows() == 3);
  CHECK(index.windows("x") == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(index.windows("y") == std::vector<std::uint32_t>{0, 1});
  CHECK(index.windows("z") == std::vector<std::uint32_t>{2});
  CHECK(index.probability("z") == doctest::Approx(1.0 / 3.0));
  CHECK(index.joint_probability("x", "y") == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(index.contains("missing"));
  CHECK_THROWS_AS(index.windows("missing"), InputError);
}

TEST_CASE("a sliding window that covers every document counts documents") {
  std::mt19937_64 engine(2);
  std::vector<TokenStream> docs;
  for (int d = 0; d < 25; ++d) {
    TokenStream tokens;
    const auto length = 1 + uniform_index(engine, 40);
    for (std::size_t i = 0; i < length; ++i) {
      tokens.push_back("w" + std::to_string(uniform_index(engine, 9)));
    }
    docs.push_back(tokens);
  }
  const WindowIndex index = build_window_index(docs, 1000);
  CHECK(index.total_windows() == docs.size());
  std::size_t containing = 0;
  for (const TokenStream& doc : docs) {
    containing += std::find(doc.begin(), doc.end(), "w3") != doc.end();
  }
  CHECK(index.probability("w3") ==
        doctest::Approx(static_cast<double>(containing) / docs.size()));
}

TEST_CASE("npmi of a term with itself approaches one") {
  std::vector<TokenStream> docs;
  for (int i = 0; i < 4; ++i) {
    docs.push_back({"shared", "filler" + std::to_string(i)});
  }
  docs.push_back({"other"});
  const WindowIndex index = build_window_index(docs, 110);
  CHECK(npmi("shared", "shared", index) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("npmi of never co-occurring balanced terms") {
  // 100 windows, w in half, v in the other half
  std::vector<TokenStream> docs;
  for (int i = 0; i < 50; ++i) {
    docs.push_back({"w"});
    docs.push_back({"v"});
  }
  const WindowIndex index = build_window_index(docs, 110);
  REQUIRE(index.total_windows() == 100);
  const double value = npmi("w", "v", index);
  const double expected =
      std::log(1e-12 / 0.25) / (-std::log(1e-12));
  CHECK(value == doctest::Approx(expected).epsilon(1e-9));
  CHECK(value == doctest::Approx(-0.9499).epsilon(1e-3));
}

TEST_CASE("npmi of independent terms is near zero") {
  // p(w) = p(v) = 1/2, p(w,v) = 1/4 = p(w) p(v)
  std::vector<TokenStream> docs;
  for (int i = 0; i < 25; ++i) {
    docs.push_back({"w", "v"});
    docs.push_back({"w"});
    docs.push_back({"v"});
    docs.push_back({"filler"});
  }
  const WindowIndex index = build_window_index(docs, 110);
  CHECK(npmi("w", "v", index) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("npmi is symmetric and joint probabilities are bounded") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto docs = synthetic::random_micro_docs(900 + seed);
    const WindowIndex index = build_window_index(docs, 5);
    if (index.total_windows() == 0) {
      continue;
    }
    std::vector<std::string> terms;
    for (const auto& doc : docs) {
      for (const auto& token : doc) {
        if (std::find(terms.begin(), terms.end(), token) == terms.end()) {
          terms.push_back(token);
        }
      }
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = i; j < terms.size(); ++j) {
        CHECK(npmi(terms[i], terms[j], index) ==
              npmi(terms[j], terms[i], index));
        const double joint = index.joint_probability(terms[i], terms[j]);
        CHECK(joint <= std::min(index.probability(terms[i]),
                                index.probability(terms[j])) + 1e-15);
      }
    }
  }
}

TEST_CASE("signed_power keeps the sign for fractional exponents") {
  CHECK(signed_power(-0.5, 2.0) == doctest::Approx(-0.25));
  CHECK(signed_power(0.5, 2.0) == doctest::Approx(0.25));
  CHECK(signed_power(-0.25, 0.5) == doctest::Approx(-0.5));
  CHECK(signed_power(0.73, 1.0) == 0.73);
}

TEST_CASE("context_vector at gamma one is the raw NPMI row") {
  std::vector<TokenStream> docs;
  for (int i = 0; i < 10; ++i) {
    docs.push_back({"alpha", "beta"});
    docs.push_back({"alpha", "gamma"});
    docs.push_back({"delta"});
  }
  const WindowIndex index = build_window_index(docs, 110);
  const std::vector<std::string> terms = {"alpha", "beta", "gamma"};
  const Eigen::VectorXd vector = context_vector("alpha", terms, index);
  REQUIRE(vector.size() == 3);
  CHECK(vector(0) == doctest::Approx(npmi("alpha", "alpha", index)));
  CHECK(vector(1) == doctest::Approx(npmi("alpha", "beta", index)));
  CHECK(vector(2) == doctest::Approx(npmi("alpha", "gamma", index)));
  CHECK(vector(0) == doctest::Approx(1.0).epsilon(1e-6));

  const Eigen::VectorXd squared = context_vector("alpha", terms, index, 2.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(squared(i) == doctest::Approx(signed_power(vector(i), 2.0)));
  }
}

TEST_CASE("topic coherence of perfectly co-occurring terms is one") {
  std::vector<TokenStream> docs;
  for (int i = 0; i < 10; ++i) {
    docs.push_back({"left", "right"});
  }
  docs.push_back({"noise"});
  const WindowIndex index = build_window_index(docs, 110);
  const TopicCv cv = topic_coherence_cv({"left", "right"}, index, 2);
  CHECK(cv.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(cv.truncated);
  CHECK(cv.zero_vectors == 0);
}

TEST_CASE("topic coherence with a single term is one") {
  std::vector<TokenStream> docs = {{"only", "thing"}, {"only"}, {"thing"}};
  const WindowIndex index = build_window_index(docs, 110);
  const TopicCv cv = topic_coherence_cv({"only"}, index, 1);
  CHECK(cv.value == doctest::Approx(1.0));
}

TEST_CASE("topic coherence flags truncation") {
  std::vector<TokenStream> docs = {{"aa", "bb"}, {"aa"}, {"bb"}};
  const WindowIndex index = build_window_index(docs, 110);
  const TopicCv cv = topic_coherence_cv({"aa", "bb"}, index, 20);
  CHECK(cv.truncated);
  CHECK(cv.terms_used == 2);
  CHECK_THROWS_AS(topic_coherence_cv({"aa"}, index, 0), InputError);
}

TEST_CASE("pipeline C_V equals the brute-force oracle") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40 && checked < 25; ++seed) {
    const auto docs = synthetic::random_micro_docs(5000 + seed);
    for (int window_size : {3, 5, 110}) {
      const WindowIndex index = build_window_index(docs, window_size);
      if (index.total_windows() == 0) {
        continue;
      }
      std::vector<std::string> terms;
      for (const auto& doc : docs) {
        for (const auto& token : doc) {
          if (std::find(terms.begin(), terms.end(), token) == terms.end()) {
            terms.push_back(token);
          }
        }
      }
      if (terms.size() < 2) {
        continue;
      }
      std::sort(terms.begin(), terms.end());
      if (terms.size() > 6) {
        terms.resize(6);
      }
      const auto windows = oracle::enumerate_windows(docs, window_size);
      const double expected = oracle::topic_cv(windows, terms);
      const TopicCv actual =
          topic_coherence_cv(terms, index, static_cast<int>(terms.size()));
      CHECK(std::abs(actual.value - expected) <= 1e-10);
      CHECK(actual.value >= -1.0 - 1e-12);
      CHECK(actual.value <= 1.0 + 1e-12);
      ++checked;
    }
  }
  CHECK(checked >= 25);
}

namespace {

TopicModel tiny_model() {
  // two clean topics over a four-term vocabulary
  TopicModel model;
  model.terms = {"apple", "banana", "carrot", "daikon"};
  model.doc_ids = {"d0", "d1"};
  model.W.resize(4, 2);
  model.W << 0.6, 0.0, 0.4, 0.0, 0.0, 0.7, 0.0, 0.3;
  model.H.resize(2, 2);
  model.H << 1.0, 0.0, 0.0, 1.0;
  return model;
}

std::vector<TokenStream> tiny_docs() {
  std::vector<TokenStream> docs;
  for (int i = 0; i < 6; ++i) {
    docs.push_back({"apple", "banana"});
    docs.push_back({"carrot", "daikon"});
    docs.push_back({"apple"});
    docs.push_back({"carrot"});
  }
  return docs;
}

}  // namespace

TEST_CASE("model_coherence averages per-topic values") {
  const TopicModel model = tiny_model();
  const WindowIndex index = build_window_index(tiny_docs(), 110);
  const CoherenceResult result = model_coherence(model, index, 2);
  REQUIRE(result.per_topic.size() == 2);
  const double expected =
      (result.per_topic[0].value + result.per_topic[1].value) / 2.0;
  CHECK(result.model_coherence == doctest::Approx(expected).epsilon(1e-15));

  const TopicCv direct =
      topic_coherence_cv({"apple", "banana"}, index, 2);
  CHECK(result.per_topic[0].value == doctest::Approx(direct.value));
}

TEST_CASE("model_coherence is invariant to topic order") {
  TopicModel model = tiny_model();
  const WindowIndex index = build_window_index(tiny_docs(), 110);
  const double forward = model_coherence(model, index, 2).model_coherence;
  model.W = model.W.rowwise().reverse().eval();
  model.H = model.H.colwise().reverse().eval();
  const double reversed = model_coherence(model, index, 2).model_coherence;
  CHECK(forward == doctest::Approx(reversed).epsilon(1e-15));
}

TEST_CASE("select_topic_number with a single candidate returns it") {
  const auto planted = synthetic::planted_topic_corpus(3, 15);
  const Vocabulary vocab = build_vocabulary(planted.corpus, 5, {});
  const TermDocumentMatrix matrix = tfidf_matrix(planted.corpus, vocab);
  std::vector<TokenStream> streams;
  for (const auto& record : planted.corpus.records()) {
    streams.push_back(tokenize(record.abstract_text, {}));
  }
  const WindowIndex index = build_window_index(streams, 110);

  FactorizationOptions options;
  options.max_iterations = 120;
  const SweepResult result =
      select_topic_number(matrix, vocab, index, {3}, 2, 7, options);
  CHECK(result.best_topic_count == 3);
  CHECK(result.entries.size() == 2);
  REQUIRE(result.curve.size() == 1);
  CHECK(result.curve[0].best_coherence ==
        doctest::Approx(std::max(result.entries[0].coherence,
                                 result.entries[1].coherence)));
  for (const SweepEntry& entry : result.entries) {
    CHECK(entry.relative_error ==
          doctest::Approx(entry.reconstruction_error /
                          frobenius_norm(matrix.weights)));
  }
  CHECK_THROWS_AS(
      select_topic_number(matrix, vocab, index, {}, 1, 1, options),
      InputError);
}

TEST_CASE("select_topic_number skips failing candidates") {
  const auto planted = synthetic::planted_topic_corpus(5, 6, 10);
  const Vocabulary vocab = build_vocabulary(planted.corpus, 5, {});
  const TermDocumentMatrix matrix = tfidf_matrix(planted.corpus, vocab);
  std::vector<TokenStream> streams;
  for (const auto& record : planted.corpus.records()) {
    streams.push_back(tokenize(record.abstract_text, {}));
  }
  const WindowIndex index = build_window_index(streams, 110);

  FactorizationOptions options;
  options.max_iterations = 80;
  // t = 10000 exceeds min(n, d) and must be recorded as failed, not fatal
  const SweepResult result =
      select_topic_number(matrix, vocab, index, {2, 10000}, 1, 3, options);
  CHECK(result.best_topic_count == 2);
  bool saw_failure = false;
  for (const SweepEntry& entry : result.entries) {
    saw_failure = saw_failure || entry.failed;
  }
  CHECK(saw_failure);
  CHECK(result.curve.size() == 1);

  CHECK_THROWS_AS(
      select_topic_number(matrix, vocab, index, {10000}, 1, 3, options),
      InputError);
}
