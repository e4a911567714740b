#include "ldarlct/lda_model.hpp"

#include "ldarlct/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace ldarlct {
namespace {

StochasticMatrix dirichlet_one_columns(std::size_t rows, std::size_t cols, Rng &rng) {
  Matrix m(rows, cols);
  std::vector<double> ones(rows, 1.0), column(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    sample_dirichlet(rng, ones, column);
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = column[r];
  }
  return StochasticMatrix(std::move(m));
}

void check_compatible(const StochasticMatrix &topic_word, const StochasticMatrix &doc_topic) {
  require(topic_word.cols() == doc_topic.rows(), ErrorCode::invalid_argument,
          "topic-word columns (" + std::to_string(topic_word.cols()) +
              ") must equal document-topic rows (" + std::to_string(doc_topic.rows()) + ")");
}

double floored_log(double p) { return std::log(std::max(p, kProbabilityFloor)); }

} // namespace

TrueModel::TrueModel(StochasticMatrix tw, StochasticMatrix dt, std::vector<double> weights)
    : topic_word(std::move(tw)), doc_topic(std::move(dt)), doc_weights(std::move(weights)) {
  check_compatible(topic_word, doc_topic);
  require(doc_weights.size() == doc_topic.cols(), ErrorCode::invalid_argument,
          "document distribution length must equal the document count");
  double total = 0.0;
  for (double w : doc_weights) {
    require(w > 0.0, ErrorCode::invalid_argument, "document distribution must be strictly positive");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorCode::invalid_argument,
          "document distribution must sum to 1");
}

Matrix TrueModel::word_given_doc() const {
  return multiply(topic_word.matrix(), doc_topic.matrix());
}

Matrix centred_product(const StochasticMatrix &topic_word, const StochasticMatrix &doc_topic) {
  check_compatible(topic_word, doc_topic);
  const std::size_t M = topic_word.rows(), H0 = topic_word.cols(), N = doc_topic.cols();
  require(M >= 1 && N >= 1 && H0 >= 1, ErrorCode::invalid_argument, "empty truth matrices");
  Matrix u(M - 1, H0 - 1), v(H0 - 1, N - 1);
  for (std::size_t i = 0; i + 1 < M; ++i)
    for (std::size_t k = 0; k + 1 < H0; ++k) u(i, k) = topic_word(i, k) - topic_word(i, H0 - 1);
  for (std::size_t k = 0; k + 1 < H0; ++k)
    for (std::size_t j = 1; j < N; ++j) v(k, j - 1) = doc_topic(k, j) - doc_topic(k, 0);
  return multiply(u, v);
}

int rank_r(const StochasticMatrix &topic_word, const StochasticMatrix &doc_topic, double rel_tol) {
  check_compatible(topic_word, doc_topic);
  if (topic_word.cols() == 1) return 0;
  return numeric_rank(centred_product(topic_word, doc_topic), rel_tol);
}

TrueModel sample_true_model(int vocab_size, int num_docs, int true_topics, Rng &rng,
                            int max_attempts) {
  require(vocab_size >= 2 && num_docs >= 2 && true_topics >= 1, ErrorCode::invalid_shape,
          "truth needs M >= 2, N >= 2, H0 >= 1");
  const std::size_t M = vocab_size, N = num_docs, H0 = true_topics;
  const int generic_rank = std::min({vocab_size - 1, num_docs - 1, true_topics - 1});
  const int full_a = std::min(vocab_size, true_topics);
  const int full_b = std::min(true_topics, num_docs);
  std::vector<double> uniform(N, 1.0 / static_cast<double>(N));

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    StochasticMatrix a = dirichlet_one_columns(M, H0, rng);
    StochasticMatrix b = H0 == 1 ? StochasticMatrix(Matrix(1, N, 1.0))
                                 : dirichlet_one_columns(H0, N, rng);
    if (numeric_rank(a.matrix(), kRankTolerance) != full_a) continue;
    if (numeric_rank(b.matrix(), kRankTolerance) != full_b) continue;
    if (rank_r(a, b) != generic_rank) continue;
    return TrueModel(std::move(a), std::move(b), uniform);
  }
  fail(ErrorCode::rejection_limit,
       "could not draw a full-rank truth in " + std::to_string(max_attempts) + " attempts");
}

Dataset::Dataset(int vocab_size, int num_docs, std::vector<Token> tokens)
    : vocab_size_(vocab_size), num_docs_(num_docs), tokens_(std::move(tokens)),
      counts_(static_cast<std::size_t>(vocab_size) * num_docs, 0) {
  require(vocab_size >= 1 && num_docs >= 1, ErrorCode::invalid_argument,
          "dataset needs positive vocabulary and document counts");
  for (const Token &t : tokens_) {
    require(t.word >= 0 && t.word < vocab_size_ && t.doc >= 0 && t.doc < num_docs_,
            ErrorCode::invalid_argument, "token index out of range");
    ++counts_[static_cast<std::size_t>(t.word) * num_docs_ + t.doc];
  }
}

std::size_t Dataset::doc_length(int doc) const {
  std::size_t total = 0;
  for (int i = 0; i < vocab_size_; ++i) total += count(i, doc);
  return total;
}

Token sample_token(const TrueModel &model, Rng &rng) {
  const std::size_t H0 = model.num_topics(), M = model.vocab_size();
  std::vector<double> scratch(std::max(H0, M));
  Token t;
  t.doc = static_cast<int>(sample_categorical(rng, model.doc_weights));
  for (std::size_t k = 0; k < H0; ++k) scratch[k] = model.doc_topic(k, t.doc);
  const std::size_t topic = sample_categorical(rng, std::span(scratch.data(), H0));
  for (std::size_t i = 0; i < M; ++i) scratch[i] = model.topic_word(i, topic);
  t.word = static_cast<int>(sample_categorical(rng, std::span(scratch.data(), M)));
  return t;
}

Dataset generate_dataset(const TrueModel &model, std::size_t n, Rng &rng) {
  require(n >= 1, ErrorCode::invalid_argument, "dataset size must be >= 1");
  std::vector<Token> tokens;
  tokens.reserve(n);
  for (std::size_t t = 0; t < n; ++t) tokens.push_back(sample_token(model, rng));
  return Dataset(static_cast<int>(model.vocab_size()), static_cast<int>(model.num_docs()),
                 std::move(tokens));
}

double cond_log_lik(const StochasticMatrix &topic_word, const StochasticMatrix &doc_topic,
                    const Token &token) {
  check_compatible(topic_word, doc_topic);
  double p = 0.0;
  for (std::size_t k = 0; k < topic_word.cols(); ++k)
    p += doc_topic(k, token.doc) * topic_word(token.word, k);
  return floored_log(p);
}

double kl_exact(const StochasticMatrix &topic_word, const StochasticMatrix &doc_topic,
                const TrueModel &model) {
  check_compatible(topic_word, doc_topic);
  require(topic_word.rows() == model.vocab_size() && doc_topic.cols() == model.num_docs(),
          ErrorCode::invalid_argument, "model and truth disagree on M or N");
  const Matrix truth = model.word_given_doc();
  const Matrix fitted = multiply(topic_word.matrix(), doc_topic.matrix());
  double kl = 0.0;
  for (std::size_t j = 0; j < truth.cols(); ++j) {
    double inner = 0.0;
    for (std::size_t i = 0; i < truth.rows(); ++i) {
      const double q = truth(i, j);
      if (q <= 0.0) continue;
      inner += q * (std::log(q) - floored_log(fitted(i, j)));
    }
    kl += model.doc_weights[j] * inner;
  }
  return kl;
}

double empirical_entropy(const Dataset &data, const TrueModel &model) {
  require(static_cast<std::size_t>(data.vocab_size()) == model.vocab_size() &&
              static_cast<std::size_t>(data.num_docs()) == model.num_docs(),
          ErrorCode::invalid_argument, "dataset and truth disagree on M or N");
  require(data.size() > 0, ErrorCode::invalid_argument, "empty dataset");
  const Matrix truth = model.word_given_doc();
  double sum = 0.0;
  for (int i = 0; i < data.vocab_size(); ++i)
    for (int j = 0; j < data.num_docs(); ++j)
      if (const std::size_t c = data.count(i, j)) sum += c * floored_log(truth(i, j));
  return -sum / static_cast<double>(data.size());
}

} // namespace ldarlct
