#pragma once

#include "ldarlct/matrix.hpp"
#include "ldarlct/random.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace ldarlct {

/// Probability floor applied before every logarithm.
inline constexpr double kProbabilityFloor = 1e-300;

/// Relative pivot threshold used when ranking floating-point truths.
inline constexpr double kRankTolerance = 1e-10;

/// Generating distribution: topic-word matrix (M x H0), document-topic matrix
/// (H0 x N) and the document distribution q'(z).
struct TrueModel {
  StochasticMatrix topic_word;
  StochasticMatrix doc_topic;
  std::vector<double> doc_weights;

  TrueModel() = default;
  TrueModel(StochasticMatrix topic_word, StochasticMatrix doc_topic,
            std::vector<double> doc_weights);

  std::size_t vocab_size() const noexcept { return topic_word.rows(); }
  std::size_t num_docs() const noexcept { return doc_topic.cols(); }
  std::size_t num_topics() const noexcept { return topic_word.cols(); }

  /// q(i | j) as an M x N matrix.
  Matrix word_given_doc() const;
};

/// Draw a truth with Dirichlet(1) columns, redrawing until both factors have
/// full rank and rank_r reaches min(M-1, N-1, H0-1). Uniform q'(z).
TrueModel sample_true_model(int vocab_size, int num_docs, int true_topics, Rng &rng,
                            int max_attempts = 1000);

/// Rank of U0 V0 where U0 = (a_ik - a_iH0), i < M, k < H0 and
/// V0 = (b_kj - b_k1), k < H0, j > 1. Zero when H0 = 1.
int rank_r(const StochasticMatrix &topic_word, const StochasticMatrix &doc_topic,
           double rel_tol = kRankTolerance);

/// The centred product U0 V0 itself, (M-1) x (N-1).
Matrix centred_product(const StochasticMatrix &topic_word, const StochasticMatrix &doc_topic);

struct Token {
  int doc = 0;  // 0-based
  int word = 0; // 0-based

  friend bool operator==(const Token &, const Token &) = default;
};

class Dataset {
public:
  Dataset(int vocab_size, int num_docs, std::vector<Token> tokens);

  int vocab_size() const noexcept { return vocab_size_; }
  int num_docs() const noexcept { return num_docs_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  std::span<const Token> tokens() const noexcept { return tokens_; }

  /// Token tally per (word, doc); M x N.
  const std::vector<std::size_t> &counts() const noexcept { return counts_; }
  std::size_t count(int word, int doc) const { return counts_[word * num_docs_ + doc]; }
  std::size_t doc_length(int doc) const;

private:
  int vocab_size_;
  int num_docs_;
  std::vector<Token> tokens_;
  std::vector<std::size_t> counts_;
};

/// n i.i.d. tokens: z ~ q', topic ~ b_z, word ~ a_topic.
Dataset generate_dataset(const TrueModel &model, std::size_t n, Rng &rng);

/// Sample a single token from the truth.
Token sample_token(const TrueModel &model, Rng &rng);

/// log sum_k b_kj a_ik for the token's (i, j), floored at kProbabilityFloor.
double cond_log_lik(const StochasticMatrix &topic_word, const StochasticMatrix &doc_topic,
                    const Token &token);

/// Conditional KL divergence K(A, B) by enumeration over all (word, doc).
double kl_exact(const StochasticMatrix &topic_word, const StochasticMatrix &doc_topic,
                const TrueModel &model);

/// -(1/n) sum_t log q(word_t | doc_t).
double empirical_entropy(const Dataset &data, const TrueModel &model);

} // namespace ldarlct
