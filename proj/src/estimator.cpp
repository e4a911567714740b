#include "ldarlct/estimator.hpp"

#include "ldarlct/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ldarlct {
namespace {

double floored_log(double p) { return std::log(std::max(p, kProbabilityFloor)); }

// Per-draw cell probabilities p(i | j, w_k), laid out [k][i * N + j].
class DrawTable {
public:
  explicit DrawTable(const PosteriorDraws &draws) {
    require(!draws.empty(), ErrorCode::invalid_argument, "no posterior draws");
    vocab_ = draws.front().topic_word.rows();
    docs_ = draws.front().doc_topic.cols();
    probs_.reserve(draws.size() * vocab_ * docs_);
    for (const ParameterDraw &d : draws) {
      require(d.topic_word.rows() == vocab_ && d.doc_topic.cols() == docs_ &&
                  d.topic_word.cols() == d.doc_topic.rows(),
              ErrorCode::invalid_argument, "posterior draws have inconsistent shapes");
      const Matrix p = multiply(d.topic_word.matrix(), d.doc_topic.matrix());
      const auto v = p.values();
      probs_.insert(probs_.end(), v.begin(), v.end());
    }
    draws_ = draws.size();
  }

  std::size_t vocab() const { return vocab_; }
  std::size_t docs() const { return docs_; }
  std::size_t draws() const { return draws_; }
  std::size_t cells() const { return vocab_ * docs_; }

  double prob(std::size_t draw, std::size_t cell) const { return probs_[draw * cells() + cell]; }

  double predictive_log(std::size_t cell) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < draws_; ++k) sum += prob(k, cell);
    return floored_log(sum / static_cast<double>(draws_));
  }

  // Population variance over draws of log p (two-pass).
  double log_variance(std::size_t cell) const {
    double mean = 0.0;
    for (std::size_t k = 0; k < draws_; ++k) mean += floored_log(prob(k, cell));
    mean /= static_cast<double>(draws_);
    double var = 0.0;
    for (std::size_t k = 0; k < draws_; ++k) {
      const double d = floored_log(prob(k, cell)) - mean;
      var += d * d;
    }
    return var / static_cast<double>(draws_);
  }

private:
  std::size_t vocab_ = 0, docs_ = 0, draws_ = 0;
  std::vector<double> probs_;
};

void check_against(const DrawTable &table, std::size_t vocab, std::size_t docs) {
  require(table.vocab() == vocab && table.docs() == docs, ErrorCode::invalid_argument,
          "posterior draws and data disagree on M or N");
}

WaicResult waic_from(const DrawTable &table, const Dataset &data) {
  require(table.draws() >= 2, ErrorCode::invalid_argument,
          "WAIC needs at least two posterior draws");
  require(data.size() > 0, ErrorCode::invalid_argument, "WAIC needs a non-empty dataset");
  check_against(table, data.vocab_size(), data.num_docs());
  const auto &counts = data.counts();
  double loss = 0.0, variance = 0.0;
  for (std::size_t cell = 0; cell < counts.size(); ++cell) {
    if (counts[cell] == 0) continue;
    const double c = static_cast<double>(counts[cell]);
    loss += c * table.predictive_log(cell);
    variance += c * table.log_variance(cell);
  }
  const double n = static_cast<double>(data.size());
  WaicResult r;
  r.empirical_loss = -loss / n;
  r.functional_variance = variance;
  r.waic = r.empirical_loss + variance / n;
  return r;
}

double gen_error_from(const DrawTable &table, const TrueModel &model) {
  check_against(table, model.vocab_size(), model.num_docs());
  const Matrix truth = model.word_given_doc();
  const std::size_t N = model.num_docs();
  double total = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    double inner = 0.0;
    for (std::size_t i = 0; i < model.vocab_size(); ++i) {
      const double q = truth(i, j);
      if (q <= 0.0) continue;
      inner += q * (std::log(q) - table.predictive_log(i * N + j));
    }
    total += model.doc_weights[j] * inner;
  }
  return total;
}

MonteCarloEstimate gen_error_mc_from(const DrawTable &table, const TrueModel &model,
                                     std::size_t test_size, Rng &rng) {
  require(test_size >= 1, ErrorCode::invalid_argument, "test set size n_T must be >= 1");
  check_against(table, model.vocab_size(), model.num_docs());
  const Matrix truth = model.word_given_doc();
  const std::size_t N = model.num_docs();
  std::vector<double> log_ratio(table.cells());
  for (std::size_t cell = 0; cell < table.cells(); ++cell)
    log_ratio[cell] = floored_log(truth(cell / N, cell % N)) - table.predictive_log(cell);

  // Welford over the test tokens
  double mean = 0.0, m2 = 0.0;
  for (std::size_t t = 0; t < test_size; ++t) {
    const Token tok = sample_token(model, rng);
    const double x = log_ratio[static_cast<std::size_t>(tok.word) * N + tok.doc];
    const double delta = x - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (x - mean);
  }
  MonteCarloEstimate est;
  est.value = mean;
  if (test_size > 1) {
    const double var = m2 / static_cast<double>(test_size - 1);
    est.std_error = std::sqrt(var / static_cast<double>(test_size));
  }
  return est;
}

} // namespace

double predictive_log_prob(const PosteriorDraws &draws, const Token &token) {
  require(!draws.empty(), ErrorCode::invalid_argument, "no posterior draws");
  double sum = 0.0;
  for (const ParameterDraw &d : draws) sum += std::exp(cond_log_lik(d.topic_word, d.doc_topic, token));
  return floored_log(sum / static_cast<double>(draws.size()));
}

WaicResult waic(const PosteriorDraws &draws, const Dataset &data) {
  require(draws.size() >= 2, ErrorCode::invalid_argument, "WAIC needs at least two posterior draws");
  return waic_from(DrawTable(draws), data);
}

double gen_error_exact(const PosteriorDraws &draws, const TrueModel &model) {
  return gen_error_from(DrawTable(draws), model);
}

MonteCarloEstimate gen_error_mc(const PosteriorDraws &draws, const TrueModel &model,
                                std::size_t test_size, Rng &rng) {
  return gen_error_mc_from(DrawTable(draws), model, test_size, rng);
}

LossReport evaluate_losses(const PosteriorDraws &draws, const Dataset &data,
                           const TrueModel &model, const ReplicateOptions &options, Rng &rng) {
  const DrawTable table(draws);
  LossReport r;
  r.generalization_error = options.gn_mode == GnMode::exact
                               ? gen_error_from(table, model)
                               : gen_error_mc_from(table, model, options.test_size, rng).value;
  r.empirical_entropy = empirical_entropy(data, model);
  const WaicResult w = waic_from(table, data);
  r.empirical_loss = w.empirical_loss;
  r.functional_variance = w.functional_variance;
  r.waic = w.waic;
  const double n = static_cast<double>(data.size());
  r.lambda_sample = n * (r.generalization_error + r.waic - r.empirical_entropy) / 2.0;
  return r;
}

LossReport lambda_replicate(const TrueModel &model, int num_topics, std::size_t n,
                            const GibbsConfig &gibbs, const ReplicateOptions &options,
                            PosteriorDraws *keep_draws) {
  Rng data_rng(derive_seed(gibbs.seed, {0x64617461ULL}));  // "data"
  Rng test_rng(derive_seed(gibbs.seed, {0x74657374ULL}));  // "test"
  GibbsConfig chain = gibbs;
  chain.seed = derive_seed(gibbs.seed, {0x6368616eULL});   // "chan"
  const Dataset data = generate_dataset(model, n, data_rng);
  PosteriorDraws draws = run_gibbs(data, num_topics, chain);
  LossReport report = evaluate_losses(draws, data, model, options, test_rng);
  if (keep_draws) *keep_draws = std::move(draws);
  return report;
}

LambdaEstimate aggregate(std::span<const double> samples) {
  require(samples.size() >= 2, ErrorCode::invalid_argument,
          "aggregation needs at least two replicate values");
  LambdaEstimate e;
  e.samples.assign(samples.begin(), samples.end());
  // sum in sorted order so the result does not depend on input order
  std::vector<double> sorted = e.samples;
  std::sort(sorted.begin(), sorted.end());
  const double d = static_cast<double>(sorted.size());
  e.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / d;
  double ss = 0.0;
  for (double x : sorted) ss += (x - e.mean) * (x - e.mean);
  e.std_dev = std::sqrt(ss / (d - 1.0));
  return e;
}

} // namespace ldarlct
