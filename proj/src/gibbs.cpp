#include "ldarlct/gibbs.hpp"

#include "ldarlct/error.hpp"

#include <cassert>
#include <utility>

namespace ldarlct {

void GibbsConfig::validate() const {
  require(alpha > 0.0, ErrorCode::invalid_argument, "gibbs alpha must be > 0");
  require(beta > 0.0, ErrorCode::invalid_argument, "gibbs beta must be > 0");
  require(burn_in >= 0, ErrorCode::invalid_argument, "gibbs burn_in must be >= 0");
  require(thinning >= 1, ErrorCode::invalid_argument, "gibbs thinning must be >= 1");
  require(num_draws >= 1, ErrorCode::invalid_argument, "gibbs draw count K must be >= 1");
}

bool ChainState::consistent(const Dataset &data) const {
  if (assignments.size() != data.size()) return false;
  std::vector<int> dt(doc_topic.size(), 0), wt(word_topic.size(), 0), tt(topic_total.size(), 0);
  const auto tokens = data.tokens();
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const int k = assignments[t];
    if (k < 0 || k >= num_topics) return false;
    ++dt[k * num_docs + tokens[t].doc];
    ++wt[tokens[t].word * num_topics + k];
    ++tt[k];
  }
  return dt == doc_topic && wt == word_topic && tt == topic_total;
}

ChainState init_chain(const Dataset &data, int num_topics, Rng &rng) {
  require(num_topics >= 1, ErrorCode::invalid_argument, "topic count must be >= 1");
  ChainState s;
  s.num_topics = num_topics;
  s.vocab_size = data.vocab_size();
  s.num_docs = data.num_docs();
  s.doc_topic.assign(static_cast<std::size_t>(num_topics) * s.num_docs, 0);
  s.word_topic.assign(static_cast<std::size_t>(s.vocab_size) * num_topics, 0);
  s.topic_total.assign(num_topics, 0);
  s.assignments.reserve(data.size());
  std::uniform_int_distribution<int> pick(0, num_topics - 1);
  for (const Token &t : data.tokens()) {
    const int k = num_topics == 1 ? 0 : pick(rng);
    s.assignments.push_back(k);
    ++s.doc_topic[k * s.num_docs + t.doc];
    ++s.word_topic[t.word * num_topics + k];
    ++s.topic_total[k];
  }
  return s;
}

void sweep(ChainState &s, const Dataset &data, const GibbsConfig &config, Rng &rng) {
  const int H = s.num_topics;
  if (H == 1) return;
  const int N = s.num_docs;
  const double alpha = config.alpha, beta = config.beta;
  const double vocab_beta = s.vocab_size * beta;
  std::vector<double> cumulative(H);
  const auto tokens = data.tokens();

  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const int i = tokens[t].word, j = tokens[t].doc;
    int k = s.assignments[t];
    --s.doc_topic[k * N + j];
    --s.word_topic[i * H + k];
    --s.topic_total[k];

    const int *word_row = &s.word_topic[i * H];
    double total = 0.0;
    for (int h = 0; h < H; ++h) {
      total += (s.doc_topic[h * N + j] + alpha) * (word_row[h] + beta) /
               (s.topic_total[h] + vocab_beta);
      cumulative[h] = total;
    }
    const double u = uniform01(rng) * total;
    k = 0;
    while (k + 1 < H && cumulative[k] <= u) ++k;

    s.assignments[t] = k;
    ++s.doc_topic[k * N + j];
    ++s.word_topic[i * H + k];
    ++s.topic_total[k];
  }
  assert(s.consistent(data));
}

ParameterDraw draw_parameters(const ChainState &s, const GibbsConfig &config, Rng &rng) {
  const std::size_t M = s.vocab_size, H = s.num_topics, N = s.num_docs;
  Matrix a(M, H), b(H, N);

  std::vector<double> conc(M), column(M);
  for (std::size_t k = 0; k < H; ++k) {
    for (std::size_t i = 0; i < M; ++i) conc[i] = config.beta + s.word_count(i, k);
    sample_dirichlet(rng, conc, column);
    for (std::size_t i = 0; i < M; ++i) a(i, k) = column[i];
  }

  conc.resize(H);
  column.resize(H);
  for (std::size_t j = 0; j < N; ++j) {
    if (H == 1) {
      b(0, j) = 1.0;
      continue;
    }
    for (std::size_t k = 0; k < H; ++k) conc[k] = config.alpha + s.doc_count(k, j);
    sample_dirichlet(rng, conc, column);
    for (std::size_t k = 0; k < H; ++k) b(k, j) = column[k];
  }
  return {StochasticMatrix(std::move(a)), StochasticMatrix(std::move(b))};
}

PosteriorDraws run_gibbs(const Dataset &data, int num_topics, const GibbsConfig &config,
                         const std::function<void(long, const ChainState &)> &on_sweep) {
  config.validate();
  Rng rng(config.seed);
  ChainState state = init_chain(data, num_topics, rng);
  long sweep_index = 0;
  const auto step = [&] {
    sweep(state, data, config, rng);
    ++sweep_index;
    if (on_sweep) on_sweep(sweep_index, state);
  };

  for (int s = 0; s < config.burn_in; ++s) step();
  PosteriorDraws draws;
  draws.reserve(config.num_draws);
  for (int d = 0; d < config.num_draws; ++d) {
    for (int s = 0; s < config.thinning; ++s) step();
    draws.push_back(draw_parameters(state, config, rng));
  }
  return draws;
}

PosteriorDraws run_gibbs(const Dataset &data, int num_topics, const GibbsConfig &config) {
  return run_gibbs(data, num_topics, config, {});
}

} // namespace ldarlct
