#pragma once

#include "ldarlct/lda_model.hpp"
#include "ldarlct/matrix.hpp"
#include "ldarlct/random.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ldarlct {

struct GibbsConfig {
  double alpha = 1.0; // document-topic Dirichlet concentration
  double beta = 1.0;  // topic-word Dirichlet concentration
  int burn_in = 10000;
  int thinning = 20;
  int num_draws = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Topic assignments plus the count tables the collapsed conditional needs.
struct ChainState {
  int num_topics = 0;
  int vocab_size = 0;
  int num_docs = 0;
  std::vector<int> assignments;     // per token
  std::vector<int> doc_topic;       // H x N, [k * N + j]
  std::vector<int> word_topic;      // M x H, [i * H + k]
  std::vector<int> topic_total;     // H

  int doc_count(int topic, int doc) const { return doc_topic[topic * num_docs + doc]; }
  int word_count(int word, int topic) const { return word_topic[word * num_topics + topic]; }

  /// True when every table agrees with `assignments` over `data`.
  bool consistent(const Dataset &data) const;
};

struct ParameterDraw {
  StochasticMatrix topic_word; // A, M x H
  StochasticMatrix doc_topic;  // B, H x N
};

using PosteriorDraws = std::vector<ParameterDraw>;

ChainState init_chain(const Dataset &data, int num_topics, Rng &rng);

/// One systematic scan resampling every token's topic from its collapsed
/// conditional.
void sweep(ChainState &state, const Dataset &data, const GibbsConfig &config, Rng &rng);

/// (A, B) from their Dirichlet full conditionals given the assignments.
ParameterDraw draw_parameters(const ChainState &state, const GibbsConfig &config, Rng &rng);

/// burn_in sweeps, then one retained draw after every `thinning` sweeps until
/// num_draws draws exist. Seeded from config.seed.
PosteriorDraws run_gibbs(const Dataset &data, int num_topics, const GibbsConfig &config);

/// Same schedule with an observer called after every sweep (sweep index is
/// 1-based). Used by tests that track assignment frequencies.
PosteriorDraws run_gibbs(const Dataset &data, int num_topics, const GibbsConfig &config,
                         const std::function<void(long, const ChainState &)> &on_sweep);

} // namespace ldarlct
