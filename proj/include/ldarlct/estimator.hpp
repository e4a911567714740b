#pragma once

#include "ldarlct/gibbs.hpp"
#include "ldarlct/lda_model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ldarlct {

/// log of the posterior-averaged probability (1/K) sum_k p(token | w_k).
double predictive_log_prob(const PosteriorDraws &draws, const Token &token);

struct WaicResult {
  double empirical_loss = 0.0;      // T_n
  double functional_variance = 0.0; // V_n
  double waic = 0.0;                // W_n = T_n + V_n / n
};

/// Needs at least two draws.
WaicResult waic(const PosteriorDraws &draws, const Dataset &data);

/// KL from the truth to the predictive distribution, exact over M x N cells.
double gen_error_exact(const PosteriorDraws &draws, const TrueModel &model);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// The same quantity averaged over `test_size` fresh tokens from the truth.
MonteCarloEstimate gen_error_mc(const PosteriorDraws &draws, const TrueModel &model,
                                std::size_t test_size, Rng &rng);

enum class GnMode { exact, monte_carlo };

struct LossReport {
  double generalization_error = 0.0; // G_n
  double empirical_entropy = 0.0;    // S_n
  double empirical_loss = 0.0;       // T_n
  double functional_variance = 0.0; // V_n
  double waic = 0.0;                 // W_n
  double lambda_sample = 0.0;        // n (G_n + W_n - S_n) / 2
};

struct ReplicateOptions {
  GnMode gn_mode = GnMode::exact;
  std::size_t test_size = 0; // n_T; used only in monte_carlo mode
};

/// Loss quantities of one fitted posterior on its training data.
LossReport evaluate_losses(const PosteriorDraws &draws, const Dataset &data,
                           const TrueModel &model, const ReplicateOptions &options, Rng &rng);

/// One full replicate: fresh dataset of size n, Gibbs posterior with H topics,
/// then the loss report. Every random stream is derived from gibbs.seed. The
/// posterior draws are moved into `keep_draws` when it is non-null.
LossReport lambda_replicate(const TrueModel &model, int num_topics, std::size_t n,
                            const GibbsConfig &gibbs, const ReplicateOptions &options = {},
                            PosteriorDraws *keep_draws = nullptr);

struct LambdaEstimate {
  std::vector<double> samples;
  double mean = 0.0;
  double std_dev = 0.0; // unbiased, D - 1 divisor

  std::size_t count() const noexcept { return samples.size(); }
};

/// Needs at least two samples.
LambdaEstimate aggregate(std::span<const double> samples);

} // namespace ldarlct
