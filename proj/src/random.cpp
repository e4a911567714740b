#include "ldarlct/random.hpp"

#include "ldarlct/error.hpp"

#include <algorithm>

namespace ldarlct {

void sample_dirichlet(Rng &rng, std::span<const double> concentration, std::span<double> out) {
  require(concentration.size() == out.size() && !out.empty(), ErrorCode::invalid_argument,
          "dirichlet size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    require(concentration[i] > 0.0, ErrorCode::invalid_argument,
            "dirichlet concentration must be positive");
    std::gamma_distribution<double> gamma(concentration[i], 1.0);
    out[i] = gamma(rng);
    total += out[i];
  }
  if (total > 0.0) {
    for (double &v : out) v /= total;
    // re-normalize so the column sum is 1 to the last ulp or two
    double sum = 0.0;
    for (double v : out) sum += v;
    out.back() = std::max(0.0, out.back() + (1.0 - sum));
    return;
  }
  // every gamma variate underflowed (tiny concentrations); fall back to the
  // largest-concentration vertex
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.size(); ++i)
    if (concentration[i] > concentration[best]) best = i;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i == best ? 1.0 : 0.0;
}

std::size_t sample_categorical(Rng &rng, std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform01(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0.0) return i;
  }
  // rounding: fall back to the last positive weight
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return i;
  fail(ErrorCode::invalid_argument, "categorical weights are all zero");
}

} // namespace ldarlct
