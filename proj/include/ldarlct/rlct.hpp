#pragma once

#include "ldarlct/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ldarlct {

/// Sizes of an LDA learning problem plus the intrinsic rank of the truth.
struct LdaShape {
  int vocab_size = 0;     // words, >= 2
  int num_docs = 0;       // documents, >= 2
  int num_topics = 0;     // topics in the model, >= true_topics
  int true_topics = 0;    // topics in the truth, >= 1
  int intrinsic_rank = 0; // rank of the centred truth product, see rank_r()

  /// Throws Error(invalid_shape) naming the first violated constraint.
  void validate() const;
};

struct RlctResult {
  Rational lambda;
  int multiplicity = 1;

  friend bool operator==(const RlctResult &, const RlctResult &) = default;
};

/// Which branch of the four-way case analysis produced an LDA result.
enum class LdaRlctCase {
  balanced_odd,   // all three triangle inequalities hold, M+N+H+r odd
  balanced_even,  // same, M+N+H+r even (multiplicity 2)
  vocab_limited,  // M+H < N+r+1
  docs_limited,   // N+H < M+r+1
  saturated,      // M+N < H+r+1
};

LdaRlctCase lda_rlct_case(const LdaShape &shape);

/// Learning coefficient and multiplicity of LDA.
RlctResult lda_rlct(const LdaShape &shape);

/// Learning coefficient of the unconstrained factorization ||UV - U0V0||^2
/// with U rows x inner, V inner x cols and rank(U0V0) = rank (reduced rank
/// regression). inner = rank = 0 is the empty factorization, lambda = 0.
RlctResult mf_rlct(int rows, int cols, int inner, int rank);

/// Free parameter count (M-1)H + (H-1)N of the stochastic factorization.
std::int64_t lda_dimension(const LdaShape &shape);

/// lambda/n - (m-1)/(n log n); needs n >= 3.
double expected_generalization_error(const Rational &lambda, int multiplicity, double n);

/// lambda log n - (m-1) log log n; needs n >= 16.
double free_energy_penalty(const Rational &lambda, int multiplicity, double n);

struct CurvePoint {
  double sample_size = 0.0;
  double lda_error = 0.0;
  std::optional<double> regular_error; // d/(2n) when a dimension is supplied
};

/// Theoretical learning curve on a grid of sample sizes, each >= 16.
struct AsymptoticCurve {
  RlctResult rlct;
  std::optional<std::int64_t> regular_dimension;

  std::vector<CurvePoint> evaluate(std::span<const double> sample_sizes) const;
};

/// `count` sample sizes spaced geometrically from `first` to `last` inclusive.
std::vector<double> geometric_grid(double first, double last, int count);

} // namespace ldarlct
