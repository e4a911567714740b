#include "ldarlct/rlct.hpp"

#include "ldarlct/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ldarlct {
namespace {

using std::int64_t;

std::string describe(const LdaShape &s) {
  return "(M=" + std::to_string(s.vocab_size) + ", N=" + std::to_string(s.num_docs) +
         ", H=" + std::to_string(s.num_topics) + ", H0=" + std::to_string(s.true_topics) +
         ", r=" + std::to_string(s.intrinsic_rank) + ")";
}

} // namespace

void LdaShape::validate() const {
  const auto bad = [this](const std::string &what) {
    fail(ErrorCode::invalid_shape, "invalid LDA shape " + describe(*this) + ": " + what);
  };
  if (vocab_size < 2) bad("vocabulary size M must be >= 2");
  if (num_docs < 2) bad("document count N must be >= 2");
  if (true_topics < 1) bad("true topic count H0 must be >= 1");
  if (num_topics < true_topics) bad("model topic count H must be >= H0");
  const int max_rank = std::min({vocab_size - 1, num_docs - 1, true_topics - 1});
  if (intrinsic_rank < 0 || intrinsic_rank > max_rank)
    bad("intrinsic rank r must lie in [0, min(M-1, N-1, H0-1)] = [0, " +
        std::to_string(max_rank) + "]");
}

LdaRlctCase lda_rlct_case(const LdaShape &shape) {
  shape.validate();
  const int64_t M = shape.vocab_size, N = shape.num_docs, H = shape.num_topics,
                r = shape.intrinsic_rank;
  if (N + r + 1 <= M + H && M + r + 1 <= N + H && H + r + 1 <= M + N)
    return (M + N + H + r) % 2 == 1 ? LdaRlctCase::balanced_odd : LdaRlctCase::balanced_even;
  if (M + H < N + r + 1) return LdaRlctCase::vocab_limited;
  if (N + H < M + r + 1) return LdaRlctCase::docs_limited;
  return LdaRlctCase::saturated;
}

RlctResult lda_rlct(const LdaShape &shape) {
  const LdaRlctCase which = lda_rlct_case(shape);
  const int64_t M = shape.vocab_size, N = shape.num_docs, H = shape.num_topics,
                r = shape.intrinsic_rank;
  const Rational half_docs(N, 2);
  switch (which) {
  case LdaRlctCase::balanced_odd:
  case LdaRlctCase::balanced_even: {
    const int64_t s = H + r + 1;
    int64_t numer = 2 * s * (M + N) - (M - N) * (M - N) - s * s;
    int multiplicity = 1;
    if (which == LdaRlctCase::balanced_even) {
      numer += 1;
      multiplicity = 2;
    }
    return {Rational(numer, 8) - half_docs, multiplicity};
  }
  case LdaRlctCase::vocab_limited:
    return {Rational(M * H + N * (r + 1) - H * (r + 1) - N, 2), 1};
  case LdaRlctCase::docs_limited:
    return {Rational(N * H + M * (r + 1) - H * (r + 1) - N, 2), 1};
  case LdaRlctCase::saturated:
    return {Rational(M * N - N, 2), 1};
  }
  fail(ErrorCode::invalid_shape, "unreachable RLCT case");
}

RlctResult mf_rlct(int rows, int cols, int inner, int rank) {
  const auto bad = [&](const std::string &what) {
    fail(ErrorCode::invalid_shape,
         "invalid factorization shape (rows=" + std::to_string(rows) +
             ", cols=" + std::to_string(cols) + ", inner=" + std::to_string(inner) +
             ", rank=" + std::to_string(rank) + "): " + what);
  };
  if (rows < 1) bad("rows must be >= 1");
  if (cols < 1) bad("cols must be >= 1");
  if (inner < 0) bad("inner dimension must be >= 0");
  if (rank < 0 || rank > std::min({rows, cols, inner})) bad("rank must lie in [0, min(rows, cols, inner)]");

  const int64_t m = rows, n = cols, h = inner, r = rank;
  if (n + r <= m + h && m + r <= n + h && h + r <= m + n) {
    const int64_t s = h + r;
    const int64_t numer = 2 * s * (m + n) - (m - n) * (m - n) - s * s;
    if ((m + n + h + r) % 2 == 0) return {Rational(numer, 8), 1};
    return {Rational(numer + 1, 8), 2};
  }
  if (m + h < n + r) return {Rational(m * h + n * r - h * r, 2), 1};
  if (n + h < m + r) return {Rational(n * h + m * r - h * r, 2), 1};
  return {Rational(m * n, 2), 1};
}

int64_t lda_dimension(const LdaShape &shape) {
  shape.validate();
  const int64_t M = shape.vocab_size, N = shape.num_docs, H = shape.num_topics;
  return (M - 1) * H + (H - 1) * N;
}

double expected_generalization_error(const Rational &lambda, int multiplicity, double n) {
  require(n >= 3.0, ErrorCode::domain, "generalization error curve needs n >= 3");
  require(multiplicity >= 1, ErrorCode::domain, "multiplicity must be >= 1");
  return lambda.to_double() / n - (multiplicity - 1) / (n * std::log(n));
}

double free_energy_penalty(const Rational &lambda, int multiplicity, double n) {
  require(n >= 16.0, ErrorCode::domain, "free energy penalty needs n >= 16");
  require(multiplicity >= 1, ErrorCode::domain, "multiplicity must be >= 1");
  const double log_n = std::log(n);
  return lambda.to_double() * log_n - (multiplicity - 1) * std::log(log_n);
}

std::vector<CurvePoint> AsymptoticCurve::evaluate(std::span<const double> sample_sizes) const {
  std::vector<CurvePoint> out;
  out.reserve(sample_sizes.size());
  for (double n : sample_sizes) {
    require(n >= 16.0, ErrorCode::domain, "learning curve sample sizes must be >= 16");
    CurvePoint p;
    p.sample_size = n;
    p.lda_error = expected_generalization_error(rlct.lambda, rlct.multiplicity, n);
    if (regular_dimension) p.regular_error = static_cast<double>(*regular_dimension) / (2.0 * n);
    out.push_back(p);
  }
  return out;
}

std::vector<double> geometric_grid(double first, double last, int count) {
  require(count >= 1, ErrorCode::invalid_argument, "grid needs at least one point");
  require(first > 0.0 && last >= first, ErrorCode::invalid_argument,
          "grid bounds must satisfy 0 < first <= last");
  if (count == 1) return {first};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double ratio = std::log(last / first) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = first * std::exp(ratio * i);
  out.front() = first;
  out.back() = last;
  return out;
}

} // namespace ldarlct
