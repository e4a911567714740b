// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any selected criterion fails.
#include "ldarlct/estimator.hpp"
#include "ldarlct/harness.hpp"
#include "ldarlct/rlct.hpp"
#include "oracles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>

using namespace ldarlct;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void for_each_shape(int max_mn, int max_h, const std::function<void(const LdaShape &)> &fn) {
  for (int M = 2; M <= max_mn; ++M)
    for (int N = 2; N <= max_mn; ++N)
      for (int H0 = 1; H0 <= max_h; ++H0)
        for (int H = H0; H <= max_h; ++H)
          for (int r = 0; r <= std::min({M - 1, N - 1, H0 - 1}); ++r) fn({M, N, H, H0, r});
}

Outcome exact_table() {
  const Rational expected[] = {Rational(21, 2), Rational(12), Rational(27, 2), Rational(15)};
  std::string got;
  bool ok = true;
  for (int H = 2; H <= 5; ++H) {
    const RlctResult r = lda_rlct({10, 5, H, 2, 1});
    ok = ok && r.lambda == expected[H - 2] && r.multiplicity == 1;
    got += (H > 2 ? ", " : "") + r.lambda.to_string() + " (m=" + std::to_string(r.multiplicity) + ")";
  }
  return {ok, "M=10 N=5 r=1, H=2..5: " + got};
}

Outcome identities() {
  long checked = 0, bad = 0;
  for_each_shape(12, 12, [&](const LdaShape &s) {
    const int M = s.vocab_size, N = s.num_docs, H = s.num_topics, r = s.intrinsic_rank;
    const RlctResult lda = lda_rlct(s), a = mf_rlct(M - 1, N - 1, H - 1, r),
                     b = mf_rlct(M, N, H, r + 1);
    ++checked;
    if (lda.lambda != Rational(M - 1, 2) + a.lambda || lda.lambda != b.lambda - Rational(N, 2) ||
        lda.multiplicity != a.multiplicity || lda.multiplicity != b.multiplicity)
      ++bad;
  });
  return {bad == 0, fmt("%ld shapes, %ld mismatches", checked, bad)};
}

Outcome bound_and_monotone() {
  long checked = 0, bad_bound = 0, bad_equality = 0, bad_mono = 0;
  for_each_shape(12, 12, [&](const LdaShape &s) {
    ++checked;
    const Rational lam = lda_rlct(s).lambda, half(lda_dimension(s), 2);
    if (lam > half) ++bad_bound;
    if ((lam == half) != (s.num_topics == 1 && s.true_topics == 1)) ++bad_equality;
    if (s.num_topics < 12) {
      LdaShape up = s;
      ++up.num_topics;
      if (lda_rlct(up).lambda < lam) ++bad_mono;
    }
    if (s.intrinsic_rank + 1 <= std::min({s.vocab_size - 1, s.num_docs - 1, s.true_topics - 1})) {
      LdaShape up = s;
      ++up.intrinsic_rank;
      if (lda_rlct(up).lambda < lam) ++bad_mono;
    }
  });
  return {bad_bound + bad_equality + bad_mono == 0,
          fmt("%ld shapes; bound violations %ld, equality off H=H0=1 %ld, monotonicity %ld",
              checked, bad_bound, bad_equality, bad_mono)};
}

Outcome desk_replication(int replicates, int threads) {
  ExperimentConfig c;  // M=10 N=5 H0=2 n=1000, burn-in 10000, thinning 20, K=1000, exact G_n
  c.replicates = replicates;
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult res = run_experiment(c, threads);
  const double minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60.0;
  bool ok = res.intrinsic_rank == 1 && replicates >= 20 && minutes <= 30.0;
  std::string rows;
  for (const ReportRow &r : res.report.rows) {
    const double tol = std::max(0.5, 2.0 * r.std_dev / std::sqrt(static_cast<double>(replicates)));
    const bool row_ok = r.abs_diff <= tol && r.std_dev >= 0.4 && r.std_dev <= 2.5;
    ok = ok && row_ok;
    rows += fmt("; H=%d %s vs %.3f+-%.3f |d|=%.3f%s", r.num_topics,
                r.theory.lambda.to_string().c_str(), r.lambda_hat, r.std_dev, r.abs_diff,
                row_ok ? "" : " (out)");
  }
  return {ok, fmt("D=%d, %.1f min", replicates, minutes) + rows};
}

Outcome regular_case(int threads) {
  ExperimentConfig c;
  c.vocab_size = 3;
  c.num_docs = 2;
  c.true_topics = 1;
  c.topic_counts = {1};
  c.sample_size = 5000;
  c.replicates = 20;
  c.seed = 31337;
  const ExperimentResult res = run_experiment(c, threads);
  const ReportRow &r = res.report.rows.front();
  const double tol = 3.0 * r.std_dev / std::sqrt(20.0);
  return {std::abs(r.lambda_hat - 1.0) <= tol && r.theory.lambda == Rational(1),
          fmt("lambda_hat=%.4f std=%.4f, |lambda_hat - 1|=%.4f, tolerance %.4f", r.lambda_hat,
              r.std_dev, std::abs(r.lambda_hat - 1.0), tol)};
}

Outcome rank_oracle() {
  Rng rng(606);
  const auto random_stochastic = [&](int rows, int cols) {
    Matrix m(rows, cols);
    std::vector<double> ones(rows, 1.0), col(rows);
    for (int c = 0; c < cols; ++c) {
      sample_dirichlet(rng, ones, col);
      for (int r = 0; r < rows; ++r) m(r, c) = col[r];
    }
    return m;
  };
  int agree = 0, deficient = 0;
  for (int t = 0; t < 100; ++t) {
    const int H0 = 1 + t % 5;
    const int M = 2 + static_cast<int>(rng() % 8), N = 2 + static_cast<int>(rng() % 8);
    Matrix a = random_stochastic(M, H0), b = random_stochastic(H0, N);
    if (t % 3 == 0 && H0 >= 2)
      for (int i = 0; i < M; ++i) a(i, H0 - 1) = a(i, 0);
    if (t % 4 == 1 && N >= 3)
      for (int k = 0; k < H0; ++k) b(k, N - 1) = b(k, 1);
    const StochasticMatrix sa(a), sb(b);
    const int exact = oracle::exact_rank_r(sa, sb);
    if (exact < std::min({M - 1, N - 1, H0 - 1})) ++deficient;
    if (rank_r(sa, sb) == exact) ++agree;
  }
  return {agree == 100, fmt("%d/100 agree (%d rank-deficient instances)", agree, deficient)};
}

Outcome micro_sampler() {
  const Dataset d(2, 1, {Token{0, 0}, Token{0, 1}, Token{0, 0}});
  GibbsConfig cfg;
  const auto exact = oracle::enumerate_posterior(d, 2, cfg.alpha, cfg.beta);
  std::vector<double> counts(exact.size(), 0.0);
  Rng rng(2718);
  ChainState s = init_chain(d, 2, rng);
  for (int i = 0; i < 1000; ++i) sweep(s, d, cfg, rng);
  const long sweeps = 1000000;
  for (long i = 0; i < sweeps; ++i) {
    sweep(s, d, cfg, rng);
    counts[oracle::assignment_code(s.assignments, 2)] += 1.0;
  }
  double tv = 0.0;
  for (std::size_t c = 0; c < exact.size(); ++c) tv += 0.5 * std::abs(counts[c] / sweeps - exact[c]);
  return {tv <= 0.01, fmt("TV distance %.5f over %ld sweeps (limit 0.01)", tv, sweeps)};
}

Outcome estimator_cross_check() {
  Rng truth_rng(808);
  const TrueModel t = sample_true_model(10, 5, 2, truth_rng);
  int within = 0;
  double worst = 0.0;
  for (int set = 0; set < 10; ++set) {
    Rng rng(derive_seed(909, {static_cast<std::uint64_t>(set)}));
    const Dataset d = generate_dataset(t, 1000, rng);
    GibbsConfig cfg;
    cfg.burn_in = 1000;
    cfg.thinning = 5;
    cfg.num_draws = 200;
    cfg.seed = rng();
    const PosteriorDraws draws = run_gibbs(d, 2 + set % 4, cfg);
    const double exact = gen_error_exact(draws, t);
    const MonteCarloEstimate mc = gen_error_mc(draws, t, 200000, rng);
    const double z = std::abs(mc.value - exact) / mc.std_error;
    worst = std::max(worst, z);
    if (z <= 3.0) ++within;
  }
  return {within == 10, fmt("%d/10 draw sets within 3 standard errors (largest %.2f)", within, worst)};
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  int replicates = 20;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--only", only, "run only these criteria (1-8)")->check(CLI::Range(1, 8));
  app.add_option("--replicates", replicates, "replicates D for the desk-scale run (>= 20 to pass)");
  app.add_option("-j,--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
      {"exact learning coefficients for M=10, N=5, H=2..5", exact_table},
      {"cross-formula identity over the grid", identities},
      {"bound lambda <= d/2 and monotonicity", bound_and_monotone},
      {"desk-scale replication", [&] { return desk_replication(replicates, threads); }},
      {"regular case H=H0=1, M=3, N=2", [&] { return regular_case(threads); }},
      {"rank_r against exact rational rank", rank_oracle},
      {"sampler on the enumerable micro instance", micro_sampler},
      {"exact vs Monte Carlo generalization error", estimator_cross_check},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
