#include "ldarlct/harness.hpp"

#include "ldarlct/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace ldarlct;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.sample_size = 100;
  c.replicates = 3;
  c.topic_counts = {2, 3};
  c.gibbs.burn_in = 20;
  c.gibbs.thinning = 2;
  c.gibbs.num_draws = 10;
  c.seed = 4242;
  return c;
}

std::string replicate_csv(const std::vector<ReplicateRecord> &r) {
  std::ostringstream os;
  write_replicate_csv(os, r);
  return os.str();
}

ReplicateRecord record(int H, int d, double lambda) {
  ReplicateRecord r;
  r.replicate = d;
  r.num_topics = H;
  r.sample_size = 1000;
  r.loss.lambda_sample = lambda;
  r.seed = static_cast<std::uint64_t>(H * 1000 + d);
  return r;
}

std::string parse_error(const std::string &text) {
  std::istringstream is(text);
  try {
    parse_config(is);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::parse);
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE("config text") {
  std::istringstream is("# paper settings\nM = 8\nN=4\nH0 = 3  # three topics\n"
                        "topics = 3..5\nK = 50\nburn_in = 7\ngn_mode = mc\nn_T = 999\n"
                        "doc_weights = 0.1,0.2,0.3,0.4\nseed = 18446744073709551615\n"
                        "per_replicate_truth = true\n");
  const ExperimentConfig c = parse_config(is);
  CHECK(c.vocab_size == 8);
  CHECK(c.num_docs == 4);
  CHECK(c.true_topics == 3);
  CHECK(c.topic_counts == std::vector<int>{3, 4, 5});
  CHECK(c.gibbs.num_draws == 50);
  CHECK(c.gibbs.burn_in == 7);
  CHECK(c.gn_mode == GnMode::monte_carlo);
  CHECK(c.test_size == 999);
  CHECK(c.doc_weights.size() == 4);
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.per_replicate_truth);
  CHECK_NOTHROW(c.validate());

  std::istringstream again(c.to_text());
  CHECK(parse_config(again).to_text() == c.to_text());

  ExperimentConfig d;
  d.set("topics", "2, 4,7..8");
  CHECK(d.topic_counts == std::vector<int>{2, 4, 7, 8});
  CHECK(d.to_text().find("sample_size = 1000") != std::string::npos);
}

TEST_CASE("config errors name the line") {
  CHECK(parse_error("M = 10\nbogus = 1\n").find("line 2") != std::string::npos);
  CHECK(parse_error("M = 10\n\nN five\n").find("line 3") != std::string::npos);
  CHECK(parse_error("gn_mode = sometimes\n").find("line 1") != std::string::npos);
  CHECK(parse_error("topics = 5..2\n").find("line 1") != std::string::npos);
  CHECK(parse_error("seed = -3\n").find("line 1") != std::string::npos);

  ExperimentConfig c;
  c.replicates = 1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.topic_counts = {1, 2};  // H < H0
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.doc_weights = {0.5, 0.5};
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), Error);
}

TEST_CASE("replicate CSV round trip") {
  std::vector<ReplicateRecord> recs{record(2, 1, 10.5), record(2, 2, 1.0 / 3.0)};
  recs[1].loss.generalization_error = 0.0123456789012345678;
  recs[1].loss.functional_variance = 27.75;
  recs[1].seed = 18446744073709551615ULL;
  const std::string text = replicate_csv(recs);
  CHECK(text.rfind("replicate,H,n,G_n,S_n,T_n,V_n,W_n,lambda_sample,seed\n", 0) == 0);
  std::istringstream is(text);
  const auto back = read_replicate_csv(is);
  REQUIRE(back.size() == 2);
  CHECK(back[1].loss.lambda_sample == recs[1].loss.lambda_sample);
  CHECK(back[1].loss.generalization_error == recs[1].loss.generalization_error);
  CHECK(back[1].seed == recs[1].seed);
  CHECK(replicate_csv(back) == text);
}

TEST_CASE("malformed replicate CSV") {
  const auto error_of = [](const std::string &text) -> std::string {
    std::istringstream is(text);
    try {
      read_replicate_csv(is);
    } catch (const Error &e) {
      return e.what();
    }
    return {};
  };
  const std::string header = "replicate,H,n,G_n,S_n,T_n,V_n,W_n,lambda_sample,seed\n";
  CHECK(error_of("").find("line 1") != std::string::npos);
  CHECK(error_of("H,n\n1,2\n").find("line 1") != std::string::npos);
  CHECK(error_of(header + "1,2,1000,0,0,0,0,0,1,5\n1,2,1000\n").find("line 3") != std::string::npos);
  CHECK(error_of(header + "1,2,1000,0,0,0,0,zero,1,5\n").find("line 2") != std::string::npos);
}

TEST_CASE("report from the published table values") {
  // two replicates per H with the published mean and standard deviation
  const double means[] = {10.7901, 12.2534, 13.57114, 14.7951};
  const double stds[] = {0.8591, 0.9510, 1.036, 1.143};
  std::vector<ReplicateRecord> recs;
  for (int h = 0; h < 4; ++h) {
    const double half = stds[h] / std::sqrt(2.0);
    recs.push_back(record(h + 2, 1, means[h] - half));
    recs.push_back(record(h + 2, 2, means[h] + half));
  }
  const LdaShape base{10, 5, 2, 2, 1};
  const ExperimentReport rep = summarize(recs, base);
  REQUIRE(rep.rows.size() == 4);
  const double diffs[] = {0.2901, 0.2534, 0.07114, 0.2049};
  const Rational lambdas[] = {Rational(21, 2), Rational(12), Rational(27, 2), Rational(15)};
  const double half_dims[] = {11.5, 18.5, 25.5, 32.5};
  for (int h = 0; h < 4; ++h) {
    CHECK(rep.rows[h].num_topics == h + 2);
    CHECK(rep.rows[h].theory.lambda == lambdas[h]);
    CHECK(rep.rows[h].abs_diff == doctest::Approx(diffs[h]).epsilon(1e-4));
    CHECK(rep.rows[h].std_dev == doctest::Approx(stds[h]));
    CHECK(rep.rows[h].half_dim == half_dims[h]);
  }

  std::mt19937 shuffle_rng(3);
  auto shuffled = recs;
  std::shuffle(shuffled.begin(), shuffled.end(), shuffle_rng);
  std::ostringstream a, b;
  write_report_csv(a, rep);
  write_report_csv(b, summarize(shuffled, base));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("H,lambda_theory,multiplicity,lambda_hat,std,abs_diff,half_dim\n2,10.5,1,", 0) == 0);

  const ExperimentReport single = summarize({record(3, 1, 11.0), record(3, 2, 13.0)}, base);
  REQUIRE(single.rows.size() == 1);
  CHECK(single.rows[0].lambda_hat == 12.0);

  std::ostringstream summary;
  write_summary(summary, rep);
  CHECK(summary.str().find("21/2  1  10.79 +- 0.8591  0.2901  11.5") != std::string::npos);
}

TEST_CASE("rlct table and curve CSV") {
  const auto rows = rlct_table(10, 5, 2, 1, 2, 5);
  std::ostringstream os;
  write_rlct_csv(os, rows);
  CHECK(os.str() == "H,lambda,lambda_exact,multiplicity,half_dim\n"
                    "2,10.5,21/2,1,11.5\n3,12,12,1,18.5\n4,13.5,27/2,1,25.5\n5,15,15,1,32.5\n");
  CHECK(rlct_table(4, 3, 1, 0, 1, 1)[0].rlct.lambda == Rational(3, 2));
  CHECK_THROWS_AS(rlct_table(10, 5, 2, 1, 5, 2), Error);

  const double n[] = {1000};
  std::ostringstream cs;
  write_curve_csv(cs, AsymptoticCurve{{Rational(21, 2), 1}, 23}.evaluate(n));
  CHECK(cs.str() == "n,e_gen_lda,e_gen_regular\n1000,0.010500000000000001,0.0115\n");
}

TEST_CASE("smoke experiment is deterministic across thread counts") {
  ExperimentConfig c = tiny_config();
  c.replicates = 2;
  c.topic_counts = {2};
  const ExperimentResult one = run_experiment(c, 1);
  CHECK(one.replicates.size() == 2);
  CHECK(one.intrinsic_rank == 1);
  REQUIRE(one.report.rows.size() == 1);
  CHECK(one.report.rows[0].theory.lambda == Rational(21, 2));

  c = tiny_config();
  std::size_t calls = 0, last_total = 0;
  const ExperimentResult seq = run_experiment(c, 1, [&](std::size_t, std::size_t total) {
    ++calls;
    last_total = total;
  });
  const ExperimentResult par = run_experiment(c, 3);
  CHECK(calls == 6);
  CHECK(last_total == 6);
  CHECK(replicate_csv(seq.replicates) == replicate_csv(par.replicates));
  for (const auto &r : seq.replicates) CHECK(r.seed == replicate_seed(c.seed, r.num_topics, r.replicate));

  c.seed += 1;
  CHECK(replicate_csv(run_experiment(c, 1).replicates) != replicate_csv(seq.replicates));
}

TEST_CASE("experiment options") {
  ExperimentConfig c = tiny_config();
  c.topic_counts = {2};
  c.dump_draws = true;
  c.gn_mode = GnMode::monte_carlo;
  c.test_size = 5000;
  c.per_replicate_truth = true;
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.dumped_draws.size() == 1);
  CHECK(r.dumped_draws[0].first == 2);
  CHECK(r.dumped_draws[0].second.size() == 10);
  for (const auto &rec : r.replicates) CHECK(std::isfinite(rec.loss.lambda_sample));

  c = tiny_config();
  c.truth_file = "/nonexistent/truth.txt";
  CHECK_THROWS_AS(run_experiment(c), Error);
}
