// Exercises the shared library purely through its C header.
#include "ldarlct/ldarlct.h"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("ldarlct_capi_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("learning coefficients through the C interface") {
  ldarlct_rational lambda{};
  int m = 0;
  const ldarlct_shape shape{10, 5, 4, 2, 1};
  REQUIRE(ldarlct_lda_rlct(&shape, &lambda, &m) == LDARLCT_OK);
  CHECK(lambda.num == 27);
  CHECK(lambda.den == 2);
  CHECK(m == 1);

  REQUIRE(ldarlct_mf_rlct(2, 2, 2, 1, &lambda, &m) == LDARLCT_OK);
  CHECK(lambda.num == 2);
  CHECK(m == 2);

  int64_t d = 0;
  REQUIRE(ldarlct_lda_dimension(&shape, &d) == LDARLCT_OK);
  CHECK(d == 51);

  char buf[32];
  REQUIRE(ldarlct_format_rational({21, 2}, buf, sizeof buf) == LDARLCT_OK);
  CHECK(std::string(buf) == "21/2");
  REQUIRE(ldarlct_format_rational({21, 2}, buf, 3) == LDARLCT_OK);
  CHECK(std::string(buf) == "21");
  REQUIRE(ldarlct_parse_rational("27/2", &lambda) == LDARLCT_OK);
  CHECK((lambda.num == 27 && lambda.den == 2));

  double e = 0;
  REQUIRE(ldarlct_expected_generalization_error({21, 2}, 1, 1000, &e) == LDARLCT_OK);
  CHECK(e == doctest::Approx(0.0105));
  REQUIRE(ldarlct_free_energy_penalty({12, 1}, 1, 1000, &e) == LDARLCT_OK);
  CHECK(e == doctest::Approx(82.8931).epsilon(1e-6));
  CHECK(std::string(ldarlct_version()).size() > 0);
}

TEST_CASE("status codes and error messages") {
  ldarlct_rational lambda{};
  int m = 0;
  const ldarlct_shape bad{10, 5, 1, 2, 1};
  CHECK(ldarlct_lda_rlct(&bad, &lambda, &m) == LDARLCT_ERR_INVALID_SHAPE);
  CHECK(std::strlen(ldarlct_last_error()) > 0);
  CHECK(ldarlct_lda_rlct(nullptr, &lambda, &m) == LDARLCT_ERR_NULL_ARGUMENT);
  CHECK(ldarlct_parse_rational("1/0", &lambda) != LDARLCT_OK);
  CHECK(ldarlct_parse_rational("x", &lambda) == LDARLCT_ERR_PARSE);
  double e = 0;
  CHECK(ldarlct_free_energy_penalty({1, 1}, 1, 10, &e) == LDARLCT_ERR_DOMAIN);
  CHECK(std::string(ldarlct_status_name(LDARLCT_ERR_DOMAIN)).size() > 0);

  const ldarlct_shape good{10, 5, 2, 2, 1};
  REQUIRE(ldarlct_lda_rlct(&good, &lambda, &m) == LDARLCT_OK);
  CHECK(std::string(ldarlct_last_error()).empty());

  ldarlct_experiment *exp = nullptr;
  REQUIRE(ldarlct_experiment_create(&exp) == LDARLCT_OK);
  CHECK(ldarlct_experiment_set(exp, "no_such_key", "1") == LDARLCT_ERR_PARSE);
  CHECK(ldarlct_experiment_set(exp, "D", "1") == LDARLCT_OK);
  CHECK(ldarlct_experiment_run(exp, 1, nullptr, nullptr) == LDARLCT_ERR_INVALID_ARGUMENT);
  size_t rows = 7;
  CHECK(ldarlct_experiment_row_count(exp, &rows) != LDARLCT_OK);
  ldarlct_experiment_free(exp);
  ldarlct_experiment_free(nullptr);
  ldarlct_truth_free(nullptr);
  ldarlct_report_free(nullptr);

  ldarlct_truth *truth = nullptr;
  CHECK(ldarlct_truth_load("/nonexistent/truth.txt", &truth) == LDARLCT_ERR_IO);
  CHECK(truth == nullptr);
}

TEST_CASE("truth files and datasets") {
  const fs::path dir = scratch_dir("truth");
  ldarlct_truth *truth = nullptr;
  REQUIRE(ldarlct_truth_sample(10, 5, 2, 7, &truth) == LDARLCT_OK);
  int M = 0, N = 0, H0 = 0, r = -1;
  REQUIRE(ldarlct_truth_dims(truth, &M, &N, &H0) == LDARLCT_OK);
  REQUIRE(ldarlct_truth_rank(truth, &r) == LDARLCT_OK);
  CHECK((M == 10 && N == 5 && H0 == 2 && r == 1));
  const std::string path = (dir / "truth.txt").string();
  REQUIRE(ldarlct_truth_save(truth, path.c_str()) == LDARLCT_OK);
  const std::string data_path = (dir / "data.txt").string();
  REQUIRE(ldarlct_truth_write_dataset(truth, 25, 3, data_path.c_str()) == LDARLCT_OK);
  ldarlct_truth_free(truth);

  ldarlct_truth *back = nullptr;
  REQUIRE(ldarlct_truth_load(path.c_str(), &back) == LDARLCT_OK);
  REQUIRE(ldarlct_truth_rank(back, &r) == LDARLCT_OK);
  CHECK(r == 1);
  ldarlct_truth_free(back);

  const std::string data = slurp(data_path);
  CHECK(data.rfind("10 5 25\n", 0) == 0);
  CHECK(std::count(data.begin(), data.end(), '\n') == 26);
}

TEST_CASE("experiment run, files and report round trip") {
  const fs::path dir = scratch_dir("experiment");
  ldarlct_experiment *exp = nullptr;
  REQUIRE(ldarlct_experiment_create(&exp) == LDARLCT_OK);
  const char *settings[][2] = {{"n", "80"},      {"D", "2"},        {"topics", "2..3"},
                               {"burn_in", "10"}, {"thinning", "1"}, {"K", "5"},
                               {"dump_draws", "true"}};
  for (const auto &kv : settings) REQUIRE(ldarlct_experiment_set(exp, kv[0], kv[1]) == LDARLCT_OK);
  size_t progress_calls = 0;
  REQUIRE(ldarlct_experiment_run(
              exp, 2, [](size_t, size_t, void *user) { ++*static_cast<size_t *>(user); },
              &progress_calls) == LDARLCT_OK);
  CHECK(progress_calls == 4);
  REQUIRE(ldarlct_experiment_write(exp, dir.string().c_str()) == LDARLCT_OK);
  for (const char *f : {"replicates.csv", "report.csv", "summary.txt", "truth.txt", "draws_H2.txt",
                        "draws_H3.txt"})
    CHECK_MESSAGE(fs::exists(dir / f), f);
  CHECK(slurp(dir / "summary.txt").find("generated_at") != std::string::npos);

  size_t count = 0;
  REQUIRE(ldarlct_experiment_row_count(exp, &count) == LDARLCT_OK);
  REQUIRE(count == 2);
  ldarlct_report_row row{};
  REQUIRE(ldarlct_experiment_get_row(exp, 1, &row) == LDARLCT_OK);
  CHECK(row.num_topics == 3);
  CHECK(row.lambda_theory.num == 12);
  CHECK(row.replicates == 2);
  CHECK(ldarlct_experiment_get_row(exp, 2, &row) == LDARLCT_ERR_INVALID_ARGUMENT);
  CHECK(ldarlct_experiment_write(exp, "/nonexistent/dir") == LDARLCT_ERR_IO);
  ldarlct_experiment_free(exp);

  const ldarlct_shape base{10, 5, 0, 2, 1};
  ldarlct_report *rep = nullptr;
  REQUIRE(ldarlct_report_from_csv((dir / "replicates.csv").string().c_str(), &base, &rep) ==
          LDARLCT_OK);
  REQUIRE(ldarlct_report_row_count(rep, &count) == LDARLCT_OK);
  CHECK(count == 2);
  const fs::path again = scratch_dir("report");
  REQUIRE(ldarlct_report_write(rep, again.string().c_str()) == LDARLCT_OK);
  CHECK(slurp(again / "report.csv") == slurp(dir / "report.csv"));
  ldarlct_report_free(rep);

  std::ofstream(dir / "broken.csv") << "replicate,H,n,G_n,S_n,T_n,V_n,W_n,lambda_sample,seed\n1,2\n";
  CHECK(ldarlct_report_from_csv((dir / "broken.csv").string().c_str(), &base, &rep) ==
        LDARLCT_ERR_PARSE);
  CHECK(std::string(ldarlct_last_error()).find("line 2") != std::string::npos);
}

TEST_CASE("table and curve writers") {
  const fs::path dir = scratch_dir("tables");
  const std::string rlct = (dir / "rlct.csv").string(), curve = (dir / "curve.csv").string();
  REQUIRE(ldarlct_write_rlct_table(10, 5, 2, 1, 2, 5, rlct.c_str()) == LDARLCT_OK);
  CHECK(slurp(rlct).find("5,15,15,1,32.5\n") != std::string::npos);
  REQUIRE(ldarlct_write_curve({21, 2}, 1, 1000, 1000, 1, 23, curve.c_str()) == LDARLCT_OK);
  CHECK(slurp(curve) == "n,e_gen_lda,e_gen_regular\n1000,0.010500000000000001,0.0115\n");
  CHECK(ldarlct_write_curve({21, 2}, 1, 4, 1000, 5, 0, curve.c_str()) == LDARLCT_ERR_DOMAIN);
}
