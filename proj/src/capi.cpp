#include "ldarlct/ldarlct.h"

#include "ldarlct/error.hpp"
#include "ldarlct/harness.hpp"
#include "ldarlct/text_io.hpp"
#include "ldarlct/version.hpp"

#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <new>
#include <optional>
#include <string>

using namespace ldarlct;

struct ldarlct_truth {
  TrueModel model;
};

struct ldarlct_experiment {
  ExperimentConfig config;
  std::optional<ExperimentResult> result;
};

struct ldarlct_report {
  ExperimentReport report;
};

namespace {

thread_local std::string g_last_error;

ldarlct_status to_status(ErrorCode code) {
  switch (code) {
  case ErrorCode::invalid_shape: return LDARLCT_ERR_INVALID_SHAPE;
  case ErrorCode::invalid_argument: return LDARLCT_ERR_INVALID_ARGUMENT;
  case ErrorCode::domain: return LDARLCT_ERR_DOMAIN;
  case ErrorCode::io: return LDARLCT_ERR_IO;
  case ErrorCode::parse: return LDARLCT_ERR_PARSE;
  case ErrorCode::rejection_limit: return LDARLCT_ERR_REJECTION_LIMIT;
  }
  return LDARLCT_ERR_INTERNAL;
}

template <class F> ldarlct_status guarded(F &&body) {
  try {
    g_last_error.clear();
    body();
    return LDARLCT_OK;
  } catch (const Error &e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
    return LDARLCT_ERR_INTERNAL;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return LDARLCT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LDARLCT_ERR_INTERNAL;
  }
}

// Null pointers get their own status rather than INTERNAL.
template <class F> ldarlct_status guarded_nonnull(bool all_present, F &&body) {
  if (!all_present) {
    g_last_error = "null argument";
    return LDARLCT_ERR_NULL_ARGUMENT;
  }
  return guarded(std::forward<F>(body));
}

LdaShape from_c(const ldarlct_shape &s) {
  return {s.vocab_size, s.num_docs, s.num_topics, s.true_topics, s.intrinsic_rank};
}

ldarlct_rational to_c(const Rational &r) { return {r.num(), r.den()}; }

Rational from_c(ldarlct_rational r) { return Rational(r.num, r.den); }

ldarlct_report_row to_c(const ReportRow &r) {
  ldarlct_report_row out{};
  out.num_topics = r.num_topics;
  out.lambda_theory = to_c(r.theory.lambda);
  out.multiplicity = r.theory.multiplicity;
  out.lambda_hat = r.lambda_hat;
  out.std_dev = r.std_dev;
  out.abs_diff = r.abs_diff;
  out.half_dim = r.half_dim;
  out.replicates = r.replicates;
  return out;
}

// Runs `write` against the file at `path`, or stdout for "-".
template <class F> void with_output(const std::string &path, F &&write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io, "cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  require(static_cast<bool>(out), ErrorCode::io, "write to '" + path + "' failed");
}

std::filesystem::path output_dir(const char *dir) {
  const std::filesystem::path p(dir);
  require(std::filesystem::is_directory(p), ErrorCode::io,
          "output directory '" + p.string() + "' does not exist");
  return p;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_summary_file(const std::filesystem::path &path, ExperimentReport report) {
  report.provenance.emplace_back("generated_at", utc_timestamp());
  with_output(path.string(), [&](std::ostream &os) { write_summary(os, report); });
}

} // namespace

extern "C" {

const char *ldarlct_version(void) { return kVersion; }

const char *ldarlct_status_name(ldarlct_status status) {
  switch (status) {
  case LDARLCT_OK: return "ok";
  case LDARLCT_ERR_INVALID_SHAPE: return "invalid shape";
  case LDARLCT_ERR_INVALID_ARGUMENT: return "invalid argument";
  case LDARLCT_ERR_DOMAIN: return "domain error";
  case LDARLCT_ERR_IO: return "i/o error";
  case LDARLCT_ERR_PARSE: return "parse error";
  case LDARLCT_ERR_REJECTION_LIMIT: return "rejection limit exceeded";
  case LDARLCT_ERR_NULL_ARGUMENT: return "null argument";
  case LDARLCT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char *ldarlct_last_error(void) { return g_last_error.c_str(); }

ldarlct_status ldarlct_lda_rlct(const ldarlct_shape *shape, ldarlct_rational *lambda,
                                int *multiplicity) {
  return guarded_nonnull(shape && lambda && multiplicity, [&] {
    const RlctResult r = lda_rlct(from_c(*shape));
    *lambda = to_c(r.lambda);
    *multiplicity = r.multiplicity;
  });
}

ldarlct_status ldarlct_mf_rlct(int rows, int cols, int inner, int rank, ldarlct_rational *lambda,
                               int *multiplicity) {
  return guarded_nonnull(lambda && multiplicity, [&] {
    const RlctResult r = mf_rlct(rows, cols, inner, rank);
    *lambda = to_c(r.lambda);
    *multiplicity = r.multiplicity;
  });
}

ldarlct_status ldarlct_lda_dimension(const ldarlct_shape *shape, int64_t *dimension) {
  return guarded_nonnull(shape && dimension,
                         [&] { *dimension = lda_dimension(from_c(*shape)); });
}

ldarlct_status ldarlct_parse_rational(const char *text, ldarlct_rational *out) {
  return guarded_nonnull(text && out, [&] { *out = to_c(Rational::parse(text)); });
}

ldarlct_status ldarlct_format_rational(ldarlct_rational value, char *buf, size_t size) {
  return guarded_nonnull(buf && size > 0, [&] {
    const std::string s = from_c(value).to_string();
    const std::size_t n = std::min(s.size(), size - 1);
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  });
}

ldarlct_status ldarlct_expected_generalization_error(ldarlct_rational lambda, int multiplicity,
                                                     double n, double *out) {
  return guarded_nonnull(out != nullptr, [&] {
    *out = expected_generalization_error(from_c(lambda), multiplicity, n);
  });
}

ldarlct_status ldarlct_free_energy_penalty(ldarlct_rational lambda, int multiplicity, double n,
                                           double *out) {
  return guarded_nonnull(out != nullptr,
                         [&] { *out = free_energy_penalty(from_c(lambda), multiplicity, n); });
}

ldarlct_status ldarlct_write_rlct_table(int vocab_size, int num_docs, int true_topics,
                                        int intrinsic_rank, int min_topics, int max_topics,
                                        const char *path) {
  return guarded_nonnull(path != nullptr, [&] {
    const auto rows =
        rlct_table(vocab_size, num_docs, true_topics, intrinsic_rank, min_topics, max_topics);
    with_output(path, [&](std::ostream &os) { write_rlct_csv(os, rows); });
  });
}

ldarlct_status ldarlct_write_curve(ldarlct_rational lambda, int multiplicity, double n_min,
                                   double n_max, int points, int64_t dimension, const char *path) {
  return guarded_nonnull(path != nullptr, [&] {
    AsymptoticCurve curve;
    curve.rlct = {from_c(lambda), multiplicity};
    if (dimension > 0) curve.regular_dimension = dimension;
    const auto grid = geometric_grid(n_min, n_max, points);
    const auto values = curve.evaluate(grid);
    with_output(path, [&](std::ostream &os) { write_curve_csv(os, values); });
  });
}

ldarlct_status ldarlct_truth_sample(int vocab_size, int num_docs, int true_topics, uint64_t seed,
                                    ldarlct_truth **out) {
  return guarded_nonnull(out != nullptr, [&] {
    Rng rng(seed);
    *out = new ldarlct_truth{sample_true_model(vocab_size, num_docs, true_topics, rng)};
  });
}

ldarlct_status ldarlct_truth_load(const char *path, ldarlct_truth **out) {
  return guarded_nonnull(path && out, [&] {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::io, std::string("cannot open truth '") + path + "'");
    *out = new ldarlct_truth{read_truth(in)};
  });
}

ldarlct_status ldarlct_truth_save(const ldarlct_truth *truth, const char *path) {
  return guarded_nonnull(truth && path, [&] {
    with_output(path, [&](std::ostream &os) { write_truth(os, truth->model); });
  });
}

ldarlct_status ldarlct_truth_dims(const ldarlct_truth *truth, int *vocab_size, int *num_docs,
                                  int *true_topics) {
  return guarded_nonnull(truth && vocab_size && num_docs && true_topics, [&] {
    *vocab_size = static_cast<int>(truth->model.vocab_size());
    *num_docs = static_cast<int>(truth->model.num_docs());
    *true_topics = static_cast<int>(truth->model.num_topics());
  });
}

ldarlct_status ldarlct_truth_rank(const ldarlct_truth *truth, int *intrinsic_rank) {
  return guarded_nonnull(truth && intrinsic_rank, [&] {
    *intrinsic_rank = rank_r(truth->model.topic_word, truth->model.doc_topic);
  });
}

ldarlct_status ldarlct_truth_write_dataset(const ldarlct_truth *truth, size_t n, uint64_t seed,
                                           const char *path) {
  return guarded_nonnull(truth && path, [&] {
    Rng rng(seed);
    const Dataset data = generate_dataset(truth->model, n, rng);
    with_output(path, [&](std::ostream &os) { write_dataset(os, data); });
  });
}

void ldarlct_truth_free(ldarlct_truth *truth) { delete truth; }

ldarlct_status ldarlct_experiment_create(ldarlct_experiment **out) {
  return guarded_nonnull(out != nullptr, [&] { *out = new ldarlct_experiment{}; });
}

ldarlct_status ldarlct_experiment_load_config(ldarlct_experiment *exp, const char *path) {
  return guarded_nonnull(exp && path, [&] {
    exp->config = load_config(path);
    exp->result.reset();
  });
}

ldarlct_status ldarlct_experiment_set(ldarlct_experiment *exp, const char *key, const char *value) {
  return guarded_nonnull(exp && key && value, [&] {
    exp->config.set(key, value);
    exp->result.reset();
  });
}

ldarlct_status ldarlct_experiment_run(ldarlct_experiment *exp, int threads,
                                      ldarlct_progress_fn progress, void *user) {
  return guarded_nonnull(exp != nullptr, [&] {
    ProgressFn fn;
    if (progress) fn = [progress, user](std::size_t done, std::size_t total) { progress(done, total, user); };
    exp->result = run_experiment(exp->config, threads, fn);
  });
}

ldarlct_status ldarlct_experiment_write(const ldarlct_experiment *exp, const char *out_dir) {
  return guarded_nonnull(exp && out_dir, [&] {
    require(exp->result.has_value(), ErrorCode::invalid_argument, "experiment has not been run");
    const auto dir = output_dir(out_dir);
    const ExperimentResult &res = *exp->result;
    with_output((dir / "replicates.csv").string(),
                [&](std::ostream &os) { write_replicate_csv(os, res.replicates); });
    with_output((dir / "report.csv").string(),
                [&](std::ostream &os) { write_report_csv(os, res.report); });
    with_output((dir / "truth.txt").string(), [&](std::ostream &os) { write_truth(os, res.truth); });
    write_summary_file(dir / "summary.txt", res.report);
    for (const auto &[topics, draws] : res.dumped_draws) {
      with_output((dir / ("draws_H" + std::to_string(topics) + ".txt")).string(),
                  [&](std::ostream &os) { write_draws(os, draws); });
    }
  });
}

ldarlct_status ldarlct_experiment_row_count(const ldarlct_experiment *exp, size_t *count) {
  return guarded_nonnull(exp && count, [&] {
    require(exp->result.has_value(), ErrorCode::invalid_argument, "experiment has not been run");
    *count = exp->result->report.rows.size();
  });
}

ldarlct_status ldarlct_experiment_get_row(const ldarlct_experiment *exp, size_t index,
                                      ldarlct_report_row *row) {
  return guarded_nonnull(exp && row, [&] {
    require(exp->result.has_value(), ErrorCode::invalid_argument, "experiment has not been run");
    const auto &rows = exp->result->report.rows;
    require(index < rows.size(), ErrorCode::invalid_argument, "report row index out of range");
    *row = to_c(rows[index]);
  });
}

void ldarlct_experiment_free(ldarlct_experiment *exp) { delete exp; }

ldarlct_status ldarlct_report_from_csv(const char *csv_path, const ldarlct_shape *base,
                                       ldarlct_report **out) {
  return guarded_nonnull(csv_path && base && out, [&] {
    std::ifstream in(csv_path);
    require(static_cast<bool>(in), ErrorCode::io, std::string("cannot open '") + csv_path + "'");
    const auto records = read_replicate_csv(in);
    require(!records.empty(), ErrorCode::parse, std::string(csv_path) + ": no replicate rows");
    LdaShape shape = from_c(*base);
    shape.num_topics = std::max(shape.true_topics, 1);
    *out = new ldarlct_report{summarize(records, shape)};
    (*out)->report.provenance.emplace_back("source", csv_path);
  });
}

ldarlct_status ldarlct_report_write(const ldarlct_report *report, const char *out_dir) {
  return guarded_nonnull(report && out_dir, [&] {
    const auto dir = output_dir(out_dir);
    with_output((dir / "report.csv").string(),
                [&](std::ostream &os) { write_report_csv(os, report->report); });
    write_summary_file(dir / "summary.txt", report->report);
  });
}

ldarlct_status ldarlct_report_row_count(const ldarlct_report *report, size_t *count) {
  return guarded_nonnull(report && count, [&] { *count = report->report.rows.size(); });
}

ldarlct_status ldarlct_report_get_row(const ldarlct_report *report, size_t index,
                                  ldarlct_report_row *row) {
  return guarded_nonnull(report && row, [&] {
    require(index < report->report.rows.size(), ErrorCode::invalid_argument,
            "report row index out of range");
    *row = to_c(report->report.rows[index]);
  });
}

void ldarlct_report_free(ldarlct_report *report) { delete report; }

} // extern "C"
