#pragma once

#include "ldarlct/estimator.hpp"
#include "ldarlct/gibbs.hpp"
#include "ldarlct/lda_model.hpp"
#include "ldarlct/rlct.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ldarlct {

/// Settings of one simulation study. Text form is one `key = value` per line,
/// '#' comments; see ExperimentConfig::set for the keys.
struct ExperimentConfig {
  int vocab_size = 10;
  int num_docs = 5;
  int true_topics = 2;
  std::size_t sample_size = 1000;   // n
  std::size_t test_size = 200000;   // n_T, monte_carlo mode only
  int replicates = 100;             // D
  std::vector<int> topic_counts{2, 3, 4, 5};
  GibbsConfig gibbs;                // gibbs.seed is ignored, streams derive from `seed`
  std::vector<double> doc_weights;  // empty means uniform
  std::uint64_t seed = 20200101;
  GnMode gn_mode = GnMode::exact;
  bool per_replicate_truth = false;
  std::string truth_file;           // load the truth instead of drawing it
  bool dump_draws = false;          // write the first replicate's draws per H

  /// Assign one key from its text value. Throws Error(parse) on unknown keys
  /// or malformed values.
  void set(std::string_view key, std::string_view value);

  void validate() const;

  /// Canonical `key = value` text, readable by parse_config.
  std::string to_text() const;
};

ExperimentConfig parse_config(std::istream &is);
ExperimentConfig load_config(const std::string &path);

struct ReplicateRecord {
  int replicate = 0; // 1-based
  int num_topics = 0;
  std::size_t sample_size = 0;
  LossReport loss;
  std::uint64_t seed = 0;
};

struct ReportRow {
  int num_topics = 0;
  RlctResult theory;
  double lambda_hat = 0.0;
  double std_dev = 0.0;
  double abs_diff = 0.0;
  double half_dim = 0.0;
  std::size_t replicates = 0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, std::string>> provenance;
};

/// Per-H mean and spread of the replicate values with the theoretical column
/// recomputed from `base` (its num_topics is overridden per row). Rows are
/// sorted by H; input order does not matter.
ExperimentReport summarize(const std::vector<ReplicateRecord> &records, const LdaShape &base);

struct ExperimentResult {
  TrueModel truth;
  int intrinsic_rank = 0;
  std::vector<ReplicateRecord> replicates; // ordered by (H position, replicate)
  ExperimentReport report;
  std::vector<std::pair<int, PosteriorDraws>> dumped_draws;
};

/// Called after each replicate with (finished, total). May be invoked from
/// worker threads, never concurrently.
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Seed of replicate `replicate` (1-based) at topic count H.
std::uint64_t replicate_seed(std::uint64_t master, int num_topics, int replicate);

/// Runs every (H, replicate) job on `threads` workers. Results do not depend on
/// the thread count.
ExperimentResult run_experiment(const ExperimentConfig &config, int threads = 1,
                                const ProgressFn &progress = {});

// CSV files. Reals use format_real.
void write_replicate_csv(std::ostream &os, const std::vector<ReplicateRecord> &records);
/// Throws Error(parse) naming the offending line.
std::vector<ReplicateRecord> read_replicate_csv(std::istream &is);
void write_report_csv(std::ostream &os, const ExperimentReport &report);
/// Human-readable summary: provenance block plus a table at four
/// significant digits.
void write_summary(std::ostream &os, const ExperimentReport &report);

struct RlctRow {
  int num_topics = 0;
  RlctResult rlct;
  std::int64_t dimension = 0;
};

/// One row per H in [min_topics, max_topics].
std::vector<RlctRow> rlct_table(int vocab_size, int num_docs, int true_topics,
                                int intrinsic_rank, int min_topics, int max_topics);
void write_rlct_csv(std::ostream &os, const std::vector<RlctRow> &rows);

void write_curve_csv(std::ostream &os, const std::vector<CurvePoint> &points);

} // namespace ldarlct
