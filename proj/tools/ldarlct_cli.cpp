// Command-line front end. Talks to the library only through ldarlct.h.

#include "ldarlct/ldarlct.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace {

struct CliError {
  ldarlct_status status;
};

void check(ldarlct_status status) {
  if (status == LDARLCT_OK) return;
  std::fprintf(stderr, "ldarlct: %s: %s\n", ldarlct_status_name(status), ldarlct_last_error());
  throw CliError{status};
}

std::string format(ldarlct_rational r) {
  char buf[64];
  check(ldarlct_format_rational(r, buf, sizeof buf));
  return buf;
}

void print_rows(const std::vector<ldarlct_report_row> &rows) {
  std::printf("%4s %10s %3s %12s %10s %12s %8s\n", "H", "lambda", "m", "lambda_hat", "std",
              "|diff|", "d/2");
  for (const auto &r : rows) {
    std::printf("%4d %10s %3d %12.4g %10.4g %12.4g %8.4g\n", r.num_topics,
                format(r.lambda_theory).c_str(), r.multiplicity, r.lambda_hat, r.std_dev,
                r.abs_diff, r.half_dim);
  }
}

void progress_to_stderr(size_t done, size_t total, void *) {
  std::fprintf(stderr, "\rreplicates %zu/%zu", done, total);
  if (done == total) std::fprintf(stderr, "\n");
}

// Resolves (M, N, H0, r) either from explicit options or from a truth file.
struct ShapeOptions {
  int vocab_size = 0;
  int num_docs = 0;
  int true_topics = 0;
  int rank = -1;
  std::string truth_path;

  void add_to(CLI::App *cmd) {
    cmd->add_option("-M,--vocab", vocab_size, "vocabulary size M");
    cmd->add_option("-N,--docs", num_docs, "number of documents N");
    cmd->add_option("--h0", true_topics, "true topic count H0 (default r + 1)");
    cmd->add_option("-r,--rank", rank, "intrinsic rank r (default: generic rank)");
    cmd->add_option("--truth", truth_path, "truth file; M, N, H0 and r are read from it")
        ->check(CLI::ExistingFile);
  }

  void resolve() {
    if (!truth_path.empty()) {
      ldarlct_truth *truth = nullptr;
      check(ldarlct_truth_load(truth_path.c_str(), &truth));
      int r = 0;
      const ldarlct_status s1 = ldarlct_truth_dims(truth, &vocab_size, &num_docs, &true_topics);
      const ldarlct_status s2 = ldarlct_truth_rank(truth, &r);
      ldarlct_truth_free(truth);
      check(s1);
      check(s2);
      rank = r;
      return;
    }
    if (vocab_size == 0 || num_docs == 0)
      throw CLI::ValidationError("shape", "either --truth or both -M and -N are required");
    if (true_topics == 0) true_topics = rank < 0 ? 1 : rank + 1;
    if (rank < 0) {
      rank = std::min({vocab_size - 1, num_docs - 1, true_topics - 1});
      if (rank < 0) rank = 0;
    }
  }
};

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact learning coefficients of latent Dirichlet allocation and their "
               "Gibbs/WAIC simulation check"};
  app.set_version_flag("--version", std::string(ldarlct_version()));
  app.require_subcommand(1);

  // rlct
  auto *rlct = app.add_subcommand("rlct", "learning coefficient table over a range of H");
  ShapeOptions rlct_shape;
  rlct_shape.add_to(rlct);
  int h_min = 0, h_max = 0;
  std::string rlct_out = "-";
  rlct->add_option("--h-min", h_min, "smallest model topic count (default H0)");
  rlct->add_option("--h-max", h_max, "largest model topic count (default h-min)");
  rlct->add_option("-o,--out", rlct_out, "output CSV path, '-' for stdout");

  // simulate
  auto *simulate = app.add_subcommand("simulate", "run the replicate simulation and report");
  std::string config_path, out_dir = ".", gn_mode;
  std::vector<std::string> overrides;
  std::string seed;
  int threads = 1;
  bool quiet = false;
  simulate->add_option("-c,--config", config_path, "config file (key = value lines)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--set", overrides, "override a config key, key=value (repeatable)");
  simulate->add_option("--seed", seed, "master seed");
  simulate->add_option("--gn-mode", gn_mode, "generalization error: exact | mc")
      ->check(CLI::IsMember({"exact", "mc"}));
  simulate->add_option("--out-dir", out_dir, "directory for CSV and summary output");
  simulate->add_option("-j,--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  simulate->add_flag("-q,--quiet", quiet, "no progress output");

  // curve
  auto *curve = app.add_subcommand("curve", "theoretical learning curve data");
  std::string lambda_text;
  int multiplicity = 1, points = 50;
  double n_min = 16, n_max = 1e6;
  long long dimension = 0;
  std::string curve_out = "-";
  curve->add_option("-l,--lambda", lambda_text, "learning coefficient, e.g. 21/2")->required();
  curve->add_option("-m,--multiplicity", multiplicity, "multiplicity")->check(CLI::PositiveNumber);
  curve->add_option("--n-min", n_min, "smallest sample size (>= 16)");
  curve->add_option("--n-max", n_max, "largest sample size");
  curve->add_option("--points", points, "grid points, geometric spacing")->check(CLI::PositiveNumber);
  curve->add_option("-d,--dimension", dimension, "parameter dimension for the regular curve d/(2n)");
  curve->add_option("-o,--out", curve_out, "output CSV path, '-' for stdout");

  // report
  auto *report = app.add_subcommand("report", "summarize a replicate CSV");
  std::string csv_path, report_dir = ".";
  ShapeOptions report_shape;
  report_shape.add_to(report);
  report->add_option("--csv", csv_path, "replicate CSV from simulate")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--out-dir", report_dir, "directory for report.csv and summary.txt");

  // truth
  auto *truth_cmd = app.add_subcommand("truth", "draw a full-rank truth (and optionally data)");
  int t_vocab = 10, t_docs = 5, t_topics = 2, data_n = 0;
  std::string t_seed = "1", truth_out = "-", data_out;
  truth_cmd->add_option("-M,--vocab", t_vocab, "vocabulary size M");
  truth_cmd->add_option("-N,--docs", t_docs, "number of documents N");
  truth_cmd->add_option("--h0", t_topics, "true topic count H0");
  truth_cmd->add_option("--seed", t_seed, "seed");
  truth_cmd->add_option("-o,--out", truth_out, "truth output path, '-' for stdout");
  truth_cmd->add_option("--dataset-size", data_n, "also draw this many tokens");
  truth_cmd->add_option("--dataset-out", data_out, "token file path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rlct->parsed()) {
      rlct_shape.resolve();
      if (h_min == 0) h_min = rlct_shape.true_topics;
      if (h_max == 0) h_max = h_min;
      check(ldarlct_write_rlct_table(rlct_shape.vocab_size, rlct_shape.num_docs,
                                     rlct_shape.true_topics, rlct_shape.rank, h_min, h_max,
                                     rlct_out.c_str()));
    } else if (simulate->parsed()) {
      ldarlct_experiment *exp = nullptr;
      check(ldarlct_experiment_create(&exp));
      struct Guard {
        ldarlct_experiment *e;
        ~Guard() { ldarlct_experiment_free(e); }
      } guard{exp};
      if (!config_path.empty()) check(ldarlct_experiment_load_config(exp, config_path.c_str()));
      for (const std::string &kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
        check(ldarlct_experiment_set(exp, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
      }
      if (!seed.empty()) check(ldarlct_experiment_set(exp, "seed", seed.c_str()));
      if (!gn_mode.empty()) check(ldarlct_experiment_set(exp, "gn_mode", gn_mode.c_str()));
      std::filesystem::create_directories(out_dir);
      check(ldarlct_experiment_run(exp, threads, quiet ? nullptr : progress_to_stderr, nullptr));
      check(ldarlct_experiment_write(exp, out_dir.c_str()));
      size_t count = 0;
      check(ldarlct_experiment_row_count(exp, &count));
      std::vector<ldarlct_report_row> rows(count);
      for (size_t i = 0; i < count; ++i) check(ldarlct_experiment_get_row(exp, i, &rows[i]));
      print_rows(rows);
    } else if (curve->parsed()) {
      ldarlct_rational lambda{};
      check(ldarlct_parse_rational(lambda_text.c_str(), &lambda));
      check(ldarlct_write_curve(lambda, multiplicity, n_min, n_max, points, dimension,
                                curve_out.c_str()));
    } else if (report->parsed()) {
      report_shape.resolve();
      const ldarlct_shape base{report_shape.vocab_size, report_shape.num_docs,
                               report_shape.true_topics, report_shape.true_topics,
                               report_shape.rank};
      ldarlct_report *rep = nullptr;
      check(ldarlct_report_from_csv(csv_path.c_str(), &base, &rep));
      struct Guard {
        ldarlct_report *r;
        ~Guard() { ldarlct_report_free(r); }
      } guard{rep};
      std::filesystem::create_directories(report_dir);
      check(ldarlct_report_write(rep, report_dir.c_str()));
      size_t count = 0;
      check(ldarlct_report_row_count(rep, &count));
      std::vector<ldarlct_report_row> rows(count);
      for (size_t i = 0; i < count; ++i) check(ldarlct_report_get_row(rep, i, &rows[i]));
      print_rows(rows);
    } else if (truth_cmd->parsed()) {
      ldarlct_truth *truth = nullptr;
      check(ldarlct_truth_sample(t_vocab, t_docs, t_topics, std::stoull(t_seed), &truth));
      struct Guard {
        ldarlct_truth *t;
        ~Guard() { ldarlct_truth_free(t); }
      } guard{truth};
      check(ldarlct_truth_save(truth, truth_out.c_str()));
      if (data_n > 0) {
        if (data_out.empty())
          throw CLI::ValidationError("--dataset-out", "required with --dataset-size");
        check(ldarlct_truth_write_dataset(truth, static_cast<size_t>(data_n),
                                          std::stoull(t_seed) + 1, data_out.c_str()));
      }
    }
  } catch (const CliError &e) {
    return static_cast<int>(e.status);
  } catch (const CLI::Error &e) {
    return app.exit(e);
  } catch (const std::exception &e) {
    std::fprintf(stderr, "ldarlct: %s\n", e.what());
    return 1;
  }
  return 0;
}
