#include "ldarlct/harness.hpp"

#include "ldarlct/error.hpp"
#include "ldarlct/text_io.hpp"
#include "ldarlct/version.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <locale>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace ldarlct {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int_value(std::string_view text) {
  const long long v = parse_integer(text);
  require(v >= std::numeric_limits<int>::min() && v <= std::numeric_limits<int>::max(),
          ErrorCode::parse, "integer out of range: '" + std::string(text) + "'");
  return static_cast<int>(v);
}

bool parse_bool(std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  fail(ErrorCode::parse, "not a boolean: '" + std::string(text) + "'");
}

// "2,3,4,5" or "2..5" or a mix "1,3..5"
std::vector<int> parse_topic_list(std::string_view text) {
  std::vector<int> out;
  for (std::string_view item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_int_value(item));
      continue;
    }
    const int lo = parse_int_value(trim(item.substr(0, dots)));
    const int hi = parse_int_value(trim(item.substr(dots + 2)));
    require(lo <= hi, ErrorCode::parse, "empty topic range '" + std::string(item) + "'");
    for (int h = lo; h <= hi; ++h) out.push_back(h);
  }
  return out;
}

std::string join_ints(const std::vector<int> &v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string join_reals(const std::vector<double> &v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_real(v[i]);
  return out;
}

std::string four_digits(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(4) << v;
  return os.str();
}

std::uint64_t parse_seed(std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  require(ec == std::errc() && ptr == text.data() + text.size() && !text.empty(),
          ErrorCode::parse, "not a 64-bit seed: '" + std::string(text) + "'");
  return v;
}

TrueModel with_doc_weights(TrueModel model, const std::vector<double> &weights) {
  if (weights.empty()) return model;
  return TrueModel(std::move(model.topic_word), std::move(model.doc_topic), weights);
}

constexpr std::uint64_t kTruthStream = 0x7472757468ULL; // "truth"

} // namespace

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "vocab_size" || key == "M") vocab_size = parse_int_value(value);
  else if (key == "num_docs" || key == "N") num_docs = parse_int_value(value);
  else if (key == "true_topics" || key == "H0") true_topics = parse_int_value(value);
  else if (key == "sample_size" || key == "n") sample_size = static_cast<std::size_t>(std::max(0LL, parse_integer(value)));
  else if (key == "test_size" || key == "n_T") test_size = static_cast<std::size_t>(std::max(0LL, parse_integer(value)));
  else if (key == "replicates" || key == "D") replicates = parse_int_value(value);
  else if (key == "topics" || key == "H") topic_counts = parse_topic_list(value);
  else if (key == "alpha") gibbs.alpha = parse_real(value);
  else if (key == "beta") gibbs.beta = parse_real(value);
  else if (key == "burn_in") gibbs.burn_in = parse_int_value(value);
  else if (key == "thinning") gibbs.thinning = parse_int_value(value);
  else if (key == "draws" || key == "K") gibbs.num_draws = parse_int_value(value);
  else if (key == "doc_weights") {
    doc_weights.clear();
    if (!value.empty() && value != "uniform")
      for (std::string_view w : split(value, ',')) doc_weights.push_back(parse_real(w));
  } else if (key == "seed") seed = parse_seed(value);
  else if (key == "gn_mode") {
    if (value == "exact") gn_mode = GnMode::exact;
    else if (value == "mc") gn_mode = GnMode::monte_carlo;
    else fail(ErrorCode::parse, "gn_mode must be 'exact' or 'mc', got '" + std::string(value) + "'");
  } else if (key == "per_replicate_truth") per_replicate_truth = parse_bool(value);
  else if (key == "truth_file") truth_file = std::string(value);
  else if (key == "dump_draws") dump_draws = parse_bool(value);
  else fail(ErrorCode::parse, "unknown config key '" + std::string(key) + "'");
}

void ExperimentConfig::validate() const {
  require(replicates >= 2, ErrorCode::invalid_argument, "replicate count D must be >= 2");
  require(sample_size >= 1, ErrorCode::invalid_argument, "sample size n must be >= 1");
  require(!topic_counts.empty(), ErrorCode::invalid_argument, "topic list H must not be empty");
  require(gn_mode == GnMode::exact || test_size >= 1, ErrorCode::invalid_argument,
          "monte carlo G_n needs n_T >= 1");
  require(gibbs.num_draws >= 2, ErrorCode::invalid_argument, "WAIC needs K >= 2 draws");
  gibbs.validate();
  const int generic_rank = std::max(0, std::min({vocab_size - 1, num_docs - 1, true_topics - 1}));
  for (int h : topic_counts) {
    LdaShape{vocab_size, num_docs, h, true_topics, generic_rank}.validate();
  }
  if (!doc_weights.empty())
    require(doc_weights.size() == static_cast<std::size_t>(num_docs), ErrorCode::invalid_argument,
            "doc_weights must list N values");
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  os << "vocab_size = " << vocab_size << '\n'
     << "num_docs = " << num_docs << '\n'
     << "true_topics = " << true_topics << '\n'
     << "sample_size = " << sample_size << '\n'
     << "test_size = " << test_size << '\n'
     << "replicates = " << replicates << '\n'
     << "topics = " << join_ints(topic_counts) << '\n'
     << "alpha = " << format_real(gibbs.alpha) << '\n'
     << "beta = " << format_real(gibbs.beta) << '\n'
     << "burn_in = " << gibbs.burn_in << '\n'
     << "thinning = " << gibbs.thinning << '\n'
     << "draws = " << gibbs.num_draws << '\n'
     << "doc_weights = " << (doc_weights.empty() ? "uniform" : join_reals(doc_weights)) << '\n'
     << "seed = " << seed << '\n'
     << "gn_mode = " << (gn_mode == GnMode::exact ? "exact" : "mc") << '\n'
     << "per_replicate_truth = " << (per_replicate_truth ? "true" : "false") << '\n';
  if (!truth_file.empty()) os << "truth_file = " << truth_file << '\n';
  os << "dump_draws = " << (dump_draws ? "true" : "false") << '\n';
  return os.str();
}

ExperimentConfig parse_config(std::istream &is) {
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    try {
      require(eq != std::string_view::npos, ErrorCode::parse, "expected 'key = value'");
      config.set(text.substr(0, eq), text.substr(eq + 1));
    } catch (const Error &e) {
      fail(ErrorCode::parse, "config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io, "cannot open config '" + path + "'");
  return parse_config(in);
}

std::uint64_t replicate_seed(std::uint64_t master, int num_topics, int replicate) {
  return derive_seed(master, {static_cast<std::uint64_t>(num_topics),
                              static_cast<std::uint64_t>(replicate)});
}

ExperimentReport summarize(const std::vector<ReplicateRecord> &records, const LdaShape &base) {
  std::map<int, std::vector<double>> by_topics;
  for (const ReplicateRecord &r : records) by_topics[r.num_topics].push_back(r.loss.lambda_sample);

  ExperimentReport report;
  for (const auto &[topics, values] : by_topics) {
    LdaShape shape = base;
    shape.num_topics = topics;
    ReportRow row;
    row.num_topics = topics;
    row.theory = lda_rlct(shape);
    row.half_dim = static_cast<double>(lda_dimension(shape)) / 2.0;
    row.replicates = values.size();
    if (values.size() >= 2) {
      const LambdaEstimate est = aggregate(values);
      row.lambda_hat = est.mean;
      row.std_dev = est.std_dev;
    } else {
      row.lambda_hat = values.front();
      row.std_dev = 0.0;
    }
    row.abs_diff = std::abs(row.theory.lambda.to_double() - row.lambda_hat);
    report.rows.push_back(row);
  }
  report.provenance.emplace_back("M", std::to_string(base.vocab_size));
  report.provenance.emplace_back("N", std::to_string(base.num_docs));
  report.provenance.emplace_back("H0", std::to_string(base.true_topics));
  report.provenance.emplace_back("r", std::to_string(base.intrinsic_rank));
  report.provenance.emplace_back("library_version", kVersion);
  return report;
}

ExperimentResult run_experiment(const ExperimentConfig &config, int threads,
                                const ProgressFn &progress) {
  config.validate();
  ExperimentResult result;

  if (!config.truth_file.empty()) {
    std::ifstream in(config.truth_file);
    require(static_cast<bool>(in), ErrorCode::io, "cannot open truth '" + config.truth_file + "'");
    result.truth = with_doc_weights(read_truth(in), config.doc_weights);
    require(result.truth.vocab_size() == static_cast<std::size_t>(config.vocab_size) &&
                result.truth.num_docs() == static_cast<std::size_t>(config.num_docs) &&
                result.truth.num_topics() == static_cast<std::size_t>(config.true_topics),
            ErrorCode::invalid_argument, "truth file dimensions disagree with the config");
  } else {
    Rng rng(derive_seed(config.seed, {kTruthStream}));
    result.truth = with_doc_weights(
        sample_true_model(config.vocab_size, config.num_docs, config.true_topics, rng),
        config.doc_weights);
  }
  result.intrinsic_rank = rank_r(result.truth.topic_word, result.truth.doc_topic);

  struct Job {
    int num_topics;
    int replicate;
  };
  std::vector<Job> jobs;
  for (int h : config.topic_counts)
    for (int d = 1; d <= config.replicates; ++d) jobs.push_back({h, d});

  ReplicateOptions options;
  options.gn_mode = config.gn_mode;
  options.test_size = config.test_size;

  result.replicates.resize(jobs.size());
  std::vector<std::optional<PosteriorDraws>> dumps(jobs.size());
  std::atomic<std::size_t> next{0};
  std::size_t finished = 0;
  std::mutex mutex;
  std::exception_ptr failure;

  const auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size()) return;
      {
        std::lock_guard lock(mutex);
        if (failure) return;
      }
      try {
        const Job job = jobs[idx];
        const std::uint64_t seed = replicate_seed(config.seed, job.num_topics, job.replicate);
        TrueModel per_replicate;
        const TrueModel *truth = &result.truth;
        if (config.per_replicate_truth) {
          Rng rng(derive_seed(config.seed, {kTruthStream, static_cast<std::uint64_t>(job.replicate)}));
          per_replicate = with_doc_weights(
              sample_true_model(config.vocab_size, config.num_docs, config.true_topics, rng),
              config.doc_weights);
          truth = &per_replicate;
        }
        GibbsConfig gibbs = config.gibbs;
        gibbs.seed = seed;

        ReplicateRecord rec;
        rec.replicate = job.replicate;
        rec.num_topics = job.num_topics;
        rec.sample_size = config.sample_size;
        rec.seed = seed;
        const bool keep = config.dump_draws && job.replicate == 1;
        PosteriorDraws draws;
        rec.loss = lambda_replicate(*truth, job.num_topics, config.sample_size, gibbs, options,
                                    keep ? &draws : nullptr);
        if (keep) dumps[idx] = std::move(draws);
        result.replicates[idx] = rec;

        std::lock_guard lock(mutex);
        ++finished;
        if (progress) progress(finished, jobs.size());
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < jobs.size(); ++i)
    if (dumps[i]) result.dumped_draws.emplace_back(jobs[i].num_topics, std::move(*dumps[i]));

  const LdaShape base{config.vocab_size, config.num_docs, config.topic_counts.front(),
                      config.true_topics, result.intrinsic_rank};
  result.report = summarize(result.replicates, base);
  result.report.provenance.emplace_back("seed", std::to_string(config.seed));
  result.report.provenance.emplace_back("truth",
                                        config.truth_file.empty() ? "dirichlet(1) rejection draw"
                                                                  : config.truth_file);
  result.report.provenance.emplace_back(
      "prior", "symmetric dirichlet alpha=" + format_real(config.gibbs.alpha) +
                   " beta=" + format_real(config.gibbs.beta));
  result.report.provenance.emplace_back("config", config.to_text());
  return result;
}

void write_replicate_csv(std::ostream &os, const std::vector<ReplicateRecord> &records) {
  os << "replicate,H,n,G_n,S_n,T_n,V_n,W_n,lambda_sample,seed\n";
  for (const ReplicateRecord &r : records) {
    os << r.replicate << ',' << r.num_topics << ',' << r.sample_size << ','
       << format_real(r.loss.generalization_error) << ',' << format_real(r.loss.empirical_entropy)
       << ',' << format_real(r.loss.empirical_loss) << ','
       << format_real(r.loss.functional_variance) << ',' << format_real(r.loss.waic) << ','
       << format_real(r.loss.lambda_sample) << ',' << r.seed << '\n';
  }
}

std::vector<ReplicateRecord> read_replicate_csv(std::istream &is) {
  static constexpr std::string_view kHeader = "replicate,H,n,G_n,S_n,T_n,V_n,W_n,lambda_sample,seed";
  std::vector<ReplicateRecord> out;
  std::string line;
  int line_no = 0;
  bool seen_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    const std::string where = "replicate CSV line " + std::to_string(line_no) + ": ";
    if (!seen_header) {
      require(text == kHeader, ErrorCode::parse, where + "expected header '" + std::string(kHeader) + "'");
      seen_header = true;
      continue;
    }
    const auto fields = split(text, ',');
    require(fields.size() == 10, ErrorCode::parse,
            where + "expected 10 fields, got " + std::to_string(fields.size()));
    try {
      ReplicateRecord r;
      r.replicate = parse_int_value(fields[0]);
      r.num_topics = parse_int_value(fields[1]);
      r.sample_size = static_cast<std::size_t>(parse_integer(fields[2]));
      r.loss.generalization_error = parse_real(fields[3]);
      r.loss.empirical_entropy = parse_real(fields[4]);
      r.loss.empirical_loss = parse_real(fields[5]);
      r.loss.functional_variance = parse_real(fields[6]);
      r.loss.waic = parse_real(fields[7]);
      r.loss.lambda_sample = parse_real(fields[8]);
      r.seed = parse_seed(fields[9]);
      out.push_back(r);
    } catch (const Error &e) {
      fail(ErrorCode::parse, where + e.what());
    }
  }
  require(seen_header, ErrorCode::parse, "replicate CSV line 1: missing header");
  return out;
}

void write_report_csv(std::ostream &os, const ExperimentReport &report) {
  os << "H,lambda_theory,multiplicity,lambda_hat,std,abs_diff,half_dim\n";
  for (const ReportRow &r : report.rows) {
    os << r.num_topics << ',' << format_real(r.theory.lambda.to_double()) << ','
       << r.theory.multiplicity << ',' << format_real(r.lambda_hat) << ','
       << format_real(r.std_dev) << ',' << format_real(r.abs_diff) << ','
       << format_real(r.half_dim) << '\n';
  }
}

void write_summary(std::ostream &os, const ExperimentReport &report) {
  os << "# learning coefficient of LDA: theory vs simulation\n";
  os << "[provenance]\n";
  for (const auto &[key, value] : report.provenance) {
    if (value.find('\n') == std::string::npos) {
      os << key << " = " << value << '\n';
      continue;
    }
    os << key << " =\n";
    std::istringstream lines(value);
    std::string l;
    while (std::getline(lines, l)) os << "    " << l << '\n';
  }
  os << "\n[results]\n";
  os << "H  lambda  m  lambda_hat +- std  |lambda - lambda_hat|  d/2  D\n";
  for (const ReportRow &r : report.rows) {
    os << r.num_topics << "  " << r.theory.lambda.to_string() << "  " << r.theory.multiplicity
       << "  " << four_digits(r.lambda_hat) << " +- " << four_digits(r.std_dev) << "  "
       << four_digits(r.abs_diff) << "  " << four_digits(r.half_dim) << "  " << r.replicates
       << '\n';
  }
}

std::vector<RlctRow> rlct_table(int vocab_size, int num_docs, int true_topics, int intrinsic_rank,
                                int min_topics, int max_topics) {
  require(min_topics <= max_topics, ErrorCode::invalid_argument, "empty topic range");
  std::vector<RlctRow> rows;
  for (int h = min_topics; h <= max_topics; ++h) {
    const LdaShape shape{vocab_size, num_docs, h, true_topics, intrinsic_rank};
    rows.push_back({h, lda_rlct(shape), lda_dimension(shape)});
  }
  return rows;
}

void write_rlct_csv(std::ostream &os, const std::vector<RlctRow> &rows) {
  os << "H,lambda,lambda_exact,multiplicity,half_dim\n";
  for (const RlctRow &r : rows) {
    os << r.num_topics << ',' << format_real(r.rlct.lambda.to_double()) << ','
       << r.rlct.lambda.to_string() << ',' << r.rlct.multiplicity << ','
       << format_real(static_cast<double>(r.dimension) / 2.0) << '\n';
  }
}

void write_curve_csv(std::ostream &os, const std::vector<CurvePoint> &points) {
  os << "n,e_gen_lda,e_gen_regular\n";
  for (const CurvePoint &p : points) {
    os << format_real(p.sample_size) << ',' << format_real(p.lda_error) << ','
       << (p.regular_error ? format_real(*p.regular_error) : std::string()) << '\n';
  }
}

} // namespace ldarlct
