#include "ldarlct/text_io.hpp"

#include "ldarlct/error.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace ldarlct {
namespace {

// Reads whitespace-separated words, skipping '#' comments.
class WordReader {
public:
  explicit WordReader(std::istream &is) : is_(is) {}

  std::string next(const char *what) {
    std::string word;
    while (is_ >> word) {
      if (word.front() == '#') {
        std::string rest;
        std::getline(is_, rest);
        continue;
      }
      return word;
    }
    fail(ErrorCode::parse, std::string("unexpected end of input, expected ") + what);
  }

  void expect(std::string_view keyword) {
    const std::string word = next(std::string(keyword).c_str());
    if (word != keyword)
      fail(ErrorCode::parse, "expected '" + std::string(keyword) + "', got '" + word + "'");
  }

  std::size_t dimension(const char *what) {
    const long long v = parse_integer(next(what));
    require(v >= 1, ErrorCode::parse, std::string(what) + " must be positive");
    return static_cast<std::size_t>(v);
  }

  double real(const char *what) { return parse_real(next(what)); }

private:
  std::istream &is_;
};

Matrix read_matrix_block(WordReader &in, std::string_view keyword) {
  in.expect(keyword);
  const std::size_t rows = in.dimension("row count");
  const std::size_t cols = in.dimension("column count");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = in.real("matrix entry");
  return m;
}

void write_matrix_block(std::ostream &os, std::string_view keyword, const Matrix &m) {
  os << keyword << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << format_real(m(r, c));
    os << '\n';
  }
}

} // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) fail(ErrorCode::io, "could not format number");
  return std::string(buf, ptr);
}

double parse_real(std::string_view text) {
  double value = 0.0;
  const char *first = text.data(), *last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last)
    fail(ErrorCode::parse, "not a number: '" + std::string(text) + "'");
  return value;
}

long long parse_integer(std::string_view text) {
  long long value = 0;
  const char *first = text.data(), *last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last)
    fail(ErrorCode::parse, "not an integer: '" + std::string(text) + "'");
  return value;
}

void write_truth(std::ostream &os, const TrueModel &model) {
  os << "lda-truth 1\n";
  write_matrix_block(os, "topic_word", model.topic_word.matrix());
  write_matrix_block(os, "doc_topic", model.doc_topic.matrix());
  os << "doc_weights " << model.doc_weights.size() << '\n';
  for (std::size_t j = 0; j < model.doc_weights.size(); ++j)
    os << (j ? " " : "") << format_real(model.doc_weights[j]);
  os << '\n';
}

TrueModel read_truth(std::istream &is) {
  WordReader in(is);
  in.expect("lda-truth");
  require(in.next("format version") == "1", ErrorCode::parse, "unsupported truth format version");
  Matrix a = read_matrix_block(in, "topic_word");
  Matrix b = read_matrix_block(in, "doc_topic");
  in.expect("doc_weights");
  const std::size_t n = in.dimension("document count");
  std::vector<double> weights(n);
  for (double &w : weights) w = in.real("document weight");
  return TrueModel(StochasticMatrix(std::move(a)), StochasticMatrix(std::move(b)),
                   std::move(weights));
}

void write_dataset(std::ostream &os, const Dataset &data) {
  os << data.vocab_size() << ' ' << data.num_docs() << ' ' << data.size() << '\n';
  for (const Token &t : data.tokens()) os << t.doc + 1 << '\t' << t.word + 1 << '\n';
}

Dataset read_dataset(std::istream &is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::parse, "dataset: missing header");
  std::istringstream header(line);
  std::string m_text, n_text, size_text;
  require(static_cast<bool>(header >> m_text >> n_text >> size_text), ErrorCode::parse,
          "dataset line 1: header must be 'M N n'");
  const long long M = parse_integer(m_text), N = parse_integer(n_text),
                  size = parse_integer(size_text);
  require(M >= 1 && N >= 1 && size >= 0, ErrorCode::parse, "dataset line 1: bad header values");

  std::vector<Token> tokens;
  tokens.reserve(static_cast<std::size_t>(size));
  long long line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    const auto where = "dataset line " + std::to_string(line_no) + ": ";
    require(tab != std::string::npos, ErrorCode::parse, where + "expected doc<TAB>word");
    long long doc = 0, word = 0;
    try {
      doc = parse_integer(std::string_view(line).substr(0, tab));
      word = parse_integer(std::string_view(line).substr(tab + 1));
    } catch (const Error &e) {
      fail(ErrorCode::parse, where + e.what());
    }
    require(doc >= 1 && doc <= N && word >= 1 && word <= M, ErrorCode::parse,
            where + "index out of range");
    tokens.push_back({static_cast<int>(doc - 1), static_cast<int>(word - 1)});
  }
  require(static_cast<long long>(tokens.size()) == size, ErrorCode::parse,
          "dataset: header announces " + std::to_string(size) + " tokens, found " +
              std::to_string(tokens.size()));
  return Dataset(static_cast<int>(M), static_cast<int>(N), std::move(tokens));
}

void write_draws(std::ostream &os, const PosteriorDraws &draws) {
  for (std::size_t k = 0; k < draws.size(); ++k) {
    os << "draw " << k + 1 << '\n';
    write_matrix_block(os, "topic_word", draws[k].topic_word.matrix());
    write_matrix_block(os, "doc_topic", draws[k].doc_topic.matrix());
  }
}

} // namespace ldarlct
