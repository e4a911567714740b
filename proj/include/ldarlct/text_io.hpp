#pragma once

#include "ldarlct/gibbs.hpp"
#include "ldarlct/lda_model.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace ldarlct {

/// 17 significant digits (trailing zeros dropped), '.' decimal separator
/// regardless of locale. Reads back to the same double.
std::string format_real(double value);

/// Locale-independent double parse of the whole string.
double parse_real(std::string_view text);

long long parse_integer(std::string_view text);

// Truth: whitespace-separated keyword blocks with explicit dimensions and
// row-major matrix entries; '#' starts a comment.
//
//   lda-truth 1
//   topic_word <M> <H0>
//   <M rows of H0 values>
//   doc_topic <H0> <N>
//   <H0 rows of N values>
//   doc_weights <N>
//   <N values>
void write_truth(std::ostream &os, const TrueModel &model);
TrueModel read_truth(std::istream &is);

// Dataset: header line "M N n", then one "doc<TAB>word" line per token, both
// 1-based.
void write_dataset(std::ostream &os, const Dataset &data);
Dataset read_dataset(std::istream &is);

/// Audit dump of posterior draws, one "draw <index>" record per (A, B).
void write_draws(std::ostream &os, const PosteriorDraws &draws);

} // namespace ldarlct
