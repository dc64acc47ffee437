#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "amrsumm/amr.hpp"

namespace amrsumm {

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricReport {
  double bleu = 0.0;
  PrfScore rouge1;
  PrfScore rouge2;
  PrfScore rouge_l;

  std::string to_json() const;
  void print_table(std::ostream& out) const;
};

// Corpus-level BLEU-4: uniform geometric mean of clipped modified n-gram
// precisions over the orders the hypothesis corpus actually has, times the
// brevity penalty. Any zero precision yields 0.
double bleu(const std::vector<TokenSeq>& hypotheses, const std::vector<TokenSeq>& references);

// Sentence-level scores.
PrfScore rouge_n(const TokenSeq& hyp, const TokenSeq& ref, std::size_t n);
PrfScore rouge_l(const TokenSeq& hyp, const TokenSeq& ref);

// Micro-averaged corpus scores: overlap and length totals are summed across
// pairs before computing precision/recall.
PrfScore corpus_rouge_n(const std::vector<TokenSeq>& hyps, const std::vector<TokenSeq>& refs,
                        std::size_t n);
PrfScore corpus_rouge_l(const std::vector<TokenSeq>& hyps, const std::vector<TokenSeq>& refs);

MetricReport evaluate_corpus(const std::vector<TokenSeq>& hyps,
                             const std::vector<TokenSeq>& refs);

}  // namespace amrsumm
