#include "amrsumm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "amrsumm/side_info.hpp"

namespace amrsumm {

namespace {

using NgramCounts = std::map<TokenSeq, std::size_t>;

NgramCounts count_ngrams(const TokenSeq& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() >= n)
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
      ++counts[TokenSeq(tokens.begin() + i, tokens.begin() + i + n)];
  return counts;
}

std::size_t clipped_overlap(const NgramCounts& hyp, const NgramCounts& ref) {
  std::size_t overlap = 0;
  for (const auto& [ngram, count] : hyp) {
    auto it = ref.find(ngram);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

PrfScore prf_from_counts(std::size_t overlap, std::size_t hyp_total, std::size_t ref_total) {
  PrfScore s;
  s.precision = hyp_total ? static_cast<double>(overlap) / hyp_total : 0.0;
  s.recall = ref_total ? static_cast<double>(overlap) / ref_total : 0.0;
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

}  // namespace

double bleu(const std::vector<TokenSeq>& hypotheses, const std::vector<TokenSeq>& references) {
  if (hypotheses.size() != references.size())
    throw std::invalid_argument("bleu: hypothesis/reference count mismatch");

  constexpr std::size_t kMaxOrder = 4;
  std::size_t hyp_len = 0, ref_len = 0;
  std::size_t matched[kMaxOrder] = {0, 0, 0, 0};
  std::size_t total[kMaxOrder] = {0, 0, 0, 0};

  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    hyp_len += hypotheses[i].size();
    ref_len += references[i].size();
    for (std::size_t n = 1; n <= kMaxOrder; ++n) {
      NgramCounts hc = count_ngrams(hypotheses[i], n);
      NgramCounts rc = count_ngrams(references[i], n);
      matched[n - 1] += clipped_overlap(hc, rc);
      for (const auto& [ngram, count] : hc) total[n - 1] += count;
    }
  }

  // Orders with no hypothesis n-grams at all (short corpus) are dropped from
  // the geometric mean rather than counted as zero precision.
  double log_sum = 0.0;
  std::size_t used = 0;
  for (std::size_t n = 0; n < kMaxOrder; ++n) {
    if (total[n] == 0) continue;
    if (matched[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matched[n]) / static_cast<double>(total[n]));
    ++used;
  }
  if (used == 0) return 0.0;

  double brevity = 1.0;
  if (hyp_len < ref_len)
    brevity = std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
  return brevity * std::exp(log_sum / static_cast<double>(used));
}

PrfScore rouge_n(const TokenSeq& hyp, const TokenSeq& ref, std::size_t n) {
  if (n < 1) throw std::invalid_argument("rouge_n: n must be >= 1");
  NgramCounts hc = count_ngrams(hyp, n);
  NgramCounts rc = count_ngrams(ref, n);
  std::size_t hyp_total = hyp.size() >= n ? hyp.size() - n + 1 : 0;
  std::size_t ref_total = ref.size() >= n ? ref.size() - n + 1 : 0;
  return prf_from_counts(clipped_overlap(hc, rc), hyp_total, ref_total);
}

PrfScore rouge_l(const TokenSeq& hyp, const TokenSeq& ref) {
  return prf_from_counts(lcs_length(hyp, ref), hyp.size(), ref.size());
}

PrfScore corpus_rouge_n(const std::vector<TokenSeq>& hyps, const std::vector<TokenSeq>& refs,
                        std::size_t n) {
  if (hyps.size() != refs.size())
    throw std::invalid_argument("corpus_rouge_n: hypothesis/reference count mismatch");
  std::size_t overlap = 0, hyp_total = 0, ref_total = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    overlap += clipped_overlap(count_ngrams(hyps[i], n), count_ngrams(refs[i], n));
    hyp_total += hyps[i].size() >= n ? hyps[i].size() - n + 1 : 0;
    ref_total += refs[i].size() >= n ? refs[i].size() - n + 1 : 0;
  }
  return prf_from_counts(overlap, hyp_total, ref_total);
}

PrfScore corpus_rouge_l(const std::vector<TokenSeq>& hyps, const std::vector<TokenSeq>& refs) {
  if (hyps.size() != refs.size())
    throw std::invalid_argument("corpus_rouge_l: hypothesis/reference count mismatch");
  std::size_t overlap = 0, hyp_total = 0, ref_total = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    overlap += lcs_length(hyps[i], refs[i]);
    hyp_total += hyps[i].size();
    ref_total += refs[i].size();
  }
  return prf_from_counts(overlap, hyp_total, ref_total);
}

MetricReport evaluate_corpus(const std::vector<TokenSeq>& hyps,
                             const std::vector<TokenSeq>& refs) {
  MetricReport report;
  report.bleu = bleu(hyps, refs);
  report.rouge1 = corpus_rouge_n(hyps, refs, 1);
  report.rouge2 = corpus_rouge_n(hyps, refs, 2);
  report.rouge_l = corpus_rouge_l(hyps, refs);
  return report;
}

namespace {

void json_prf(std::ostringstream& out, const char* name, const PrfScore& s) {
  out << '"' << name << "\":{\"p\":" << s.precision << ",\"r\":" << s.recall
      << ",\"f\":" << s.f1 << '}';
}

}  // namespace

std::string MetricReport::to_json() const {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "{\"bleu\":" << bleu << ',';
  json_prf(out, "rouge1", rouge1);
  out << ',';
  json_prf(out, "rouge2", rouge2);
  out << ',';
  json_prf(out, "rougeL", rouge_l);
  out << '}';
  return out.str();
}

void MetricReport::print_table(std::ostream& out) const {
  auto row = [&](const char* name, const PrfScore& s) {
    out << std::left << std::setw(8) << name << std::right << std::fixed
        << std::setprecision(4) << std::setw(10) << s.precision << std::setw(10) << s.recall
        << std::setw(10) << s.f1 << '\n';
  };
  out << std::left << std::setw(8) << "metric" << std::right << std::setw(10) << "P"
      << std::setw(10) << "R" << std::setw(10) << "F1" << '\n';
  row("rouge-1", rouge1);
  row("rouge-2", rouge2);
  row("rouge-L", rouge_l);
  out << std::left << std::setw(8) << "bleu" << std::right << std::fixed
      << std::setprecision(4) << std::setw(10) << bleu << '\n';
}

}  // namespace amrsumm
