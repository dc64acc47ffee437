#include "amrsumm/ngram_lm.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace amrsumm {

std::uint64_t NGramModel::count(const TokenSeq& ngram) const {
  auto it = counts_.find(ngram);
  return it == counts_.end() ? 0 : it->second;
}

bool NGramModel::contains_surface(const std::string& token) const {
  return token != kSentBegin && token != kSentEnd && vocab_.count(token) > 0;
}

void NGramModel::dump(std::ostream& out) const {
  for (const auto& [ngram, count] : counts_) {
    out << count;
    for (const auto& tok : ngram) out << ' ' << tok;
    out << '\n';
  }
}

NGramModel build_counts(const SideDocument& side, std::size_t max_order) {
  if (max_order < 1) throw std::invalid_argument("build_counts: max_order must be >= 1");
  if (side.sentences.empty()) throw std::invalid_argument("build_counts: empty side document");

  NGramModel model;
  model.max_order_ = max_order;
  for (const TokenSeq& sentence : side.sentences) {
    TokenSeq padded;
    padded.reserve(sentence.size() + max_order);
    for (std::size_t i = 0; i + 1 < max_order; ++i) padded.push_back(kSentBegin);
    padded.insert(padded.end(), sentence.begin(), sentence.end());
    padded.push_back(kSentEnd);

    for (const auto& tok : sentence) model.vocab_.insert(tok);
    for (std::size_t n = 1; n <= max_order; ++n) {
      if (padded.size() < n) continue;
      for (std::size_t i = 0; i + n <= padded.size(); ++i)
        ++model.counts_[TokenSeq(padded.begin() + i, padded.begin() + i + n)];
    }
    model.total_unigrams_ += padded.size();
  }
  model.vocab_.insert(kSentBegin);
  model.vocab_.insert(kSentEnd);
  return model;
}

double p_lm(const NGramModel& model, const std::string& word, const TokenSeq& context) {
  if (context.size() > model.max_order() - 1)
    throw std::invalid_argument("p_lm: context longer than max_order - 1");
  TokenSeq ngram = context;
  ngram.push_back(word);
  if (context.empty()) {
    return model.total_unigrams() == 0
               ? 0.0
               : static_cast<double>(model.count(ngram)) /
                     static_cast<double>(model.total_unigrams());
  }
  std::uint64_t ctx = model.count(context);
  if (ctx == 0) return 0.0;
  return static_cast<double>(model.count(ngram)) / static_cast<double>(ctx);
}

InterpolationWeights lambdas_from_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("lambdas_from_theta: theta must be positive and finite");
  double l1 = 1.0 / (1.0 + theta + theta * theta);
  return InterpolationWeights{{l1, theta * l1, theta * theta * l1}, theta};
}

double p_side(const NGramModel& model, const std::string& word,
              const std::array<std::string, 3>& context3, const InterpolationWeights& weights) {
  TokenSeq ctx3(context3.begin(), context3.end());
  TokenSeq ctx2(context3.begin() + 1, context3.end());
  TokenSeq ctx1(context3.begin() + 2, context3.end());
  return weights.lambdas[2] * p_lm(model, word, ctx3) +
         weights.lambdas[1] * p_lm(model, word, ctx2) +
         weights.lambdas[0] * p_lm(model, word, ctx1);
}

std::array<std::string, 3> side_context(const TokenSeq& prefix) {
  std::array<std::string, 3> ctx = {kSentBegin, kSentBegin, kSentBegin};
  std::size_t n = prefix.size();
  for (std::size_t i = 0; i < 3 && i < n; ++i) ctx[2 - i] = prefix[n - 1 - i];
  return ctx;
}

}  // namespace amrsumm
