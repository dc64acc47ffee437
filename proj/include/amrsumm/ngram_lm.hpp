#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "amrsumm/amr.hpp"
#include "amrsumm/side_info.hpp"

namespace amrsumm {

inline constexpr const char* kSentBegin = "<s>";
inline constexpr const char* kSentEnd = "</s>";
inline constexpr std::size_t kDefaultNgramOrder = 4;

// Per-sentence n-gram count tables of order 1..max_order, pure MLE (no
// smoothing). Sentences are padded with (max_order - 1) begin markers and one
// end marker before counting.
class NGramModel {
 public:
  NGramModel() = default;

  std::size_t max_order() const { return max_order_; }
  std::uint64_t count(const TokenSeq& ngram) const;
  std::uint64_t total_unigrams() const { return total_unigrams_; }
  const std::unordered_set<std::string>& vocab() const { return vocab_; }

  // True for tokens observed in side-information sentences; sentence markers
  // never qualify.
  bool contains_surface(const std::string& token) const;

  // Plain-text debug dump: `<count> <tok1> ... <tokn>` sorted lexicographically.
  void dump(std::ostream& out) const;

  friend NGramModel build_counts(const SideDocument& side, std::size_t max_order);

 private:
  std::size_t max_order_ = kDefaultNgramOrder;
  std::map<TokenSeq, std::uint64_t> counts_;
  std::unordered_set<std::string> vocab_;
  std::uint64_t total_unigrams_ = 0;
};

NGramModel build_counts(const SideDocument& side, std::size_t max_order = kDefaultNgramOrder);

// P_LM(word | context) = count(context + word) / count(context); 0 when the
// context is unseen. Empty context falls back to unigram relative frequency.
double p_lm(const NGramModel& model, const std::string& word, const TokenSeq& context);

// Geometric weight family: lambda_i = theta * lambda_{i-1}, sum = 1, all > 0.
// lambdas[0] pairs with the bigram term, lambdas[2] with the 4-gram term.
struct InterpolationWeights {
  std::array<double, 3> lambdas;
  double theta;
};

InterpolationWeights lambdas_from_theta(double theta);

// P_side = lambda3 * P_LM(w | 3-token context) + lambda2 * P_LM(w | last 2)
//        + lambda1 * P_LM(w | last 1). Context must already be begin-padded.
double p_side(const NGramModel& model, const std::string& word,
              const std::array<std::string, 3>& context3, const InterpolationWeights& weights);

// Last three generated tokens, begin-padded when the prefix is shorter.
std::array<std::string, 3> side_context(const TokenSeq& prefix);

}  // namespace amrsumm
