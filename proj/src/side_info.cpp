#include "amrsumm/side_info.hpp"

#include <algorithm>
#include <stdexcept>

namespace amrsumm {

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = (a[i - 1] == b[j - 1]) ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

SideDocument select_side_sentences(const std::vector<ParsedSentence>& doc,
                                   const AmrGraph& summary_graph, std::size_t k,
                                   const LinearizeOptions& opts) {
  if (doc.empty()) throw std::invalid_argument("select_side_sentences: empty document");
  if (k == 0) throw std::invalid_argument("select_side_sentences: k must be >= 1");

  TokenSeq summary_tokens = linearize(summary_graph, opts);

  struct Scored {
    std::size_t score;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i)
    scored.push_back({lcs_length(linearize(doc[i].parse, opts), summary_tokens), i});

  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    return a.score != b.score ? a.score > b.score : a.index < b.index;
  });

  SideDocument side;
  side.mode = SideMode::LcsPruned;
  side.k = k;
  for (std::size_t i = 0; i < scored.size() && i < k; ++i)
    side.sentences.push_back(doc[scored[i].index].sentence);
  return side;
}

SideDocument oracle_side(const std::vector<TokenSeq>& gold_summary) {
  if (gold_summary.empty()) throw std::invalid_argument("oracle_side: empty gold summary");
  SideDocument side;
  side.mode = SideMode::Oracle;
  side.sentences = gold_summary;
  return side;
}

}  // namespace amrsumm
