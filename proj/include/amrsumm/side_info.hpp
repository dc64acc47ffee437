#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "amrsumm/amr.hpp"

namespace amrsumm {

enum class SideMode { Oracle, LcsPruned };

// The pruned source document (or gold summary) that guides decoding.
// Sentences are kept in descending order of selection score, ties broken by
// original document order.
struct SideDocument {
  std::vector<TokenSeq> sentences;
  SideMode mode = SideMode::LcsPruned;
  std::size_t k = 0;
};

// Length of the longest common subsequence under exact token equality.
std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b);

// One source sentence paired with its AMR parse.
struct ParsedSentence {
  TokenSeq sentence;
  AmrGraph parse;
};

// Scores every sentence by the LCS between its linearized parse and the
// linearized summary graph, then keeps the top-k surface sentences.
SideDocument select_side_sentences(const std::vector<ParsedSentence>& doc,
                                   const AmrGraph& summary_graph, std::size_t k,
                                   const LinearizeOptions& opts = {});

// Wraps the gold summary sentences unchanged (the oracle guidance setting).
SideDocument oracle_side(const std::vector<TokenSeq>& gold_summary);

}  // namespace amrsumm
