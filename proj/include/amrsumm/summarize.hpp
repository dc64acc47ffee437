#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "amrsumm/amr.hpp"
#include "amrsumm/guided_decode.hpp"
#include "amrsumm/ngram_lm.hpp"
#include "amrsumm/seq2seq.hpp"
#include "amrsumm/side_info.hpp"
#include "amrsumm/tensor.hpp"

namespace amrsumm {

// Linear subgraph objective: sum of node_weights . f(v) over chosen nodes plus
// edge_weights . f(e) over induced edges. A candidate subgraph is a node set
// containing the root, connected from it, together with every source edge
// whose endpoints are both chosen.
struct SubgraphObjective {
  Vector node_weights;
  Vector edge_weights;
  std::function<Vector(const AmrGraph&, const AmrNode&)> node_featurizer;
  std::function<Vector(const AmrGraph&, const AmrEdge&)> edge_featurizer;
  std::size_t budget = 1;  // maximum node count
};

double score_subgraph(const SubgraphObjective& obj, const AmrGraph& g);

enum class ExtractMode {
  Auto,        // exhaustive for sources up to 10 nodes, greedy otherwise
  Greedy,      // best-first frontier expansion while gains stay positive
  Exhaustive,  // true argmax over all connected rooted subsets within budget
};

AmrGraph extract_summary_graph(const SubgraphObjective& obj, const AmrGraph& source,
                               ExtractMode mode = ExtractMode::Auto);

// Stand-in featurizers (the objective is pluggable): node features are
// (document frequency of the concept across sentence graphs, depth from the
// merged root, named-entity-like flag); edge features are a one-hot over core
// roles plus the relation's frequency share.
SubgraphObjective make_default_objective(const std::vector<AmrGraph>& sentence_graphs,
                                         const AmrGraph& merged,
                                         double budget_fraction = 0.15);

enum class GuidanceMode { None, LcsPruned, Oracle };

struct GuidanceSpec {
  GuidanceMode mode = GuidanceMode::None;
  std::size_t k = 15;             // lcs_pruned sentence budget
  std::vector<TokenSeq> gold;     // oracle summary sentences
};

// Full pipeline: merge sentence graphs, extract the summary subgraph,
// linearize, build guidance, beam-decode. Stage failures are rethrown with
// the stage name prefixed.
TokenSeq summarize_document(const std::vector<ParsedSentence>& doc, const SubgraphObjective& obj,
                            const Seq2SeqParams& model, const GuidanceSpec& guidance,
                            const FusionConfig& fusion, const InterpolationWeights& lm_weights,
                            const LinearizeOptions& opts = {});

}  // namespace amrsumm
