#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace amrsumm {

// A whitespace-free token sequence: linearized graphs, sentences, summaries
// all travel through the pipeline in this form.
using TokenSeq = std::vector<std::string>;

TokenSeq split_tokens(const std::string& line);
std::string join_tokens(const TokenSeq& tokens);

struct AmrNode {
  std::string id;       // variable name, or synthetic id for constants
  std::string label;    // concept label (constants keep their literal)
};

struct AmrEdge {
  std::string source;
  std::string relation;  // includes the leading ':'
  std::string target;
};

// Rooted labeled directed graph. Node ids are unique; concept labels are not.
struct AmrGraph {
  std::vector<AmrNode> nodes;
  std::vector<AmrEdge> edges;
  std::string root;

  const AmrNode* find_node(const std::string& id) const;
  bool has_node(const std::string& id) const { return find_node(id) != nullptr; }
  // Outgoing edge indices per node, in insertion order.
  std::vector<std::size_t> out_edges(const std::string& id) const;
  // Node ids not reachable from root via directed edges; empty means connected.
  std::vector<std::string> unreachable_nodes() const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Reads one PENMAN expression `(var / concept :rel (...) ...)` into a graph.
// Variables introduce nodes; bare mentions of a variable become re-entrant
// edges; string/numeric/`-` constants become leaf nodes with synthetic ids.
// Malformed input raises ParseError carrying the byte offset.
AmrGraph parse_penman(const std::string& text);

// Serializes a rooted connected graph back to PENMAN. Re-entrancies print as
// bare variable mentions; constant nodes print as quoted or literal constants.
std::string to_penman(const AmrGraph& graph);

struct LinearizeOptions {
  std::size_t max_reentrancy_depth = 1;
  bool strip_senses = true;
  bool strip_wiki = true;
  bool lowercase = true;
};

// Depth-first linearization: `(`, concept, `:rel` tokens, `)`, variable ids
// dropped. Re-entrant targets are re-expanded while depth budget remains,
// otherwise only the concept token is emitted. Children keep edge order.
TokenSeq linearize(const AmrGraph& graph, const LinearizeOptions& opts = {});

// Collapses nodes with equal concept labels into one (first-seen node id
// wins), re-targets and dedupes edges, then attaches every original root
// under a synthetic `multi-sentence` root via :snt1, :snt2, ... edges.
AmrGraph merge_graphs(const std::vector<AmrGraph>& graphs);

// One block of the standard AMR release text format.
struct AmrBlock {
  std::string id;                      // from `# ::id`, may be empty
  std::string sentence;                // from `# ::snt`, may be empty
  std::string penman;                  // the raw PENMAN text
  std::size_t line = 0;                // 1-based line where the block starts
};

// Splits an AMR release file into blocks: blank-line separated, `# ::` comment
// lines carry metadata, the remainder of a block is the PENMAN expression.
// Blocks with no PENMAN payload (pure comments) are skipped.
std::vector<AmrBlock> read_amr_blocks(const std::string& file_contents);

}  // namespace amrsumm
