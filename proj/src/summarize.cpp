#include "amrsumm/summarize.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace amrsumm {

namespace {

double weighted(const Vector& weights, const Vector& features, const char* what) {
  if (weights.size() != features.size())
    throw std::invalid_argument(std::string("score_subgraph: ") + what +
                                " feature/weight dimension mismatch");
  return dot(weights, features);
}

}  // namespace

double score_subgraph(const SubgraphObjective& obj, const AmrGraph& g) {
  double score = 0.0;
  for (const AmrNode& n : g.nodes) score += weighted(obj.node_weights, obj.node_featurizer(g, n), "node");
  for (const AmrEdge& e : g.edges) score += weighted(obj.edge_weights, obj.edge_featurizer(g, e), "edge");
  return score;
}

namespace {

struct IndexedGraph {
  std::vector<std::size_t> node_index;           // positions into source.nodes
  std::unordered_map<std::string, std::size_t> id_to_index;
};

AmrGraph subgraph_from_mask(const AmrGraph& source, const std::vector<bool>& chosen,
                            const std::unordered_map<std::string, std::size_t>& index_of) {
  AmrGraph out;
  out.root = source.root;
  for (std::size_t i = 0; i < source.nodes.size(); ++i)
    if (chosen[i]) out.nodes.push_back(source.nodes[i]);
  for (const AmrEdge& e : source.edges)
    if (chosen[index_of.at(e.source)] && chosen[index_of.at(e.target)]) out.edges.push_back(e);
  return out;
}

bool connected_from_root(const AmrGraph& source, const std::vector<bool>& chosen,
                         const std::unordered_map<std::string, std::size_t>& index_of,
                         std::size_t root_index, std::size_t chosen_count) {
  std::vector<bool> seen(source.nodes.size(), false);
  std::deque<std::size_t> queue{root_index};
  seen[root_index] = true;
  std::size_t found = 1;
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    for (const AmrEdge& e : source.edges) {
      if (index_of.at(e.source) != cur) continue;
      std::size_t t = index_of.at(e.target);
      if (chosen[t] && !seen[t]) {
        seen[t] = true;
        ++found;
        queue.push_back(t);
      }
    }
  }
  return found == chosen_count;
}

AmrGraph extract_greedy(const SubgraphObjective& obj, const AmrGraph& source,
                        const std::unordered_map<std::string, std::size_t>& index_of) {
  std::size_t n = source.nodes.size();
  std::size_t root_index = index_of.at(source.root);
  std::vector<double> node_score(n);
  for (std::size_t i = 0; i < n; ++i)
    node_score[i] = weighted(obj.node_weights, obj.node_featurizer(source, source.nodes[i]), "node");
  std::vector<double> edge_score(source.edges.size());
  for (std::size_t e = 0; e < source.edges.size(); ++e)
    edge_score[e] =
        weighted(obj.edge_weights, obj.edge_featurizer(source, source.edges[e]), "edge");

  std::vector<bool> chosen(n, false);
  chosen[root_index] = true;
  std::size_t count = 1;

  while (count < obj.budget) {
    // Frontier: nodes reachable by one edge from the chosen set. Marginal
    // gain counts the node plus every induced edge it brings in.
    double best_gain = 0.0;
    std::size_t best_node = n;
    for (std::size_t cand = 0; cand < n; ++cand) {
      if (chosen[cand]) continue;
      bool frontier = false;
      double gain = node_score[cand];
      for (std::size_t e = 0; e < source.edges.size(); ++e) {
        std::size_t s = index_of.at(source.edges[e].source);
        std::size_t t = index_of.at(source.edges[e].target);
        if (s == cand && chosen[t]) gain += edge_score[e];
        if (t == cand && chosen[s]) {
          gain += edge_score[e];
          frontier = true;  // expansion must stay reachable from the root
        }
      }
      if (!frontier || gain <= 0.0) continue;
      if (best_node == n || gain > best_gain ||
          (gain == best_gain && source.nodes[cand].id < source.nodes[best_node].id)) {
        best_gain = gain;
        best_node = cand;
      }
    }
    if (best_node == n) break;
    chosen[best_node] = true;
    ++count;
  }
  return subgraph_from_mask(source, chosen, index_of);
}

AmrGraph extract_exhaustive(const SubgraphObjective& obj, const AmrGraph& source,
                            const std::unordered_map<std::string, std::size_t>& index_of) {
  std::size_t n = source.nodes.size();
  if (n > 22)
    throw std::invalid_argument("extract_summary_graph: exhaustive mode supports <= 22 nodes");
  std::size_t root_index = index_of.at(source.root);

  double best_score = 0.0;
  std::vector<bool> best_mask;
  bool have_best = false;

  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    if (!(mask & (1ull << root_index))) continue;
    std::vector<bool> chosen(n, false);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) {
        chosen[i] = true;
        ++count;
      }
    if (count > obj.budget) continue;
    if (!connected_from_root(source, chosen, index_of, root_index, count)) continue;
    double score = score_subgraph(obj, subgraph_from_mask(source, chosen, index_of));
    if (!have_best || score > best_score) {
      have_best = true;
      best_score = score;
      best_mask = chosen;
    }
  }
  return subgraph_from_mask(source, best_mask, index_of);
}

}  // namespace

AmrGraph extract_summary_graph(const SubgraphObjective& obj, const AmrGraph& source,
                               ExtractMode mode) {
  if (obj.budget < 1) throw std::invalid_argument("extract_summary_graph: budget must be >= 1");
  if (!source.has_node(source.root))
    throw std::invalid_argument("extract_summary_graph: source has no root node");
  if (!source.unreachable_nodes().empty())
    throw std::invalid_argument("extract_summary_graph: source graph is disconnected");

  std::unordered_map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < source.nodes.size(); ++i) index_of[source.nodes[i].id] = i;

  if (mode == ExtractMode::Auto)
    mode = source.nodes.size() <= 10 ? ExtractMode::Exhaustive : ExtractMode::Greedy;
  return mode == ExtractMode::Exhaustive ? extract_exhaustive(obj, source, index_of)
                                         : extract_greedy(obj, source, index_of);
}

SubgraphObjective make_default_objective(const std::vector<AmrGraph>& sentence_graphs,
                                         const AmrGraph& merged, double budget_fraction) {
  // Document frequency: fraction of sentence graphs mentioning the concept.
  auto doc_freq = std::make_shared<std::unordered_map<std::string, double>>();
  for (const AmrGraph& g : sentence_graphs) {
    std::unordered_set<std::string> concepts;
    for (const AmrNode& n : g.nodes) concepts.insert(n.label);
    for (const auto& c : concepts) (*doc_freq)[c] += 1.0;
  }
  double denom = sentence_graphs.empty() ? 1.0 : static_cast<double>(sentence_graphs.size());
  for (auto& [c, v] : *doc_freq) v /= denom;

  // Depth from the merged root.
  auto depth = std::make_shared<std::unordered_map<std::string, double>>();
  {
    std::deque<std::pair<std::string, double>> queue{{merged.root, 0.0}};
    (*depth)[merged.root] = 0.0;
    while (!queue.empty()) {
      auto [id, d] = queue.front();
      queue.pop_front();
      for (const AmrEdge& e : merged.edges)
        if (e.source == id && !depth->count(e.target)) {
          (*depth)[e.target] = d + 1.0;
          queue.push_back({e.target, d + 1.0});
        }
    }
  }

  // Relation frequency share in the merged graph.
  auto rel_freq = std::make_shared<std::unordered_map<std::string, double>>();
  for (const AmrEdge& e : merged.edges) (*rel_freq)[e.relation] += 1.0;
  double edge_denom = merged.edges.empty() ? 1.0 : static_cast<double>(merged.edges.size());
  for (auto& [r, v] : *rel_freq) v /= edge_denom;

  SubgraphObjective obj;
  obj.node_featurizer = [doc_freq, depth](const AmrGraph&, const AmrNode& n) -> Vector {
    auto df = doc_freq->find(n.label);
    auto dp = depth->find(n.id);
    bool ne_like = std::any_of(n.label.begin(), n.label.end(), [](unsigned char c) {
      return std::isupper(c) || std::isdigit(c);
    });
    return {df == doc_freq->end() ? 0.0 : df->second, dp == depth->end() ? 0.0 : dp->second,
            ne_like ? 1.0 : 0.0};
  };
  obj.edge_featurizer = [rel_freq](const AmrGraph&, const AmrEdge& e) -> Vector {
    auto one = [&](const char* rel) { return e.relation == rel ? 1.0 : 0.0; };
    bool core = e.relation.rfind(":ARG", 0) == 0;
    auto rf = rel_freq->find(e.relation);
    return {one(":ARG0"), one(":ARG1"),
            core && e.relation != ":ARG0" && e.relation != ":ARG1" ? 1.0 : 0.0,
            core ? 0.0 : 1.0, rf == rel_freq->end() ? 0.0 : rf->second};
  };
  obj.node_weights = {1.0, -0.05, 0.25};
  obj.edge_weights = {0.30, 0.30, 0.15, 0.05, 0.20};
  obj.budget = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(budget_fraction * static_cast<double>(merged.nodes.size()))));
  return obj;
}

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(name) + ": " + e.what());
  }
}

}  // namespace

TokenSeq summarize_document(const std::vector<ParsedSentence>& doc, const SubgraphObjective& obj,
                            const Seq2SeqParams& model, const GuidanceSpec& guidance,
                            const FusionConfig& fusion, const InterpolationWeights& lm_weights,
                            const LinearizeOptions& opts) {
  if (doc.empty()) throw std::invalid_argument("summarize_document: empty document");

  std::vector<AmrGraph> graphs;
  for (const ParsedSentence& s : doc) graphs.push_back(s.parse);

  AmrGraph merged = stage("merge", [&] { return merge_graphs(graphs); });
  AmrGraph summary_graph =
      stage("extract", [&] { return extract_summary_graph(obj, merged); });
  TokenSeq lin = stage("linearize", [&] { return linearize(summary_graph, opts); });

  std::optional<SideDocument> side;
  if (guidance.mode == GuidanceMode::LcsPruned)
    side = stage("side_select",
                 [&] { return select_side_sentences(doc, summary_graph, guidance.k, opts); });
  else if (guidance.mode == GuidanceMode::Oracle)
    side = stage("side_oracle", [&] { return oracle_side(guidance.gold); });

  std::optional<NGramModel> lm;
  std::optional<Guidance> beam_side;
  if (side) {
    lm = stage("ngram", [&] { return build_counts(*side, kDefaultNgramOrder); });
    beam_side = Guidance{&*lm, lm_weights};
  }

  Seq2SeqBeamModel beam_model(model);
  auto ranked =
      stage("decode", [&] { return beam_search(beam_model, lin, beam_side, fusion); });
  if (ranked.empty()) throw std::runtime_error("decode: beam search produced no hypotheses");
  return ranked.front().first;
}

}  // namespace amrsumm
