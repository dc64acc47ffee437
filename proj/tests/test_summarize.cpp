#include <doctest.h>

#include <cmath>
#include <random>
#include <unordered_map>

#include "amrsumm/metrics.hpp"
#include "amrsumm/summarize.hpp"
#include "testutil.hpp"

using namespace amrsumm;

namespace {

// Featurizers with one deterministic pseudo-random feature per node/edge.
SubgraphObjective hashed_objective(std::uint64_t seed, std::size_t budget) {
  SubgraphObjective obj;
  obj.node_weights = {1.0};
  obj.edge_weights = {1.0};
  obj.node_featurizer = [seed](const AmrGraph&, const AmrNode& n) -> Vector {
    std::uint64_t h = testutil::splitmix64(seed ^ std::hash<std::string>{}(n.id));
    return {static_cast<double>(h % 2001) / 1000.0 - 1.0};  // [-1, 1]
  };
  obj.edge_featurizer = [seed](const AmrGraph&, const AmrEdge& e) -> Vector {
    std::uint64_t h = testutil::splitmix64(
        seed ^ std::hash<std::string>{}(e.source + "|" + e.relation + "|" + e.target));
    return {static_cast<double>(h % 2001) / 1000.0 - 1.0};
  };
  obj.budget = budget;
  return obj;
}

// Test-side enumeration of connected rooted subsets with induced edges.
struct BestSubgraph {
  double score = 0.0;
  std::size_t nodes = 0;
};

BestSubgraph enumerate_best(const SubgraphObjective& obj, const AmrGraph& g) {
  std::size_t n = g.nodes.size();
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx[g.nodes[i].id] = i;
  std::size_t root = idx.at(g.root);

  BestSubgraph best;
  bool have = false;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    if (!(mask & (1ull << root))) continue;
    std::size_t count = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (count > obj.budget) continue;

    // Reachability from the root using only in-mask nodes.
    std::uint64_t seen = 1ull << root;
    bool grew = true;
    while (grew) {
      grew = false;
      for (const AmrEdge& e : g.edges) {
        std::uint64_t s = 1ull << idx.at(e.source), t = 1ull << idx.at(e.target);
        if ((seen & s) && (mask & t) && !(seen & t)) {
          seen |= t;
          grew = true;
        }
      }
    }
    if (seen != mask) continue;

    double score = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) score += obj.node_featurizer(g, g.nodes[i])[0];
    for (const AmrEdge& e : g.edges)
      if ((mask & (1ull << idx.at(e.source))) && (mask & (1ull << idx.at(e.target))))
        score += obj.edge_featurizer(g, e)[0];
    if (!have || score > best.score) {
      have = true;
      best = {score, count};
    }
  }
  return best;
}

}  // namespace

TEST_CASE("score_subgraph basics") {
  SubgraphObjective obj;
  obj.node_weights = {2.0, 5.0};
  obj.edge_weights = {1.0};
  obj.node_featurizer = [](const AmrGraph&, const AmrNode&) -> Vector { return {1.0, 0.0}; };
  obj.edge_featurizer = [](const AmrGraph&, const AmrEdge&) -> Vector { return {1.0}; };
  obj.budget = 3;

  AmrGraph empty;
  CHECK(score_subgraph(obj, empty) == 0.0);

  AmrGraph one;
  one.nodes = {{"a", "apple"}};
  one.root = "a";
  CHECK(score_subgraph(obj, one) == doctest::Approx(2.0));

  obj.node_weights = {2.0};  // dimension mismatch vs 2-feature output
  CHECK_THROWS_AS(score_subgraph(obj, one), std::invalid_argument);
}

TEST_CASE("score_subgraph is additive over disjoint unions") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 30; ++trial) {
    SubgraphObjective obj = hashed_objective(rng(), 100);
    AmrGraph g1 = testutil::random_graph(rng, 1 + rng() % 5);
    AmrGraph g2 = testutil::random_graph(rng, 1 + rng() % 5);
    for (auto& node : g2.nodes) node.id = "m" + node.id;  // keep ids disjoint
    for (auto& e : g2.edges) {
      e.source = "m" + e.source;
      e.target = "m" + e.target;
    }
    g2.root = "m" + g2.root;

    AmrGraph both = g1;
    both.nodes.insert(both.nodes.end(), g2.nodes.begin(), g2.nodes.end());
    both.edges.insert(both.edges.end(), g2.edges.begin(), g2.edges.end());
    CHECK(score_subgraph(obj, both) ==
          doctest::Approx(score_subgraph(obj, g1) + score_subgraph(obj, g2)).epsilon(1e-12));
  }
}

TEST_CASE("zero weights extract the root alone") {
  AmrGraph g = parse_penman("(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-01))");
  SubgraphObjective obj;
  obj.node_weights = {0.0};
  obj.edge_weights = {0.0};
  obj.node_featurizer = [](const AmrGraph&, const AmrNode&) -> Vector { return {1.0}; };
  obj.edge_featurizer = [](const AmrGraph&, const AmrEdge&) -> Vector { return {1.0}; };
  obj.budget = 3;
  for (ExtractMode mode : {ExtractMode::Greedy, ExtractMode::Exhaustive}) {
    AmrGraph sub = extract_summary_graph(obj, g, mode);
    CHECK(sub.nodes.size() == 1);
    CHECK(sub.nodes[0].id == "w");
    CHECK(sub.edges.empty());
  }
}

TEST_CASE("star graph: budget two picks the single positive leaf") {
  AmrGraph g = parse_penman("(r / root :op1 (a / alpha) :op2 (b / beta) :op3 (c / gamma))");
  SubgraphObjective obj;
  obj.node_weights = {1.0};
  obj.edge_weights = {1.0};
  obj.node_featurizer = [](const AmrGraph&, const AmrNode& n) -> Vector {
    return {n.label == "beta" ? 2.0 : (n.label == "root" ? 0.5 : -1.0)};
  };
  obj.edge_featurizer = [](const AmrGraph&, const AmrEdge&) -> Vector { return {0.0}; };
  obj.budget = 2;
  AmrGraph sub = extract_summary_graph(obj, g, ExtractMode::Exhaustive);
  REQUIRE(sub.nodes.size() == 2);
  CHECK(sub.find_node("r") != nullptr);
  CHECK(sub.find_node("b") != nullptr);
  REQUIRE(sub.edges.size() == 1);
  CHECK(sub.edges[0].relation == ":op2");
}

TEST_CASE("exhaustive extraction matches independent enumeration; greedy never beats it") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + rng() % 9;  // up to 10 nodes
    AmrGraph g = testutil::random_graph(rng, n);
    SubgraphObjective obj = hashed_objective(rng(), 1 + rng() % n);

    AmrGraph exhaustive = extract_summary_graph(obj, g, ExtractMode::Exhaustive);
    AmrGraph greedy = extract_summary_graph(obj, g, ExtractMode::Greedy);
    BestSubgraph oracle = enumerate_best(obj, g);

    double ex_score = score_subgraph(obj, exhaustive);
    double gr_score = score_subgraph(obj, greedy);
    CHECK(ex_score == doctest::Approx(oracle.score).epsilon(1e-9));
    CHECK(gr_score <= ex_score + 1e-9);

    for (const AmrGraph* sub : {&exhaustive, &greedy}) {
      CHECK(sub->nodes.size() <= obj.budget);
      CHECK(sub->root == g.root);
      CHECK(sub->find_node(sub->root) != nullptr);
      CHECK(sub->unreachable_nodes().empty());
      CHECK(score_subgraph(obj, *sub) >=
            obj.node_featurizer(g, *g.find_node(g.root))[0] - 1e-9);
    }
  }
}

TEST_CASE("auto mode uses exhaustive search on small graphs") {
  std::mt19937_64 rng(97);
  AmrGraph g = testutil::random_graph(rng, 8);
  SubgraphObjective obj = hashed_objective(123, 4);
  AmrGraph via_auto = extract_summary_graph(obj, g, ExtractMode::Auto);
  AmrGraph via_ex = extract_summary_graph(obj, g, ExtractMode::Exhaustive);
  CHECK(score_subgraph(obj, via_auto) == doctest::Approx(score_subgraph(obj, via_ex)));
}

TEST_CASE("default objective budgets proportionally and scores doc-frequent concepts") {
  std::vector<AmrGraph> graphs = {
      parse_penman("(a / attack-01 :ARG0 (r / russia))"),
      parse_penman("(s / say-01 :ARG0 (r / russia) :ARG1 (a / attack-01))"),
      parse_penman("(w / warn-01 :ARG1 (g / georgia))"),
  };
  AmrGraph merged = merge_graphs(graphs);
  SubgraphObjective obj = make_default_objective(graphs, merged);
  CHECK(obj.budget == static_cast<std::size_t>(std::ceil(0.15 * merged.nodes.size())));

  const AmrNode* russia = nullptr;
  const AmrNode* georgia = nullptr;
  for (const auto& n : merged.nodes) {
    if (n.label == "russia") russia = &n;
    if (n.label == "georgia") georgia = &n;
  }
  REQUIRE(russia != nullptr);
  REQUIRE(georgia != nullptr);
  // russia appears in two sentence graphs, georgia in one.
  CHECK(obj.node_featurizer(merged, *russia)[0] >
        obj.node_featurizer(merged, *georgia)[0]);

  AmrGraph sub = extract_summary_graph(obj, merged);
  CHECK(!sub.nodes.empty());
  CHECK(sub.unreachable_nodes().empty());
}

namespace {

struct PipelineFixture {
  std::vector<Document> train_docs;
  std::vector<Document> test_docs;
  Seq2SeqParams params;

  static std::vector<ParsedSentence> parsed(const Document& doc) {
    std::vector<ParsedSentence> out;
    for (std::size_t i = 0; i < doc.sentences.size(); ++i)
      out.push_back({split_tokens(doc.sentences[i]), parse_penman(doc.amrs[i])});
    return out;
  }

  // Objective that keeps the whole merged graph: the linearization then
  // carries every document concept.
  static SubgraphObjective keep_all(const AmrGraph& merged) {
    SubgraphObjective obj;
    obj.node_weights = {1.0};
    obj.edge_weights = {0.1};
    obj.node_featurizer = [](const AmrGraph&, const AmrNode&) -> Vector { return {1.0}; };
    obj.edge_featurizer = [](const AmrGraph&, const AmrEdge&) -> Vector { return {1.0}; };
    obj.budget = merged.nodes.size();
    return obj;
  }

  PipelineFixture()
      : train_docs(testutil::synth_corpus(2024, 30)),
        test_docs(testutil::synth_corpus(7777, 20)),
        params(make_params()) {}

  Seq2SeqParams make_params() {
    // Document-graph linearization -> gold summary pairs.
    std::vector<TrainPair> pairs;
    std::vector<TokenSeq> sources, targets;
    for (const Document& doc : train_docs) {
      auto ps = parsed(doc);
      std::vector<AmrGraph> graphs;
      for (auto& s : ps) graphs.push_back(s.parse);
      AmrGraph merged = merge_graphs(graphs);
      AmrGraph sub = extract_summary_graph(keep_all(merged), merged, ExtractMode::Greedy);
      TokenSeq lin = linearize(sub);
      TokenSeq summary = split_tokens(doc.summary);
      pairs.emplace_back(lin, summary);
      sources.push_back(lin);
      targets.push_back(summary);
    }
    Vocab src = Vocab::build(sources);
    Vocab tgt = Vocab::build(targets);
    Seq2SeqParams init = Seq2SeqParams::init(src, tgt, 16, 32, 3);
    TrainOptions opts;
    opts.learning_rate = 0.25;
    opts.epochs = 6;  // deliberately underfit
    opts.seed = 17;
    return train(init, pairs, opts).params;
  }
};

}  // namespace

TEST_CASE("summarize_document composes the stages it names") {
  PipelineFixture fix;
  const Document& doc = fix.test_docs[0];
  auto ps = PipelineFixture::parsed(doc);
  std::vector<AmrGraph> graphs;
  for (auto& s : ps) graphs.push_back(s.parse);
  AmrGraph merged = merge_graphs(graphs);
  SubgraphObjective obj = PipelineFixture::keep_all(merged);

  FusionConfig fusion;
  fusion.beam_width = 4;
  fusion.max_length = 12;
  InterpolationWeights lw = lambdas_from_theta(2.5);

  GuidanceSpec none;
  TokenSeq via_pipeline = summarize_document(ps, obj, fix.params, none, fusion, lw);

  AmrGraph sub = extract_summary_graph(obj, merged);
  TokenSeq lin = linearize(sub);
  Seq2SeqBeamModel beam_model(fix.params);
  auto ranked = beam_search(beam_model, lin, std::nullopt, fusion);
  CHECK(via_pipeline == ranked.front().first);

  // Determinism end to end.
  CHECK(summarize_document(ps, obj, fix.params, none, fusion, lw) == via_pipeline);
}

TEST_CASE("oracle guidance never hurts the summary metrics on the toy corpus") {
  PipelineFixture fix;
  FusionConfig fusion;
  fusion.beam_width = 4;
  fusion.max_length = 12;
  InterpolationWeights lw = lambdas_from_theta(2.5);

  std::vector<TokenSeq> unguided, guided, refs;
  for (const Document& doc : fix.test_docs) {
    auto ps = PipelineFixture::parsed(doc);
    std::vector<AmrGraph> graphs;
    for (auto& s : ps) graphs.push_back(s.parse);
    SubgraphObjective obj = PipelineFixture::keep_all(merge_graphs(graphs));

    GuidanceSpec none;
    GuidanceSpec oracle;
    oracle.mode = GuidanceMode::Oracle;
    oracle.gold = {split_tokens(doc.summary)};

    unguided.push_back(summarize_document(ps, obj, fix.params, none, fusion, lw));
    guided.push_back(summarize_document(ps, obj, fix.params, oracle, fusion, lw));
    refs.push_back(split_tokens(doc.summary));
  }
  double bleu_unguided = bleu(unguided, refs);
  double bleu_guided = bleu(guided, refs);
  CHECK(bleu_guided >= bleu_unguided);
}

TEST_CASE("single-sentence document: the only candidate is the side document") {
  Document doc = testutil::synth_corpus(5150, 1)[0];
  AmrGraph parse = parse_penman(doc.amrs[0]);
  std::vector<ParsedSentence> ps = {{split_tokens(doc.sentences[0]), parse}};
  SideDocument side = select_side_sentences(ps, parse, 1);
  REQUIRE(side.sentences.size() == 1);
  CHECK(side.sentences[0] == split_tokens(doc.sentences[0]));
}

TEST_CASE("stage failures carry the stage name") {
  PipelineFixture fix;
  auto ps = PipelineFixture::parsed(fix.test_docs[0]);
  SubgraphObjective broken;
  broken.node_weights = {1.0, 2.0};  // mismatched with the 1-feature featurizer
  broken.edge_weights = {1.0};
  broken.node_featurizer = [](const AmrGraph&, const AmrNode&) -> Vector { return {1.0}; };
  broken.edge_featurizer = [](const AmrGraph&, const AmrEdge&) -> Vector { return {1.0}; };
  broken.budget = 5;
  FusionConfig fusion;
  InterpolationWeights lw = lambdas_from_theta(2.5);
  CHECK_THROWS_WITH_AS(
      summarize_document(ps, broken, fix.params, GuidanceSpec{}, fusion, lw),
      doctest::Contains("extract:"), std::runtime_error);
}
