// Acceptance suite: one pass/fail line per criterion, each with a wall-clock
// budget. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "amrsumm/guided_decode.hpp"
#include "amrsumm/metrics.hpp"
#include "amrsumm/ngram_lm.hpp"
#include "amrsumm/seq2seq.hpp"
#include "amrsumm/side_info.hpp"
#include "amrsumm/summarize.hpp"
#include "testutil.hpp"

using namespace amrsumm;

namespace {

struct Checker {
  bool ok = true;
  std::string reason;

  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      reason = why;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& label, double budget_seconds,
               const std::function<void(Checker&)>& body) {
  Checker check;
  auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.require(false, std::string("exception: ") + e.what());
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.require(elapsed < budget_seconds,
                "runtime " + std::to_string(elapsed) + "s over budget " +
                    std::to_string(budget_seconds) + "s");
  if (check.ok) {
    std::printf("[PASS] %2d %s (%.2fs)\n", id, label.c_str(), elapsed);
  } else {
    std::printf("[FAIL] %2d %s (%.2fs): %s\n", id, label.c_str(), elapsed,
                check.reason.c_str());
    ++failures;
  }
  std::fflush(stdout);
}

double uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------

void fusion_identity(Checker& check) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    double a = 1e-9 + uniform(rng) * (1.0 - 1e-9);
    bool zero_b = rng() % 2 == 0;
    double b = zero_b ? 0.0 : uniform(rng);
    double psi = zero_b ? uniform(rng) : 0.0;
    double got = fused_score(a, b, psi);
    check.require(std::abs(got - std::log(a)) <= 1e-12,
                  "fused(" + std::to_string(a) + "," + std::to_string(b) + "," +
                      std::to_string(psi) + ") != log a");
  }
}

void fusion_arithmetic(Checker& check) {
  double got = fused_score(0.5, 0.5, 0.95);
  check.require(std::abs(got - (-0.0347)) <= 1e-4,
                "fused(0.5,0.5,0.95) = " + std::to_string(got));
}

void lambda_family(Checker& check) {
  InterpolationWeights w = lambdas_from_theta(2.5);
  check.require(std::abs(w.lambdas[0] - 0.102564) <= 1e-6, "lambda1");
  check.require(std::abs(w.lambdas[1] - 0.256410) <= 1e-6, "lambda2");
  check.require(std::abs(w.lambdas[2] - 0.641026) <= 1e-6, "lambda3");
  check.require(std::abs(w.lambdas[0] + w.lambdas[1] + w.lambdas[2] - 1.0) <= 1e-12,
                "lambdas do not sum to 1");
  check.require(std::abs(w.lambdas[1] / w.lambdas[0] - 2.5) <= 1e-9, "ratio lambda2/lambda1");
  check.require(std::abs(w.lambdas[2] / w.lambdas[1] - 2.5) <= 1e-9, "ratio lambda3/lambda2");
}

void lm_normalization(Checker& check) {
  std::mt19937_64 rng(2);
  InterpolationWeights weights = lambdas_from_theta(2.5);
  for (int trial = 0; trial < 50; ++trial) {
    SideDocument side;
    side.mode = SideMode::LcsPruned;
    std::size_t n_sent = 1 + rng() % 3;
    side.k = n_sent;
    for (std::size_t s = 0; s < n_sent; ++s) {
      TokenSeq sent = testutil::random_tokens(rng, 5, 3);
      if (sent.empty()) sent.push_back("a");
      side.sentences.push_back(sent);
    }
    NGramModel model = build_counts(side, 4);

    // Every observed context of order < max_order. Contexts ending in the
    // sentence-end marker have no continuations by construction and are the
    // stated truncation exception.
    std::ostringstream dumped;
    model.dump(dumped);
    std::istringstream in(dumped.str());
    std::string line;
    while (std::getline(in, line)) {
      TokenSeq parts = split_tokens(line);
      TokenSeq ngram(parts.begin() + 1, parts.end());
      if (ngram.size() >= 4 || ngram.back() == kSentEnd) continue;
      double sum = 0.0;
      for (const auto& w : model.vocab()) sum += p_lm(model, w, ngram);
      check.require(std::abs(sum - 1.0) <= 1e-9,
                    "p_lm sum " + std::to_string(sum) + " for context " + join_tokens(ngram));
    }

    std::array<std::string, 3> contexts[] = {
        {kSentBegin, kSentBegin, kSentBegin},
        side_context(side.sentences[0]),
        {"a", "b", "c"},
    };
    for (const auto& ctx : contexts) {
      double sum = 0.0;
      for (const auto& w : model.vocab()) sum += p_side(model, w, ctx, weights);
      check.require(sum <= 1.0 + 1e-9, "p_side sum " + std::to_string(sum));
    }
  }
}

void lcs_oracle_agreement(Checker& check) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    TokenSeq a = testutil::random_tokens(rng, 8);
    TokenSeq b = testutil::random_tokens(rng, 8);
    std::size_t got = lcs_length(a, b);
    std::size_t want = testutil::lcs_oracle(a, b);
    check.require(got == want, "lcs(" + join_tokens(a) + "; " + join_tokens(b) + ") = " +
                                   std::to_string(got) + ", oracle " + std::to_string(want));
  }
}

void beam_exhaustive_equivalence(Checker& check) {
  std::mt19937_64 rng(4);
  SideDocument side;
  side.mode = SideMode::LcsPruned;
  side.k = 2;
  side.sentences = {split_tokens("a b a"), split_tokens("c b")};
  NGramModel lm = build_counts(side, 4);
  Guidance guidance{&lm, lambdas_from_theta(2.5)};

  for (int trial = 0; trial < 100; ++trial) {
    testutil::ToyModel model({"<s>", "</s>", "a", "b", "c"}, rng());
    FusionConfig cfg;
    cfg.psi = 0.95;
    cfg.beam_width = 125;
    cfg.max_length = 3;

    auto plain = beam_search(model, {"x"}, std::nullopt, cfg);
    auto plain_oracle = testutil::exhaustive_decode(model, {"x"}, std::nullopt, cfg.psi, 3);
    check.require(!plain.empty() && plain[0].first == plain_oracle[0].tokens &&
                      std::abs(plain[0].second - plain_oracle[0].score) <= 1e-9,
                  "unguided argmax mismatch at trial " + std::to_string(trial));

    auto guided = beam_search(model, {"x"}, guidance, cfg);
    auto guided_oracle = testutil::exhaustive_decode(model, {"x"}, guidance, cfg.psi, 3);
    check.require(!guided.empty() && guided[0].first == guided_oracle[0].tokens &&
                      std::abs(guided[0].second - guided_oracle[0].score) <= 1e-9,
                  "guided argmax mismatch at trial " + std::to_string(trial));
  }
}

void gradient_check(Checker& check) {
  Vocab src = Vocab::build({split_tokens("a b c d")});
  Vocab tgt = Vocab::build({split_tokens("x y z")});
  Seq2SeqParams params = Seq2SeqParams::init(src, tgt, 3, 4, 12345);
  TrainPair example{split_tokens("a b c"), split_tokens("x y")};

  double err = grad_check(params, example, 1e-5);
  check.require(err < 1e-4, "max relative error " + std::to_string(err));

  // Mutation probe: a corrupted gradient must be flagged.
  ModelTensors grads = zeros_like(params);
  sequence_loss(params, example.first, example.second, &grads);
  Seq2SeqParams probe = params;
  double worst = 0.0;
  for (std::size_t i = 0; i < probe.tensors.output_proj.data.size(); ++i) {
    double saved = probe.tensors.output_proj.data[i];
    probe.tensors.output_proj.data[i] = saved + 1e-5;
    double plus = sequence_loss(probe, example.first, example.second);
    probe.tensors.output_proj.data[i] = saved - 1e-5;
    double minus = sequence_loss(probe, example.first, example.second);
    probe.tensors.output_proj.data[i] = saved;
    double numeric = (plus - minus) / 2e-5;
    double corrupted = 1.5 * grads.output_proj.data[i];
    worst = std::max(worst, std::abs(corrupted - numeric) /
                                std::max(std::abs(corrupted) + std::abs(numeric), 1e-3));
  }
  check.require(worst > 1e-2, "corrupted gradient went undetected (max rel " +
                                  std::to_string(worst) + ")");
}

std::string serialize_params(const Seq2SeqParams& p) {
  std::ostringstream out;
  save_checkpoint(p, out);
  return out.str();
}

void toy_training(Checker& check) {
  std::mt19937_64 rng(5);
  auto corpus = testutil::copy_corpus(rng, 200, 6);  // 10-symbol vocabulary
  std::vector<TokenSeq> all;
  for (const auto& [s, t] : corpus) all.push_back(s);
  Vocab vocab = Vocab::build(all);
  Seq2SeqParams init = Seq2SeqParams::init(vocab, vocab, 16, 32, 6);

  TrainOptions opts;
  opts.learning_rate = 0.25;
  opts.epochs = 50;
  opts.clip_norm = 5.0;
  opts.seed = 7;
  TrainResult first = train(init, corpus, opts);

  for (int e = 1; e < 5; ++e)
    check.require(first.epoch_mean_loss[e] < first.epoch_mean_loss[e - 1],
                  "loss not strictly decreasing at epoch " + std::to_string(e + 1));

  std::size_t correct = 0, total = 0;
  for (const auto& [src, tgt] : corpus) {
    TokenSeq out = greedy_decode(first.params, src, tgt.size() + 2);
    for (std::size_t i = 0; i < tgt.size(); ++i)
      if (i < out.size() && out[i] == tgt[i]) ++correct;
    total += tgt.size();
  }
  double accuracy = static_cast<double>(correct) / static_cast<double>(total);
  check.require(accuracy > 0.9, "greedy token accuracy " + std::to_string(accuracy));

  TrainResult second = train(init, corpus, opts);
  check.require(serialize_params(first.params) == serialize_params(second.params),
                "training is not seed-deterministic");
}

void guidance_direction(Checker& check) {
  auto docs = testutil::synth_corpus(2025, 50);

  // Train the generator on (linearized sentence AMR -> sentence) pairs.
  std::vector<TrainPair> pairs;
  std::vector<TokenSeq> sources, targets;
  for (const Document& doc : docs)
    for (std::size_t i = 0; i < doc.amrs.size(); ++i) {
      TokenSeq lin = linearize(parse_penman(doc.amrs[i]));
      TokenSeq sent = split_tokens(doc.sentences[i]);
      pairs.emplace_back(lin, sent);
      sources.push_back(lin);
      targets.push_back(sent);
    }
  Seq2SeqParams init =
      Seq2SeqParams::init(Vocab::build(sources), Vocab::build(targets), 12, 24, 8);
  TrainOptions opts;
  opts.learning_rate = 0.25;
  opts.epochs = 10;  // underfit: guidance must close the gap
  opts.seed = 9;
  Seq2SeqParams params = train(init, pairs, opts).params;

  Seq2SeqBeamModel beam_model(params);
  InterpolationWeights weights = lambdas_from_theta(2.5);
  FusionConfig fusion;
  fusion.psi = 0.95;
  fusion.beam_width = 5;
  fusion.max_length = 12;

  std::vector<TokenSeq> unguided, oracle, pruned, refs;
  for (const Document& doc : docs) {
    AmrGraph graph = parse_penman(doc.summary_amr);
    TokenSeq lin = linearize(graph);
    TokenSeq gold = split_tokens(doc.summary);
    refs.push_back(gold);

    unguided.push_back(beam_search(beam_model, lin, std::nullopt, fusion).front().first);

    NGramModel oracle_lm = build_counts(oracle_side({gold}), kDefaultNgramOrder);
    oracle.push_back(
        beam_search(beam_model, lin, Guidance{&oracle_lm, weights}, fusion).front().first);

    std::vector<ParsedSentence> parsed;
    for (std::size_t i = 0; i < doc.amrs.size(); ++i)
      parsed.push_back({split_tokens(doc.sentences[i]), parse_penman(doc.amrs[i])});
    SideDocument side = select_side_sentences(parsed, graph, 2);
    NGramModel side_lm = build_counts(side, kDefaultNgramOrder);
    pruned.push_back(
        beam_search(beam_model, lin, Guidance{&side_lm, weights}, fusion).front().first);
  }

  double bleu_unguided = bleu(unguided, refs);
  double bleu_oracle = bleu(oracle, refs);
  double bleu_pruned = bleu(pruned, refs);
  double r2_unguided = corpus_rouge_n(unguided, refs, 2).f1;
  double r2_oracle = corpus_rouge_n(oracle, refs, 2).f1;
  double r2_pruned = corpus_rouge_n(pruned, refs, 2).f1;

  std::printf("       guidance direction: BLEU %.3f/%.3f/%.3f R2 %.3f/%.3f/%.3f"
              " (unguided/pruned/oracle)\n",
              bleu_unguided, bleu_pruned, bleu_oracle, r2_unguided, r2_pruned, r2_oracle);
  check.require(bleu_oracle > bleu_unguided, "oracle BLEU not above unguided");
  check.require(r2_oracle > r2_unguided, "oracle ROUGE-2 not above unguided");
  check.require(bleu_pruned >= bleu_unguided, "pruned BLEU below unguided");
  check.require(r2_pruned >= r2_unguided, "pruned ROUGE-2 below unguided");
}

void subgraph_extraction(Checker& check) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + rng() % 9;
    AmrGraph g = testutil::random_graph(rng, n);
    std::uint64_t seed = rng();
    std::size_t budget = 1 + rng() % n;

    SubgraphObjective obj;
    obj.node_weights = {1.0};
    obj.edge_weights = {1.0};
    obj.node_featurizer = [seed](const AmrGraph&, const AmrNode& node) -> Vector {
      std::uint64_t h = testutil::splitmix64(seed ^ std::hash<std::string>{}(node.id));
      return {static_cast<double>(h % 2001) / 1000.0 - 1.0};
    };
    obj.edge_featurizer = [seed](const AmrGraph&, const AmrEdge& e) -> Vector {
      std::uint64_t h = testutil::splitmix64(
          seed ^ std::hash<std::string>{}(e.source + "|" + e.relation + "|" + e.target));
      return {static_cast<double>(h % 2001) / 1000.0 - 1.0};
    };
    obj.budget = budget;

    // Independent enumeration over all rooted connected subsets.
    std::unordered_map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) idx[g.nodes[i].id] = i;
    std::size_t root = idx.at(g.root);
    double best = 0.0;
    bool have = false;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
      if (!(mask & (1ull << root))) continue;
      if (static_cast<std::size_t>(__builtin_popcountll(mask)) > budget) continue;
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
      if (!have || score > best) {
        have = true;
        best = score;
      }
    }

    AmrGraph exhaustive = extract_summary_graph(obj, g, ExtractMode::Exhaustive);
    AmrGraph greedy = extract_summary_graph(obj, g, ExtractMode::Greedy);
    double ex_score = score_subgraph(obj, exhaustive);
    double gr_score = score_subgraph(obj, greedy);

    check.require(std::abs(ex_score - best) <= 1e-9,
                  "exhaustive " + std::to_string(ex_score) + " vs enumeration " +
                      std::to_string(best));
    check.require(gr_score <= ex_score + 1e-9, "greedy exceeds exhaustive");
    for (const AmrGraph* sub : {&exhaustive, &greedy}) {
      check.require(sub->nodes.size() <= budget, "budget violated");
      check.require(sub->root == g.root && sub->find_node(sub->root) != nullptr,
                    "root missing");
      check.require(sub->unreachable_nodes().empty(), "subgraph disconnected");
    }
  }
}

void metric_examples(Checker& check) {
  std::vector<TokenSeq> hyp = {split_tokens("the cat sat")};
  std::vector<TokenSeq> ref = {split_tokens("the cat sat down")};
  check.require(std::abs(bleu(hyp, ref) - std::exp(1.0 - 4.0 / 3.0)) <= 1e-6,
                "brevity-penalty example");
  check.require(bleu(ref, ref) == 1.0, "bleu identity");
  check.require(bleu({split_tokens("p q r s")}, ref) == 0.0, "bleu disjoint");

  PrfScore r2 = rouge_n(split_tokens("a b c"), split_tokens("a b d"), 2);
  check.require(std::abs(r2.precision - 0.5) <= 1e-6 && std::abs(r2.recall - 0.5) <= 1e-6 &&
                    std::abs(r2.f1 - 0.5) <= 1e-6,
                "rouge-2 hand example");
  PrfScore ident = rouge_n(split_tokens("a b c"), split_tokens("a b c"), 2);
  check.require(ident.f1 == 1.0 && ident.precision == 1.0 && ident.recall == 1.0,
                "rouge identity");

  PrfScore rl = rouge_l(split_tokens("a x b"), split_tokens("a b"));
  check.require(std::abs(rl.precision - 2.0 / 3.0) <= 1e-6 && std::abs(rl.recall - 1.0) <= 1e-6 &&
                    std::abs(rl.f1 - 0.8) <= 1e-6,
                "rouge-l hand example");

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    TokenSeq h = testutil::random_tokens(rng, 8);
    TokenSeq r = testutil::random_tokens(rng, 8);
    PrfScore s = rouge_l(h, r);
    std::size_t l = lcs_length(h, r);
    double p = h.empty() ? 0.0 : static_cast<double>(l) / static_cast<double>(h.size());
    double rr = r.empty() ? 0.0 : static_cast<double>(l) / static_cast<double>(r.size());
    check.require(std::abs(s.precision - p) <= 1e-12 && std::abs(s.recall - rr) <= 1e-12,
                  "rouge-l disagrees with lcs_length");
  }
}

}  // namespace

int main() {
  criterion(1, "fusion identity (b=0 or psi=0 equals log a)", 1.0, fusion_identity);
  criterion(2, "fusion arithmetic at psi=0.95", 1.0, fusion_arithmetic);
  criterion(3, "interpolation weights from theta=2.5", 1.0, lambda_family);
  criterion(4, "n-gram LM normalization on random corpora", 5.0, lm_normalization);
  criterion(5, "LCS agrees with exhaustive enumeration", 10.0, lcs_oracle_agreement);
  criterion(6, "beam search matches exhaustive decoding", 60.0, beam_exhaustive_equivalence);
  criterion(7, "analytic gradients pass the finite-difference check", 30.0, gradient_check);
  criterion(8, "copy-task training reaches 90% accuracy", 300.0, toy_training);
  criterion(9, "guided decoding beats unguided on the synthetic corpus", 600.0,
            guidance_direction);
  criterion(10, "subgraph extraction argmax and greedy bounds", 60.0, subgraph_extraction);
  criterion(11, "metric hand examples and identities", 1.0, metric_examples);

  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
