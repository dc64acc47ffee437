#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "amrsumm/amr.hpp"
#include "amrsumm/tensor.hpp"

namespace amrsumm {

// Token table with fixed special slots. Unknown lookups map to kUnk.
struct Vocab {
  static constexpr int kUnk = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;

  std::vector<std::string> tokens;
  std::unordered_map<std::string, int> ids;

  static Vocab build(const std::vector<TokenSeq>& corpus, std::size_t limit = 0);

  int id_of(const std::string& token) const {
    auto it = ids.find(token);
    return it == ids.end() ? kUnk : it->second;
  }
  const std::string& token_of(int id) const { return tokens.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return tokens.size(); }
};

// Single gated recurrent layer (reset / update / candidate gates).
struct GruCell {
  Matrix w_reset, w_update, w_cand;  // input  -> hidden
  Matrix u_reset, u_update, u_cand;  // hidden -> hidden
  Matrix b_reset, b_update, b_cand;  // 1 x hidden
};

// Every trainable tensor; gradients reuse the same shape.
struct ModelTensors {
  Matrix source_embed, target_embed;  // |V| x embed_dim
  GruCell encoder, decoder;
  Matrix attn_score;    // hidden x hidden, bilinear attention score
  Matrix attn_combine;  // hidden x 2*hidden, attentional-state projection
  Matrix output_proj;   // |V_tgt| x hidden, pre-softmax projection
};

// fn(name, Matrix&) over every tensor, in a fixed order shared by
// initialization, updates, serialization and gradient checking.
template <typename Tensors, typename Fn>
void visit_tensors(Tensors& t, Fn&& fn) {
  fn("source_embed", t.source_embed);
  fn("target_embed", t.target_embed);
  auto cell = [&](const std::string& prefix, auto& c) {
    fn(prefix + ".w_reset", c.w_reset);
    fn(prefix + ".w_update", c.w_update);
    fn(prefix + ".w_cand", c.w_cand);
    fn(prefix + ".u_reset", c.u_reset);
    fn(prefix + ".u_update", c.u_update);
    fn(prefix + ".u_cand", c.u_cand);
    fn(prefix + ".b_reset", c.b_reset);
    fn(prefix + ".b_update", c.b_update);
    fn(prefix + ".b_cand", c.b_cand);
  };
  cell("encoder", t.encoder);
  cell("decoder", t.decoder);
  fn("attn_score", t.attn_score);
  fn("attn_combine", t.attn_combine);
  fn("output_proj", t.output_proj);
}

struct Seq2SeqParams {
  std::size_t embed_dim = 0;
  std::size_t hidden_dim = 0;
  Vocab source_vocab;
  Vocab target_vocab;
  ModelTensors tensors;

  static Seq2SeqParams init(Vocab source_vocab, Vocab target_vocab, std::size_t embed_dim,
                            std::size_t hidden_dim, std::uint64_t seed);
};

// Mirror of the parameter shapes, zero-filled.
ModelTensors zeros_like(const Seq2SeqParams& params);

struct EncoderOutput {
  std::vector<Vector> states;  // one hidden vector per source position
};

struct DecoderState {
  Vector hidden;       // h_t
  Vector attentional;  // tanh(Wc [c_t; h_t]); empty before the first step
  Vector alignment;    // attention weights over source positions; empty before the first step
};

struct Distribution {
  Vector probs;  // over the target vocabulary, sums to 1
};

EncoderOutput encode(const Seq2SeqParams& params, const TokenSeq& input);

// Decoder state positioned just before the first generation step.
DecoderState initial_decoder_state(const Seq2SeqParams& params, const EncoderOutput& enc);

std::pair<Distribution, DecoderState> decode_step(const Seq2SeqParams& params,
                                                  const DecoderState& state,
                                                  const EncoderOutput& enc, int prev_token_id);
std::pair<Distribution, DecoderState> decode_step(const Seq2SeqParams& params,
                                                  const DecoderState& state,
                                                  const EncoderOutput& enc,
                                                  const std::string& prev_token);

using TrainPair = std::pair<TokenSeq, TokenSeq>;  // (source, target)

// Summed cross-entropy of the target sequence (including its end token) under
// teacher forcing; gradients accumulated into `grads` when non-null.
double sequence_loss(const Seq2SeqParams& params, const TokenSeq& source, const TokenSeq& target,
                     ModelTensors* grads = nullptr);

struct TrainOptions {
  double learning_rate = 0.25;
  std::size_t epochs = 30;
  double clip_norm = 5.0;
  std::uint64_t seed = 1;
};

struct TrainResult {
  Seq2SeqParams params;
  std::vector<double> epoch_mean_loss;  // mean per-token cross-entropy per epoch
};

// Plain SGD with teacher forcing and per-example gradient-norm clipping.
// Deterministic given the seed. Non-finite loss aborts with a diagnostic.
TrainResult train(Seq2SeqParams params, const std::vector<TrainPair>& corpus,
                  const TrainOptions& opts,
                  std::ostream* log = nullptr);

// Free-running argmax decode, for evaluation; stops at EOS or max_length.
TokenSeq greedy_decode(const Seq2SeqParams& params, const TokenSeq& source,
                       std::size_t max_length);

// Maximum relative error between analytic and central finite-difference
// gradients over every parameter entry.
double grad_check(const Seq2SeqParams& params, const TrainPair& example, double epsilon = 1e-5);

// Version-tagged text checkpoint; exact round trip (hex floats).
void save_checkpoint(const Seq2SeqParams& params, std::ostream& out);
Seq2SeqParams load_checkpoint(std::istream& in);
void save_checkpoint_file(const Seq2SeqParams& params, const std::string& path);
Seq2SeqParams load_checkpoint_file(const std::string& path);

}  // namespace amrsumm
