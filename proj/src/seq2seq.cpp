#include "amrsumm/seq2seq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace amrsumm {

Vocab Vocab::build(const std::vector<TokenSeq>& corpus, std::size_t limit) {
  Vocab v;
  v.tokens = {"<unk>", "<s>", "</s>"};
  for (int i = 0; i < 3; ++i) v.ids[v.tokens[i]] = i;

  std::map<std::string, std::size_t> freq;
  for (const TokenSeq& seq : corpus)
    for (const std::string& tok : seq) ++freq[tok];

  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  for (const auto& [tok, count] : ranked) {
    if (v.ids.count(tok)) continue;
    if (limit && v.tokens.size() >= limit) break;
    v.ids[tok] = static_cast<int>(v.tokens.size());
    v.tokens.push_back(tok);
  }
  return v;
}

namespace {

// Stable across standard-library implementations, unlike the distribution
// classes.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void fill_uniform(Matrix& m, std::mt19937_64& rng, double scale) {
  for (double& v : m.data) v = (2.0 * next_uniform(rng) - 1.0) * scale;
}

}  // namespace

Seq2SeqParams Seq2SeqParams::init(Vocab source_vocab, Vocab target_vocab, std::size_t embed_dim,
                                  std::size_t hidden_dim, std::uint64_t seed) {
  if (embed_dim == 0 || hidden_dim == 0)
    throw std::invalid_argument("Seq2SeqParams::init: dimensions must be positive");
  Seq2SeqParams p;
  p.embed_dim = embed_dim;
  p.hidden_dim = hidden_dim;
  p.source_vocab = std::move(source_vocab);
  p.target_vocab = std::move(target_vocab);

  auto make_cell = [&](GruCell& c) {
    c.w_reset = Matrix(hidden_dim, embed_dim);
    c.w_update = Matrix(hidden_dim, embed_dim);
    c.w_cand = Matrix(hidden_dim, embed_dim);
    c.u_reset = Matrix(hidden_dim, hidden_dim);
    c.u_update = Matrix(hidden_dim, hidden_dim);
    c.u_cand = Matrix(hidden_dim, hidden_dim);
    c.b_reset = Matrix(1, hidden_dim);
    c.b_update = Matrix(1, hidden_dim);
    c.b_cand = Matrix(1, hidden_dim);
  };
  p.tensors.source_embed = Matrix(p.source_vocab.size(), embed_dim);
  p.tensors.target_embed = Matrix(p.target_vocab.size(), embed_dim);
  make_cell(p.tensors.encoder);
  make_cell(p.tensors.decoder);
  p.tensors.attn_score = Matrix(hidden_dim, hidden_dim);
  p.tensors.attn_combine = Matrix(hidden_dim, 2 * hidden_dim);
  p.tensors.output_proj = Matrix(p.target_vocab.size(), hidden_dim);

  std::mt19937_64 rng(seed);
  visit_tensors(p.tensors, [&](const std::string& name, Matrix& m) {
    if (name.find(".b_") == std::string::npos) fill_uniform(m, rng, 0.08);
  });
  return p;
}

ModelTensors zeros_like(const Seq2SeqParams& params) {
  ModelTensors g = params.tensors;
  visit_tensors(g, [](const std::string&, Matrix& m) {
    std::fill(m.data.begin(), m.data.end(), 0.0);
  });
  return g;
}

namespace {

struct GruStepCache {
  Vector x, r, z, g, rh, h;
};

Vector embedding_row(const Matrix& table, int id) {
  Vector x(table.cols);
  for (std::size_t j = 0; j < table.cols; ++j) x[j] = table(static_cast<std::size_t>(id), j);
  return x;
}

GruStepCache gru_forward(const GruCell& cell, const Vector& x, const Vector& h_prev) {
  std::size_t h_dim = cell.u_reset.rows;
  GruStepCache c;
  c.x = x;
  Vector pre_r = matvec(cell.w_reset, x);
  Vector pre_z = matvec(cell.w_update, x);
  axpy(pre_r, 1.0, matvec(cell.u_reset, h_prev));
  axpy(pre_z, 1.0, matvec(cell.u_update, h_prev));
  c.r.resize(h_dim);
  c.z.resize(h_dim);
  for (std::size_t i = 0; i < h_dim; ++i) {
    c.r[i] = sigmoid(pre_r[i] + cell.b_reset(0, i));
    c.z[i] = sigmoid(pre_z[i] + cell.b_update(0, i));
  }
  c.rh.resize(h_dim);
  for (std::size_t i = 0; i < h_dim; ++i) c.rh[i] = c.r[i] * h_prev[i];
  Vector pre_g = matvec(cell.w_cand, x);
  axpy(pre_g, 1.0, matvec(cell.u_cand, c.rh));
  c.g.resize(h_dim);
  c.h.resize(h_dim);
  for (std::size_t i = 0; i < h_dim; ++i) {
    c.g[i] = std::tanh(pre_g[i] + cell.b_cand(0, i));
    c.h[i] = (1.0 - c.z[i]) * c.g[i] + c.z[i] * h_prev[i];
  }
  return c;
}

// Accumulates parameter gradients for one step and returns (dh_prev, dx).
std::pair<Vector, Vector> gru_backward(const GruCell& cell, GruCell& grad,
                                       const GruStepCache& c, const Vector& h_prev,
                                       const Vector& dh) {
  std::size_t h_dim = dh.size();
  Vector dz(h_dim), dg(h_dim), dh_prev(h_dim);
  for (std::size_t i = 0; i < h_dim; ++i) {
    dz[i] = dh[i] * (h_prev[i] - c.g[i]);
    dg[i] = dh[i] * (1.0 - c.z[i]);
    dh_prev[i] = dh[i] * c.z[i];
  }
  Vector dpre_g(h_dim);
  for (std::size_t i = 0; i < h_dim; ++i) dpre_g[i] = dg[i] * (1.0 - c.g[i] * c.g[i]);
  add_outer(grad.w_cand, dpre_g, c.x);
  add_outer(grad.u_cand, dpre_g, c.rh);
  for (std::size_t i = 0; i < h_dim; ++i) grad.b_cand(0, i) += dpre_g[i];

  Vector drh = matvec_transposed(cell.u_cand, dpre_g);
  Vector dr(h_dim);
  for (std::size_t i = 0; i < h_dim; ++i) {
    dr[i] = drh[i] * h_prev[i];
    dh_prev[i] += drh[i] * c.r[i];
  }
  Vector dpre_r(h_dim), dpre_z(h_dim);
  for (std::size_t i = 0; i < h_dim; ++i) {
    dpre_r[i] = dr[i] * c.r[i] * (1.0 - c.r[i]);
    dpre_z[i] = dz[i] * c.z[i] * (1.0 - c.z[i]);
  }
  add_outer(grad.w_reset, dpre_r, c.x);
  add_outer(grad.u_reset, dpre_r, h_prev);
  add_outer(grad.w_update, dpre_z, c.x);
  add_outer(grad.u_update, dpre_z, h_prev);
  for (std::size_t i = 0; i < h_dim; ++i) {
    grad.b_reset(0, i) += dpre_r[i];
    grad.b_update(0, i) += dpre_z[i];
  }
  axpy(dh_prev, 1.0, matvec_transposed(cell.u_reset, dpre_r));
  axpy(dh_prev, 1.0, matvec_transposed(cell.u_update, dpre_z));

  Vector dx = matvec_transposed(cell.w_reset, dpre_r);
  axpy(dx, 1.0, matvec_transposed(cell.w_update, dpre_z));
  axpy(dx, 1.0, matvec_transposed(cell.w_cand, dpre_g));
  return {std::move(dh_prev), std::move(dx)};
}

struct AttentionCache {
  Vector h;       // decoder hidden after the GRU step
  Vector alpha;   // alignment over source positions
  Vector context;
  Vector concat;  // [context; h]
  Vector htilde;
  Vector probs;
};

AttentionCache attention_forward(const Seq2SeqParams& p, const Vector& h,
                                 const std::vector<Vector>& enc_states) {
  AttentionCache c;
  c.h = h;
  Vector wa_h = matvec_transposed(p.tensors.attn_score, h);
  Vector scores(enc_states.size());
  for (std::size_t s = 0; s < enc_states.size(); ++s) scores[s] = dot(wa_h, enc_states[s]);
  c.alpha = softmax(scores);
  c.context.assign(p.hidden_dim, 0.0);
  for (std::size_t s = 0; s < enc_states.size(); ++s)
    axpy(c.context, c.alpha[s], enc_states[s]);
  c.concat = c.context;
  c.concat.insert(c.concat.end(), h.begin(), h.end());
  Vector pre = matvec(p.tensors.attn_combine, c.concat);
  c.htilde.resize(p.hidden_dim);
  for (std::size_t i = 0; i < p.hidden_dim; ++i) c.htilde[i] = std::tanh(pre[i]);
  c.probs = softmax(matvec(p.tensors.output_proj, c.htilde));
  return c;
}

std::vector<int> map_ids(const Vocab& vocab, const TokenSeq& tokens) {
  std::vector<int> ids(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) ids[i] = vocab.id_of(tokens[i]);
  return ids;
}

}  // namespace

EncoderOutput encode(const Seq2SeqParams& params, const TokenSeq& input) {
  if (input.empty()) throw std::invalid_argument("encode: empty input");
  std::vector<int> ids = map_ids(params.source_vocab, input);
  EncoderOutput out;
  Vector h(params.hidden_dim, 0.0);
  for (int id : ids) {
    GruStepCache c =
        gru_forward(params.tensors.encoder, embedding_row(params.tensors.source_embed, id), h);
    h = c.h;
    out.states.push_back(h);
  }
  return out;
}

DecoderState initial_decoder_state(const Seq2SeqParams& params, const EncoderOutput& enc) {
  if (enc.states.empty())
    throw std::invalid_argument("initial_decoder_state: empty encoder output");
  if (enc.states.back().size() != params.hidden_dim)
    throw std::invalid_argument("initial_decoder_state: encoder state dimension mismatch");
  DecoderState s;
  s.hidden = enc.states.back();
  return s;
}

std::pair<Distribution, DecoderState> decode_step(const Seq2SeqParams& params,
                                                  const DecoderState& state,
                                                  const EncoderOutput& enc, int prev_token_id) {
  if (enc.states.empty()) throw std::invalid_argument("decode_step: empty encoder output");
  if (state.hidden.size() != params.hidden_dim)
    throw std::invalid_argument("decode_step: decoder state dimension mismatch");
  for (const Vector& s : enc.states)
    if (s.size() != params.hidden_dim)
      throw std::invalid_argument("decode_step: encoder state dimension mismatch");
  if (prev_token_id < 0 || static_cast<std::size_t>(prev_token_id) >= params.target_vocab.size())
    throw std::invalid_argument("decode_step: previous token id out of range");

  GruStepCache g = gru_forward(params.tensors.decoder,
                               embedding_row(params.tensors.target_embed, prev_token_id),
                               state.hidden);
  AttentionCache a = attention_forward(params, g.h, enc.states);

  Distribution dist{a.probs};
  DecoderState next;
  next.hidden = g.h;
  next.attentional = a.htilde;
  next.alignment = a.alpha;
  return {std::move(dist), std::move(next)};
}

std::pair<Distribution, DecoderState> decode_step(const Seq2SeqParams& params,
                                                  const DecoderState& state,
                                                  const EncoderOutput& enc,
                                                  const std::string& prev_token) {
  return decode_step(params, state, enc, params.target_vocab.id_of(prev_token));
}

double sequence_loss(const Seq2SeqParams& params, const TokenSeq& source, const TokenSeq& target,
                     ModelTensors* grads) {
  if (source.empty()) throw std::invalid_argument("sequence_loss: empty source");
  std::vector<int> src_ids = map_ids(params.source_vocab, source);
  std::vector<int> tgt_ids = map_ids(params.target_vocab, target);
  tgt_ids.push_back(Vocab::kEos);

  // Encoder forward.
  std::vector<GruStepCache> enc_cache;
  std::vector<Vector> enc_states;
  Vector h(params.hidden_dim, 0.0);
  for (int id : src_ids) {
    enc_cache.push_back(gru_forward(params.tensors.encoder,
                                    embedding_row(params.tensors.source_embed, id), h));
    h = enc_cache.back().h;
    enc_states.push_back(h);
  }

  // Decoder forward with teacher forcing: inputs are BOS, y_1, ..., y_{m-1};
  // predictions are y_1, ..., y_m, EOS.
  std::vector<int> prev_ids;
  prev_ids.push_back(Vocab::kBos);
  for (std::size_t t = 0; t + 1 < tgt_ids.size(); ++t) prev_ids.push_back(tgt_ids[t]);

  std::vector<GruStepCache> dec_cache;
  std::vector<AttentionCache> att_cache;
  std::vector<Vector> dec_hidden_prev;  // h_{t-1} per step
  Vector dh_state = enc_states.back();
  double loss = 0.0;
  for (std::size_t t = 0; t < prev_ids.size(); ++t) {
    dec_hidden_prev.push_back(dh_state);
    GruStepCache g = gru_forward(params.tensors.decoder,
                                 embedding_row(params.tensors.target_embed, prev_ids[t]),
                                 dh_state);
    dh_state = g.h;
    dec_cache.push_back(std::move(g));
    att_cache.push_back(attention_forward(params, dh_state, enc_states));
    double p = att_cache.back().probs[static_cast<std::size_t>(tgt_ids[t])];
    loss -= std::log(std::max(p, 1e-300));
  }

  if (!grads) return loss;

  // Decoder backward.
  std::vector<Vector> denc(enc_states.size(), Vector(params.hidden_dim, 0.0));
  Vector dh_next(params.hidden_dim, 0.0);
  for (std::size_t t = prev_ids.size(); t-- > 0;) {
    const AttentionCache& a = att_cache[t];
    Vector dlogits = a.probs;
    dlogits[static_cast<std::size_t>(tgt_ids[t])] -= 1.0;

    add_outer(grads->output_proj, dlogits, a.htilde);
    Vector dhtilde = matvec_transposed(params.tensors.output_proj, dlogits);
    Vector dpre(params.hidden_dim);
    for (std::size_t i = 0; i < params.hidden_dim; ++i)
      dpre[i] = dhtilde[i] * (1.0 - a.htilde[i] * a.htilde[i]);
    add_outer(grads->attn_combine, dpre, a.concat);
    Vector dconcat = matvec_transposed(params.tensors.attn_combine, dpre);
    Vector dcontext(dconcat.begin(), dconcat.begin() + static_cast<long>(params.hidden_dim));
    Vector dh(dconcat.begin() + static_cast<long>(params.hidden_dim), dconcat.end());
    axpy(dh, 1.0, dh_next);

    std::size_t n = enc_states.size();
    Vector dalpha(n);
    for (std::size_t s = 0; s < n; ++s) {
      dalpha[s] = dot(dcontext, enc_states[s]);
      axpy(denc[s], a.alpha[s], dcontext);
    }
    double mix = 0.0;
    for (std::size_t s = 0; s < n; ++s) mix += a.alpha[s] * dalpha[s];
    Vector wa_h = matvec_transposed(params.tensors.attn_score, a.h);
    for (std::size_t s = 0; s < n; ++s) {
      double dscore = a.alpha[s] * (dalpha[s] - mix);
      if (dscore == 0.0) continue;
      // score_s = h^T Wa enc_s
      for (std::size_t i = 0; i < params.hidden_dim; ++i)
        for (std::size_t j = 0; j < params.hidden_dim; ++j)
          grads->attn_score(i, j) += dscore * a.h[i] * enc_states[s][j];
      axpy(dh, dscore, matvec(params.tensors.attn_score, enc_states[s]));
      axpy(denc[s], dscore, wa_h);
    }

    auto [dh_prev, dx] = gru_backward(params.tensors.decoder, grads->decoder, dec_cache[t],
                                      dec_hidden_prev[t], dh);
    for (std::size_t j = 0; j < params.embed_dim; ++j)
      grads->target_embed(static_cast<std::size_t>(prev_ids[t]), j) += dx[j];
    dh_next = std::move(dh_prev);
  }

  // The decoder consumed the last encoder state as its initial hidden state.
  axpy(denc.back(), 1.0, dh_next);

  // Encoder backward.
  Vector carry(params.hidden_dim, 0.0);
  for (std::size_t t = enc_states.size(); t-- > 0;) {
    Vector dh = denc[t];
    axpy(dh, 1.0, carry);
    Vector h_prev =
        t == 0 ? Vector(params.hidden_dim, 0.0) : enc_states[t - 1];
    auto [dh_prev, dx] =
        gru_backward(params.tensors.encoder, grads->encoder, enc_cache[t], h_prev, dh);
    for (std::size_t j = 0; j < params.embed_dim; ++j)
      grads->source_embed(static_cast<std::size_t>(src_ids[t]), j) += dx[j];
    carry = std::move(dh_prev);
  }
  return loss;
}

namespace {

double grad_norm(const ModelTensors& grads) {
  double sq = 0.0;
  visit_tensors(const_cast<ModelTensors&>(grads), [&](const std::string&, Matrix& m) {
    for (double v : m.data) sq += v * v;
  });
  return std::sqrt(sq);
}

void apply_update(Seq2SeqParams& params, const ModelTensors& grads, double step) {
  auto* g = const_cast<ModelTensors*>(&grads);
  std::vector<Matrix*> gm;
  visit_tensors(*g, [&](const std::string&, Matrix& m) { gm.push_back(&m); });
  std::size_t k = 0;
  visit_tensors(params.tensors, [&](const std::string&, Matrix& m) {
    const Matrix& gg = *gm[k++];
    for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] -= step * gg.data[i];
  });
}

}  // namespace

TrainResult train(Seq2SeqParams params, const std::vector<TrainPair>& corpus,
                  const TrainOptions& opts, std::ostream* log) {
  if (corpus.empty()) throw std::invalid_argument("train: empty corpus");

  TrainResult result;
  std::mt19937_64 rng(opts.seed);
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    // Fisher-Yates with our own RNG draw, stable across platforms.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(order[i - 1], order[j]);
    }
    double loss_sum = 0.0;
    std::size_t token_count = 0;
    for (std::size_t idx : order) {
      const auto& [src, tgt] = corpus[idx];
      ModelTensors grads = zeros_like(params);
      double loss = sequence_loss(params, src, tgt, &grads);
      if (!std::isfinite(loss))
        throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch + 1) +
                                 ", example " + std::to_string(idx));
      loss_sum += loss;
      token_count += tgt.size() + 1;
      double norm = grad_norm(grads);
      double scale = (opts.clip_norm > 0.0 && norm > opts.clip_norm) ? opts.clip_norm / norm : 1.0;
      apply_update(params, grads, opts.learning_rate * scale);
    }
    double mean = loss_sum / static_cast<double>(token_count);
    result.epoch_mean_loss.push_back(mean);
    if (log)
      (*log) << "epoch " << (epoch + 1) << " mean_loss " << mean << "\n";
  }
  result.params = std::move(params);
  return result;
}

TokenSeq greedy_decode(const Seq2SeqParams& params, const TokenSeq& source,
                       std::size_t max_length) {
  EncoderOutput enc = encode(params, source);
  DecoderState state = initial_decoder_state(params, enc);
  TokenSeq out;
  int prev = Vocab::kBos;
  for (std::size_t t = 0; t < max_length; ++t) {
    auto [dist, next] = decode_step(params, state, enc, prev);
    int best = -1;
    double best_p = -1.0;
    for (std::size_t w = 0; w < dist.probs.size(); ++w) {
      if (static_cast<int>(w) == Vocab::kBos) continue;
      if (dist.probs[w] > best_p) {
        best_p = dist.probs[w];
        best = static_cast<int>(w);
      }
    }
    if (best == Vocab::kEos) break;
    out.push_back(params.target_vocab.token_of(best));
    state = std::move(next);
    prev = best;
  }
  return out;
}

double grad_check(const Seq2SeqParams& params, const TrainPair& example, double epsilon) {
  if (!(epsilon >= 1e-6 && epsilon <= 1e-3))
    throw std::invalid_argument("grad_check: epsilon out of [1e-6, 1e-3]");

  ModelTensors analytic = zeros_like(params);
  sequence_loss(params, example.first, example.second, &analytic);

  Seq2SeqParams probe = params;
  std::vector<Matrix*> param_mats, grad_mats;
  visit_tensors(probe.tensors, [&](const std::string&, Matrix& m) { param_mats.push_back(&m); });
  visit_tensors(analytic, [&](const std::string&, Matrix& m) { grad_mats.push_back(&m); });

  double max_rel = 0.0;
  for (std::size_t k = 0; k < param_mats.size(); ++k) {
    Matrix& pm = *param_mats[k];
    const Matrix& gm = *grad_mats[k];
    for (std::size_t i = 0; i < pm.data.size(); ++i) {
      double saved = pm.data[i];
      pm.data[i] = saved + epsilon;
      double plus = sequence_loss(probe, example.first, example.second);
      pm.data[i] = saved - epsilon;
      double minus = sequence_loss(probe, example.first, example.second);
      pm.data[i] = saved;
      double numeric = (plus - minus) / (2.0 * epsilon);
      double denom = std::max(std::abs(gm.data[i]) + std::abs(numeric), 1e-3);
      max_rel = std::max(max_rel, std::abs(gm.data[i] - numeric) / denom);
    }
  }
  return max_rel;
}

namespace {

constexpr const char* kCheckpointTag = "amrsumm-s2s v1";

void write_vocab(std::ostream& out, const char* name, const Vocab& v) {
  out << name << ' ' << v.size() << '\n';
  for (const auto& tok : v.tokens) out << tok << '\n';
}

Vocab read_vocab(std::istream& in, const std::string& expected_name) {
  std::string name;
  std::size_t n = 0;
  in >> name >> n;
  if (name != expected_name) throw std::runtime_error("checkpoint: expected " + expected_name);
  Vocab v;
  for (std::size_t i = 0; i < n; ++i) {
    std::string tok;
    in >> tok;
    v.ids[tok] = static_cast<int>(v.tokens.size());
    v.tokens.push_back(tok);
  }
  return v;
}

}  // namespace

void save_checkpoint(const Seq2SeqParams& params, std::ostream& out) {
  out << kCheckpointTag << '\n';
  out << "embed_dim " << params.embed_dim << '\n';
  out << "hidden_dim " << params.hidden_dim << '\n';
  write_vocab(out, "source_vocab", params.source_vocab);
  write_vocab(out, "target_vocab", params.target_vocab);
  out << std::hexfloat;
  visit_tensors(const_cast<ModelTensors&>(params.tensors),
                [&](const std::string& name, Matrix& m) {
                  out << "tensor " << name << ' ' << m.rows << ' ' << m.cols << '\n';
                  for (std::size_t i = 0; i < m.rows; ++i) {
                    for (std::size_t j = 0; j < m.cols; ++j) {
                      if (j) out << ' ';
                      out << m(i, j);
                    }
                    out << '\n';
                  }
                });
  out << "end\n";
}

Seq2SeqParams load_checkpoint(std::istream& in) {
  std::string line;
  std::getline(in, line);
  if (line != kCheckpointTag) throw std::runtime_error("checkpoint: unrecognized header");

  std::string key;
  Seq2SeqParams p;
  in >> key >> p.embed_dim;
  if (key != "embed_dim") throw std::runtime_error("checkpoint: expected embed_dim");
  in >> key >> p.hidden_dim;
  if (key != "hidden_dim") throw std::runtime_error("checkpoint: expected hidden_dim");
  p.source_vocab = read_vocab(in, "source_vocab");
  p.target_vocab = read_vocab(in, "target_vocab");

  // Allocate shapes, then overwrite from the stream.
  Seq2SeqParams shaped =
      Seq2SeqParams::init(p.source_vocab, p.target_vocab, p.embed_dim, p.hidden_dim, 0);
  p.tensors = shaped.tensors;

  visit_tensors(p.tensors, [&](const std::string& name, Matrix& m) {
    std::string tag, got;
    std::size_t rows = 0, cols = 0;
    in >> tag >> got >> rows >> cols;
    if (tag != "tensor" || got != name)
      throw std::runtime_error("checkpoint: expected tensor " + name);
    if (rows != m.rows || cols != m.cols)
      throw std::runtime_error("checkpoint: shape mismatch for " + name);
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < m.cols; ++j) {
        // operator>> does not accept hex floats; strtod does.
        std::string word;
        in >> word;
        m(i, j) = std::strtod(word.c_str(), nullptr);
      }
  });
  std::string tail;
  in >> tail;
  if (tail != "end") throw std::runtime_error("checkpoint: missing end marker");
  return p;
}

void save_checkpoint_file(const Seq2SeqParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  save_checkpoint(params, out);
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Seq2SeqParams load_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  return load_checkpoint(in);
}

}  // namespace amrsumm
