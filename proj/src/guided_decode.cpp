#include "amrsumm/guided_decode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace amrsumm {

double fused_score(double a, double b, double psi) {
  if (a <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(a) + psi * std::log1p(b / a);
}

namespace {

struct BeamHyp {
  Hypothesis hyp;
  int last_id = -1;  // id of hyp.tokens.back(); -1 before the first step
};

// Score descending, then shorter, then lexicographic.
bool better(const BeamHyp& x, const BeamHyp& y) {
  if (x.hyp.score != y.hyp.score) return x.hyp.score > y.hyp.score;
  if (x.hyp.tokens.size() != y.hyp.tokens.size())
    return x.hyp.tokens.size() < y.hyp.tokens.size();
  return x.hyp.tokens < y.hyp.tokens;
}

}  // namespace

std::vector<std::pair<TokenSeq, double>> beam_search(const BeamModel& base,
                                                     const TokenSeq& source,
                                                     const std::optional<Guidance>& side,
                                                     const FusionConfig& cfg) {
  if (source.empty()) throw std::invalid_argument("beam_search: empty source");
  if (cfg.beam_width < 1) throw std::invalid_argument("beam_search: beam_width must be >= 1");
  if (cfg.max_length < 1) throw std::invalid_argument("beam_search: max_length must be >= 1");
  if (cfg.psi < 0.0 || cfg.psi > 1.0)
    throw std::invalid_argument("beam_search: psi must lie in [0, 1]");
  if (side && !side->model) throw std::invalid_argument("beam_search: null side model");

  const int bos = base.bos_id();
  const int eos = base.eos_id();
  const std::size_t vocab = base.vocab_size();

  std::vector<BeamHyp> active;
  active.push_back({Hypothesis{{}, 0.0, base.start(source), false}, -1});
  std::vector<BeamHyp> finished;

  for (std::size_t step = 1; !active.empty() && finished.size() < cfg.beam_width; ++step) {
    std::vector<BeamHyp> pool;
    for (std::size_t slot = 0; slot < active.size(); ++slot) {
      const BeamHyp& cur = active[slot];
      int prev = cur.last_id < 0 ? bos : cur.last_id;
      auto [probs, next_state] = base.advance(cur.hyp.state, prev);
      if (probs.size() != vocab)
        throw std::runtime_error("beam_search: model distribution size mismatch");

      std::array<std::string, 3> lm_context{};
      if (side) lm_context = side_context(cur.hyp.tokens);

      for (std::size_t w = 0; w < vocab; ++w) {
        if (static_cast<int>(w) == bos) continue;
        double a = probs[w];
        if (a <= 0.0) continue;  // zero base probability: word is skipped

        const std::string& word = base.token_of(static_cast<int>(w));
        bool in_side = side && side->model->contains_surface(word);
        double b = 0.0;
        double step_score;
        if (in_side) {
          b = p_side(*side->model, word, lm_context, side->weights);
          step_score = fused_score(a, b, cfg.psi);
        } else {
          step_score = std::log(a);
        }
        if (cfg.trace) {
          nlohmann::json rec{{"step", step},
                             {"beam", slot},
                             {"token", word},
                             {"base_logprob", std::log(a)},
                             {"side_prob", in_side ? nlohmann::json(b) : nlohmann::json()},
                             {"fused", step_score}};
          (*cfg.trace) << rec.dump() << '\n';
        }

        BeamHyp next;
        next.hyp.tokens = cur.hyp.tokens;
        next.hyp.tokens.push_back(word);
        next.hyp.score = cur.hyp.score + step_score;
        next.hyp.state = next_state;
        next.hyp.finished =
            static_cast<int>(w) == eos || next.hyp.tokens.size() >= cfg.max_length;
        next.last_id = static_cast<int>(w);
        pool.push_back(std::move(next));
      }
    }
    // All candidates compete for the beam slots; finished survivors are then
    // held aside while the rest stay active.
    std::sort(pool.begin(), pool.end(), better);
    if (pool.size() > cfg.beam_width) pool.resize(cfg.beam_width);
    active.clear();
    for (BeamHyp& cand : pool) {
      if (cand.hyp.finished)
        finished.push_back(std::move(cand));
      else
        active.push_back(std::move(cand));
    }
  }

  std::sort(finished.begin(), finished.end(), better);
  std::vector<std::pair<TokenSeq, double>> out;
  out.reserve(finished.size());
  for (BeamHyp& cand : finished) {
    if (cand.last_id == eos) cand.hyp.tokens.pop_back();
    out.emplace_back(std::move(cand.hyp.tokens), cand.hyp.score);
  }
  return out;
}

namespace {

struct S2sBeamState {
  std::shared_ptr<const EncoderOutput> enc;
  DecoderState dec;
};

}  // namespace

BeamModel::StateHandle Seq2SeqBeamModel::start(const TokenSeq& source) const {
  auto enc = std::make_shared<const EncoderOutput>(encode(params_, source));
  auto state = std::make_shared<S2sBeamState>();
  state->dec = initial_decoder_state(params_, *enc);
  state->enc = std::move(enc);
  return state;
}

std::pair<Vector, BeamModel::StateHandle> Seq2SeqBeamModel::advance(const StateHandle& state,
                                                                    int prev_id) const {
  const auto* s = static_cast<const S2sBeamState*>(state.get());
  auto [dist, next_dec] = decode_step(params_, s->dec, *s->enc, prev_id);
  auto next = std::make_shared<S2sBeamState>();
  next->enc = s->enc;
  next->dec = std::move(next_dec);
  return {std::move(dist.probs), std::move(next)};
}

}  // namespace amrsumm
