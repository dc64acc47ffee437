#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amrsumm/amr.hpp"
#include "amrsumm/ngram_lm.hpp"
#include "amrsumm/seq2seq.hpp"
#include "amrsumm/tensor.hpp"

namespace amrsumm {

struct FusionConfig {
  double psi = 0.95;
  std::size_t beam_width = 5;
  std::size_t max_length = 100;
  std::ostream* trace = nullptr;  // per-step JSON-lines trace when set
};

// s = log a + psi * log(b/a + 1). Exactly log a when b = 0 or psi = 0;
// -inf when a = 0 (callers skip such words).
double fused_score(double a, double b, double psi);

// Decoding interface beam search runs against; states are immutable handles
// so hypotheses can share and fork them freely.
class BeamModel {
 public:
  using StateHandle = std::shared_ptr<const void>;

  virtual ~BeamModel() = default;
  virtual std::size_t vocab_size() const = 0;
  virtual const std::string& token_of(int id) const = 0;
  virtual int bos_id() const = 0;
  virtual int eos_id() const = 0;
  virtual StateHandle start(const TokenSeq& source) const = 0;
  // Distribution over the next token given the state and previous token.
  virtual std::pair<Vector, StateHandle> advance(const StateHandle& state,
                                                 int prev_id) const = 0;
};

// Side-information language model plugged into decoding.
struct Guidance {
  const NGramModel* model = nullptr;
  InterpolationWeights weights{};
};

struct Hypothesis {
  TokenSeq tokens;  // includes the end token when finished by it
  double score = 0.0;
  BeamModel::StateHandle state;
  bool finished = false;
};

// Beam search where every candidate word occurring in the side-information
// vocabulary is scored with fused_score(P_s2s, P_side, psi) instead of plain
// log P_s2s. Returns finished hypotheses (end token stripped) sorted by score
// descending, ties by shorter length then lexicographic order.
std::vector<std::pair<TokenSeq, double>> beam_search(const BeamModel& base,
                                                     const TokenSeq& source,
                                                     const std::optional<Guidance>& side,
                                                     const FusionConfig& cfg);

// Adapts the attention encoder-decoder to the beam interface.
class Seq2SeqBeamModel : public BeamModel {
 public:
  explicit Seq2SeqBeamModel(const Seq2SeqParams& params) : params_(params) {}

  std::size_t vocab_size() const override { return params_.target_vocab.size(); }
  const std::string& token_of(int id) const override {
    return params_.target_vocab.token_of(id);
  }
  int bos_id() const override { return Vocab::kBos; }
  int eos_id() const override { return Vocab::kEos; }
  StateHandle start(const TokenSeq& source) const override;
  std::pair<Vector, StateHandle> advance(const StateHandle& state, int prev_id) const override;

 private:
  const Seq2SeqParams& params_;
};

}  // namespace amrsumm
