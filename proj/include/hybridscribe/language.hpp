#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hybridscribe/acoustic.hpp"
#include "hybridscribe/numeric.hpp"
#include "hybridscribe/pianoroll.hpp"

namespace hybridscribe {

// Incremental decoding state of a language model. Value semantics: advancing
// returns a new state, so beam hypotheses can branch freely. The initial
// hidden vector is zero; the first frame's distribution is computed from it
// directly.
struct LmState {
  Vector hidden;
  std::size_t t = 0;
};

// Generative RNN over binary pitch vectors. The hidden state is driven by
// the previous frame; the output projection gives independent per-pitch
// Bernoulli probabilities for the current frame.
struct GenRnnParams {
  Matrix w_zh;  // hidden x pitches, input weights from z_{t-1}
  Matrix w_hh;  // hidden x hidden, recurrent weights
  Matrix w_hz;  // pitches x hidden, output projection
  Vector b_h;
  Vector b_z;

  std::size_t num_pitches() const { return w_hz.rows; }
  std::size_t hidden_size() const { return w_hh.rows; }
};

// Neural autoregressive density over D-bit vectors: a chain of sigmoid
// conditionals p(v_i | v_<i) over ascending pitch index, evaluated with the
// O(D*H) incremental hidden-accumulator recurrence.
struct NadeParams {
  Matrix w_enc;  // D x hidden; row i is added to the accumulator when v_i = 1
  Matrix w_dec;  // D x hidden; row i scores v_i
  Vector b_vis;  // D
  Vector b_hid;  // hidden

  std::size_t visible_dim() const { return w_dec.rows; }
  std::size_t hidden_dim() const { return w_dec.cols; }
};

// RNN-NADE: a recurrent core consumes the previous frame, and the NADE's
// visible and hidden biases become affine functions of the core state,
//   b_vis(t) = b_vis + u_vis * h_t,   b_hid(t) = b_hid + u_hid * h_t.
struct RnnNadeParams {
  Matrix w_zh;   // H_rnn x D
  Matrix w_hh;   // H_rnn x H_rnn
  Vector b_h;    // H_rnn
  Matrix u_vis;  // D x H_rnn
  Matrix u_hid;  // H_nade x H_rnn
  NadeParams nade;

  std::size_t num_pitches() const { return nade.visible_dim(); }
  std::size_t hidden_size() const { return w_hh.rows; }
};

// Factorized per-pitch prior with add-one smoothing; entries strictly in
// (0,1) so every configuration has finite log-probability.
struct MarginalPrior {
  Vector probs;
  Vector log_p;  // log(probs)
  Vector log_q;  // log(1 - probs)

  double logprob(const std::vector<std::uint8_t>& config) const;
};

MarginalPrior make_prior(const Vector& probs);
MarginalPrior uniform_prior(std::size_t n);
// pi_j = (active frames for pitch j + 1) / (total frames + 2)
MarginalPrior fit_marginal_prior(const std::vector<const PianoRoll*>& rolls);

GenRnnParams make_gen_rnn(RngState& rng, std::size_t pitches, std::size_t hidden,
                          double stddev = 0.01);
NadeParams make_nade(RngState& rng, std::size_t visible, std::size_t hidden,
                     double stddev = 0.01);
RnnNadeParams make_rnn_nade(RngState& rng, std::size_t pitches, std::size_t rnn_hidden,
                            std::size_t nade_hidden, double stddev = 0.01);

// Exact log-density of v under the NADE with the given (already conditioned)
// biases.
double nade_logprob(const NadeParams& nade, const Vector& b_vis, const Vector& b_hid,
                    const std::vector<std::uint8_t>& v);
// Ancestral sampling in ascending pitch order; v_i = 1 iff uniform() < p_i.
std::vector<std::uint8_t> nade_sample(const NadeParams& nade, const Vector& b_vis,
                                      const Vector& b_hid, RngState& rng);

LmState lm_init_state(const GenRnnParams& params);
LmState lm_init_state(const RnnNadeParams& params);
double lm_step_logprob(const GenRnnParams& params, const LmState& state,
                       const std::vector<std::uint8_t>& z);
double lm_step_logprob(const RnnNadeParams& params, const LmState& state,
                       const std::vector<std::uint8_t>& z);
LmState lm_advance(const GenRnnParams& params, const LmState& state,
                   const std::vector<std::uint8_t>& z);
LmState lm_advance(const RnnNadeParams& params, const LmState& state,
                   const std::vector<std::uint8_t>& z);

// Scores many configurations at one fixed state; created once per
// (hypothesis, frame) by the decoder.
class LmStepScorer {
 public:
  virtual ~LmStepScorer() = default;
  virtual double logprob(const std::vector<std::uint8_t>& z) const = 0;
};

// Decoder-facing interface shared by the two language-model families.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual std::size_t num_pitches() const = 0;
  virtual LmState init_state() const = 0;
  virtual double step_logprob(const LmState& state, const std::vector<std::uint8_t>& z) const = 0;
  virtual LmState advance(const LmState& state, const std::vector<std::uint8_t>& z) const = 0;
  virtual std::unique_ptr<LmStepScorer> step_scorer(const LmState& state) const = 0;
};

class GenRnnLm final : public LanguageModel {
 public:
  explicit GenRnnLm(GenRnnParams params) : params_(std::move(params)) {}
  const GenRnnParams& params() const { return params_; }
  std::size_t num_pitches() const override { return params_.num_pitches(); }
  LmState init_state() const override { return lm_init_state(params_); }
  double step_logprob(const LmState& s, const std::vector<std::uint8_t>& z) const override {
    return lm_step_logprob(params_, s, z);
  }
  LmState advance(const LmState& s, const std::vector<std::uint8_t>& z) const override {
    return lm_advance(params_, s, z);
  }
  std::unique_ptr<LmStepScorer> step_scorer(const LmState& state) const override;

 private:
  GenRnnParams params_;
};

class RnnNadeLm final : public LanguageModel {
 public:
  explicit RnnNadeLm(RnnNadeParams params) : params_(std::move(params)) {}
  const RnnNadeParams& params() const { return params_; }
  std::size_t num_pitches() const override { return params_.num_pitches(); }
  LmState init_state() const override { return lm_init_state(params_); }
  double step_logprob(const LmState& s, const std::vector<std::uint8_t>& z) const override {
    return lm_step_logprob(params_, s, z);
  }
  LmState advance(const LmState& s, const std::vector<std::uint8_t>& z) const override {
    return lm_advance(params_, s, z);
  }
  std::unique_ptr<LmStepScorer> step_scorer(const LmState& state) const override;

 private:
  RnnNadeParams params_;
};

// Sequence objectives (negative log-likelihood summed over frames) and their
// exact gradients; targets are T x D binary matrices.
double gen_rnn_loss(const GenRnnParams& params, const Matrix& targets);
GenRnnParams gen_rnn_gradient(const GenRnnParams& params, const Matrix& targets);
double rnn_nade_loss(const RnnNadeParams& params, const Matrix& targets);
RnnNadeParams rnn_nade_gradient(const RnnNadeParams& params, const Matrix& targets);

TensorRefs gen_rnn_tensors(GenRnnParams& p);
ConstTensorRefs gen_rnn_tensors(const GenRnnParams& p);
TensorRefs rnn_nade_tensors(RnnNadeParams& p);
ConstTensorRefs rnn_nade_tensors(const RnnNadeParams& p);

// SGD + momentum by full BPTT on bptt_len subsequences, mirroring the
// acoustic trainer (early stopping on validation loss, divergence check).
std::vector<EpochLoss> train_gen_rnn(GenRnnParams& params,
                                     const std::vector<const Matrix*>& train_rolls,
                                     const std::vector<const Matrix*>& valid_rolls,
                                     const TrainConfig& config);
std::vector<EpochLoss> train_rnn_nade(RnnNadeParams& params,
                                      const std::vector<const Matrix*>& train_rolls,
                                      const std::vector<const Matrix*>& valid_rolls,
                                      const TrainConfig& config);

}  // namespace hybridscribe
