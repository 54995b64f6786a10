#include "hybridscribe/language.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "hybridscribe/errors.hpp"
#include "train_loop.hpp"

namespace hybridscribe {

namespace {

Vector row_of(const Matrix& m, std::size_t r) {
  return Vector(m.data.begin() + static_cast<long>(r * m.cols),
                m.data.begin() + static_cast<long>((r + 1) * m.cols));
}

std::vector<std::uint8_t> bits_of_row(const Matrix& m, std::size_t r) {
  std::vector<std::uint8_t> out(m.cols);
  for (std::size_t j = 0; j < m.cols; ++j) out[j] = m.at(r, j) >= 0.5 ? 1 : 0;
  return out;
}

void check_bits(std::size_t got, std::size_t want, const char* who) {
  if (got != want) {
    throw dim_error(std::string(who) + ": configuration length " + std::to_string(got) +
                    " != pitch count " + std::to_string(want));
  }
}

}  // namespace

double MarginalPrior::logprob(const std::vector<std::uint8_t>& config) const {
  check_bits(config.size(), probs.size(), "MarginalPrior::logprob");
  double lp = 0.0;
  for (std::size_t j = 0; j < config.size(); ++j) lp += config[j] ? log_p[j] : log_q[j];
  return lp;
}

MarginalPrior make_prior(const Vector& probs) {
  MarginalPrior prior;
  prior.probs = probs;
  prior.log_p.resize(probs.size());
  prior.log_q.resize(probs.size());
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (!(probs[j] > 0.0 && probs[j] < 1.0)) {
      throw numeric_error("make_prior: probability " + std::to_string(probs[j]) +
                          " at pitch " + std::to_string(j) + " not strictly inside (0,1)");
    }
    prior.log_p[j] = std::log(probs[j]);
    prior.log_q[j] = std::log(1.0 - probs[j]);
  }
  return prior;
}

MarginalPrior uniform_prior(std::size_t n) { return make_prior(Vector(n, 0.5)); }

MarginalPrior fit_marginal_prior(const std::vector<const PianoRoll*>& rolls) {
  std::size_t total_frames = 0;
  std::size_t n = 0;
  for (const auto* r : rolls) {
    if (r->frames == 0) continue;
    if (n == 0) n = r->pitches;
    if (r->pitches != n) throw dim_error("fit_marginal_prior: pitch counts differ across rolls");
    total_frames += r->frames;
  }
  if (total_frames == 0) throw data_error("fit_marginal_prior: no frames");
  Vector counts(n, 0.0);
  for (const auto* r : rolls) {
    for (std::size_t t = 0; t < r->frames; ++t) {
      for (std::size_t j = 0; j < n; ++j) counts[j] += r->at(t, j);
    }
  }
  Vector probs(n);
  for (std::size_t j = 0; j < n; ++j) {
    probs[j] = (counts[j] + 1.0) / (static_cast<double>(total_frames) + 2.0);
  }
  return make_prior(probs);
}

GenRnnParams make_gen_rnn(RngState& rng, std::size_t pitches, std::size_t hidden,
                          double stddev) {
  GenRnnParams p;
  p.w_zh = gaussian_matrix(rng, hidden, pitches, stddev);
  p.w_hh = gaussian_matrix(rng, hidden, hidden, stddev);
  p.w_hz = gaussian_matrix(rng, pitches, hidden, stddev);
  p.b_h = Vector(hidden, 0.0);
  p.b_z = Vector(pitches, 0.0);
  return p;
}

NadeParams make_nade(RngState& rng, std::size_t visible, std::size_t hidden, double stddev) {
  NadeParams p;
  p.w_enc = gaussian_matrix(rng, visible, hidden, stddev);
  p.w_dec = gaussian_matrix(rng, visible, hidden, stddev);
  p.b_vis = Vector(visible, 0.0);
  p.b_hid = Vector(hidden, 0.0);
  return p;
}

RnnNadeParams make_rnn_nade(RngState& rng, std::size_t pitches, std::size_t rnn_hidden,
                            std::size_t nade_hidden, double stddev) {
  RnnNadeParams p;
  p.w_zh = gaussian_matrix(rng, rnn_hidden, pitches, stddev);
  p.w_hh = gaussian_matrix(rng, rnn_hidden, rnn_hidden, stddev);
  p.b_h = Vector(rnn_hidden, 0.0);
  p.u_vis = gaussian_matrix(rng, pitches, rnn_hidden, stddev);
  p.u_hid = gaussian_matrix(rng, nade_hidden, rnn_hidden, stddev);
  p.nade = make_nade(rng, pitches, nade_hidden, stddev);
  return p;
}

double nade_logprob(const NadeParams& nade, const Vector& b_vis, const Vector& b_hid,
                    const std::vector<std::uint8_t>& v) {
  std::size_t d = nade.visible_dim();
  std::size_t h = nade.hidden_dim();
  check_bits(v.size(), d, "nade_logprob");
  if (b_vis.size() != d || b_hid.size() != h) {
    throw dim_error("nade_logprob: bias dimensions disagree with parameters");
  }
  Vector acc = b_hid;
  Vector hhat(h);
  double lp = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < h; ++k) hhat[k] = sigmoid(acc[k]);
    const double* dec = nade.w_dec.data.data() + i * h;
    double psi = b_vis[i];
    for (std::size_t k = 0; k < h; ++k) psi += dec[k] * hhat[k];
    lp += v[i] ? log_sigmoid(psi) : log_sigmoid(-psi);
    if (v[i]) {
      const double* enc = nade.w_enc.data.data() + i * h;
      for (std::size_t k = 0; k < h; ++k) acc[k] += enc[k];
    }
  }
  return lp;
}

std::vector<std::uint8_t> nade_sample(const NadeParams& nade, const Vector& b_vis,
                                      const Vector& b_hid, RngState& rng) {
  std::size_t d = nade.visible_dim();
  std::size_t h = nade.hidden_dim();
  if (b_vis.size() != d || b_hid.size() != h) {
    throw dim_error("nade_sample: bias dimensions disagree with parameters");
  }
  std::vector<std::uint8_t> v(d, 0);
  Vector acc = b_hid;
  Vector hhat(h);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < h; ++k) hhat[k] = sigmoid(acc[k]);
    const double* dec = nade.w_dec.data.data() + i * h;
    double psi = b_vis[i];
    for (std::size_t k = 0; k < h; ++k) psi += dec[k] * hhat[k];
    double p = sigmoid(psi);
    v[i] = rng.uniform() < p ? 1 : 0;
    if (v[i]) {
      const double* enc = nade.w_enc.data.data() + i * h;
      for (std::size_t k = 0; k < h; ++k) acc[k] += enc[k];
    }
  }
  return v;
}

LmState lm_init_state(const GenRnnParams& params) {
  return LmState{Vector(params.hidden_size(), 0.0), 0};
}

LmState lm_init_state(const RnnNadeParams& params) {
  return LmState{Vector(params.hidden_size(), 0.0), 0};
}

namespace {

Vector bits_to_vector(const std::vector<std::uint8_t>& z) {
  Vector out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] ? 1.0 : 0.0;
  return out;
}

LmState advance_elman(const Matrix& w_zh, const Matrix& w_hh, const Vector& b_h,
                      const LmState& state, const std::vector<std::uint8_t>& z) {
  check_bits(z.size(), w_zh.cols, "lm_advance");
  if (state.hidden.size() != w_hh.rows) {
    throw dim_error("lm_advance: state size disagrees with parameters");
  }
  Vector pre = matvec(w_hh, state.hidden);
  // z is sparse binary: add the active input columns directly
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (!z[j]) continue;
    for (std::size_t i = 0; i < w_zh.rows; ++i) pre[i] += w_zh.at(i, j);
  }
  axpy(1.0, b_h, pre);
  return LmState{sigmoid(pre), state.t + 1};
}

}  // namespace

double lm_step_logprob(const GenRnnParams& params, const LmState& state,
                       const std::vector<std::uint8_t>& z) {
  check_bits(z.size(), params.num_pitches(), "lm_step_logprob");
  if (state.hidden.size() != params.hidden_size()) {
    throw dim_error("lm_step_logprob: state size disagrees with parameters");
  }
  Vector psi = matvec(params.w_hz, state.hidden);
  axpy(1.0, params.b_z, psi);
  double lp = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    lp += z[j] ? log_sigmoid(psi[j]) : log_sigmoid(-psi[j]);
  }
  return lp;
}

double lm_step_logprob(const RnnNadeParams& params, const LmState& state,
                       const std::vector<std::uint8_t>& z) {
  check_bits(z.size(), params.num_pitches(), "lm_step_logprob");
  if (state.hidden.size() != params.hidden_size()) {
    throw dim_error("lm_step_logprob: state size disagrees with parameters");
  }
  Vector b_vis = matvec(params.u_vis, state.hidden);
  axpy(1.0, params.nade.b_vis, b_vis);
  Vector b_hid = matvec(params.u_hid, state.hidden);
  axpy(1.0, params.nade.b_hid, b_hid);
  return nade_logprob(params.nade, b_vis, b_hid, z);
}

LmState lm_advance(const GenRnnParams& params, const LmState& state,
                   const std::vector<std::uint8_t>& z) {
  return advance_elman(params.w_zh, params.w_hh, params.b_h, state, z);
}

LmState lm_advance(const RnnNadeParams& params, const LmState& state,
                   const std::vector<std::uint8_t>& z) {
  return advance_elman(params.w_zh, params.w_hh, params.b_h, state, z);
}

namespace {

class GenRnnScorer final : public LmStepScorer {
 public:
  GenRnnScorer(const GenRnnParams& params, const LmState& state) {
    Vector psi = matvec(params.w_hz, state.hidden);
    axpy(1.0, params.b_z, psi);
    log_on_.resize(psi.size());
    log_off_.resize(psi.size());
    for (std::size_t j = 0; j < psi.size(); ++j) {
      log_on_[j] = log_sigmoid(psi[j]);
      log_off_[j] = log_sigmoid(-psi[j]);
    }
  }
  double logprob(const std::vector<std::uint8_t>& z) const override {
    check_bits(z.size(), log_on_.size(), "GenRnnScorer::logprob");
    double lp = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) lp += z[j] ? log_on_[j] : log_off_[j];
    return lp;
  }

 private:
  Vector log_on_, log_off_;
};

class RnnNadeScorer final : public LmStepScorer {
 public:
  RnnNadeScorer(const RnnNadeParams& params, const LmState& state) : params_(&params) {
    b_vis_ = matvec(params.u_vis, state.hidden);
    axpy(1.0, params.nade.b_vis, b_vis_);
    b_hid_ = matvec(params.u_hid, state.hidden);
    axpy(1.0, params.nade.b_hid, b_hid_);
  }
  double logprob(const std::vector<std::uint8_t>& z) const override {
    return nade_logprob(params_->nade, b_vis_, b_hid_, z);
  }

 private:
  const RnnNadeParams* params_;
  Vector b_vis_, b_hid_;
};

}  // namespace

std::unique_ptr<LmStepScorer> GenRnnLm::step_scorer(const LmState& state) const {
  return std::make_unique<GenRnnScorer>(params_, state);
}

std::unique_ptr<LmStepScorer> RnnNadeLm::step_scorer(const LmState& state) const {
  return std::make_unique<RnnNadeScorer>(params_, state);
}

double gen_rnn_loss(const GenRnnParams& params, const Matrix& targets) {
  if (targets.cols != params.num_pitches()) {
    throw dim_error("gen_rnn_loss: target dim disagrees with parameters");
  }
  LmState state = lm_init_state(params);
  double nll = 0.0;
  for (std::size_t t = 0; t < targets.rows; ++t) {
    std::vector<std::uint8_t> z = bits_of_row(targets, t);
    nll -= lm_step_logprob(params, state, z);
    if (t + 1 < targets.rows) state = lm_advance(params, state, z);
  }
  return nll;
}

GenRnnParams gen_rnn_gradient(const GenRnnParams& params, const Matrix& targets) {
  if (targets.cols != params.num_pitches()) {
    throw dim_error("gen_rnn_gradient: target dim disagrees with parameters");
  }
  std::size_t t_frames = targets.rows;
  std::size_t hidden = params.hidden_size();

  GenRnnParams grad;
  grad.w_zh = Matrix(params.w_zh.rows, params.w_zh.cols);
  grad.w_hh = Matrix(params.w_hh.rows, params.w_hh.cols);
  grad.w_hz = Matrix(params.w_hz.rows, params.w_hz.cols);
  grad.b_h = Vector(params.b_h.size(), 0.0);
  grad.b_z = Vector(params.b_z.size(), 0.0);
  if (t_frames == 0) return grad;

  // forward: states[t] is the hidden vector that predicts frame t
  std::vector<Vector> states(t_frames);
  std::vector<Vector> outputs(t_frames);  // sigmoid probabilities
  states[0] = Vector(hidden, 0.0);
  for (std::size_t t = 0; t < t_frames; ++t) {
    Vector psi = matvec(params.w_hz, states[t]);
    axpy(1.0, params.b_z, psi);
    outputs[t] = sigmoid(psi);
    if (t + 1 < t_frames) {
      LmState next = advance_elman(params.w_zh, params.w_hh, params.b_h,
                                   LmState{states[t], t}, bits_of_row(targets, t));
      states[t + 1] = std::move(next.hidden);
    }
  }

  Vector carry(hidden, 0.0);  // dL/dstates[t] contributed through states[t+1]
  for (std::size_t t = t_frames; t-- > 0;) {
    Vector delta = outputs[t];
    for (std::size_t j = 0; j < delta.size(); ++j) delta[j] -= targets.at(t, j);
    add_outer(grad.w_hz, delta, states[t]);
    axpy(1.0, delta, grad.b_z);
    Vector dh = matvec_transposed(params.w_hz, delta);
    axpy(1.0, carry, dh);
    if (t == 0) break;
    // states[t] = sigmoid(w_zh z_{t-1} + w_hh states[t-1] + b_h)
    const Vector& h = states[t];
    for (std::size_t i = 0; i < dh.size(); ++i) dh[i] *= h[i] * (1.0 - h[i]);
    add_outer(grad.w_zh, dh, row_of(targets, t - 1));
    add_outer(grad.w_hh, dh, states[t - 1]);
    axpy(1.0, dh, grad.b_h);
    carry = matvec_transposed(params.w_hh, dh);
  }
  return grad;
}

namespace {

// One NADE step: negative log-likelihood plus gradients. d_w_enc/d_w_dec
// accumulate across steps; the bias gradients are per step because they feed
// the conditioning backward pass.
double nade_nll_backward(const NadeParams& nade, const Vector& b_vis, const Vector& b_hid,
                         const std::vector<std::uint8_t>& v, Matrix& d_w_enc, Matrix& d_w_dec,
                         Vector& d_b_vis, Vector& d_b_hid) {
  std::size_t d = nade.visible_dim();
  std::size_t h = nade.hidden_dim();

  // forward, storing the hidden chain
  Matrix hhat(d, h);
  Vector p(d);
  Vector acc = b_hid;
  double nll = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double* hrow = hhat.data.data() + i * h;
    for (std::size_t k = 0; k < h; ++k) hrow[k] = sigmoid(acc[k]);
    const double* dec = nade.w_dec.data.data() + i * h;
    double psi = b_vis[i];
    for (std::size_t k = 0; k < h; ++k) psi += dec[k] * hrow[k];
    p[i] = sigmoid(psi);
    nll -= v[i] ? log_sigmoid(psi) : log_sigmoid(-psi);
    if (v[i]) {
      const double* enc = nade.w_enc.data.data() + i * h;
      for (std::size_t k = 0; k < h; ++k) acc[k] += enc[k];
    }
  }

  // backward: g accumulates dL/d(acc after step i)
  Vector g(h, 0.0);
  for (std::size_t i = d; i-- > 0;) {
    double dpsi = p[i] - (v[i] ? 1.0 : 0.0);
    d_b_vis[i] += dpsi;
    const double* hrow = hhat.data.data() + i * h;
    double* ddec = d_w_dec.data.data() + i * h;
    const double* dec = nade.w_dec.data.data() + i * h;
    if (v[i]) {
      double* denc = d_w_enc.data.data() + i * h;
      for (std::size_t k = 0; k < h; ++k) denc[k] += g[k];
    }
    for (std::size_t k = 0; k < h; ++k) {
      ddec[k] += dpsi * hrow[k];
      double dhk = dpsi * dec[k];
      g[k] += dhk * hrow[k] * (1.0 - hrow[k]);
    }
  }
  axpy(1.0, g, d_b_hid);
  return nll;
}

}  // namespace

double rnn_nade_loss(const RnnNadeParams& params, const Matrix& targets) {
  if (targets.cols != params.num_pitches()) {
    throw dim_error("rnn_nade_loss: target dim disagrees with parameters");
  }
  LmState state = lm_init_state(params);
  double nll = 0.0;
  for (std::size_t t = 0; t < targets.rows; ++t) {
    std::vector<std::uint8_t> z = bits_of_row(targets, t);
    nll -= lm_step_logprob(params, state, z);
    if (t + 1 < targets.rows) state = lm_advance(params, state, z);
  }
  return nll;
}

RnnNadeParams rnn_nade_gradient(const RnnNadeParams& params, const Matrix& targets) {
  if (targets.cols != params.num_pitches()) {
    throw dim_error("rnn_nade_gradient: target dim disagrees with parameters");
  }
  std::size_t t_frames = targets.rows;
  std::size_t hidden = params.hidden_size();
  std::size_t d = params.num_pitches();
  std::size_t nh = params.nade.hidden_dim();

  RnnNadeParams grad;
  grad.w_zh = Matrix(params.w_zh.rows, params.w_zh.cols);
  grad.w_hh = Matrix(params.w_hh.rows, params.w_hh.cols);
  grad.b_h = Vector(params.b_h.size(), 0.0);
  grad.u_vis = Matrix(params.u_vis.rows, params.u_vis.cols);
  grad.u_hid = Matrix(params.u_hid.rows, params.u_hid.cols);
  grad.nade.w_enc = Matrix(params.nade.w_enc.rows, params.nade.w_enc.cols);
  grad.nade.w_dec = Matrix(params.nade.w_dec.rows, params.nade.w_dec.cols);
  grad.nade.b_vis = Vector(d, 0.0);
  grad.nade.b_hid = Vector(nh, 0.0);
  if (t_frames == 0) return grad;

  // forward: store the recurrent states
  std::vector<Vector> states(t_frames);
  states[0] = Vector(hidden, 0.0);
  for (std::size_t t = 0; t + 1 < t_frames; ++t) {
    LmState next = advance_elman(params.w_zh, params.w_hh, params.b_h, LmState{states[t], t},
                                 bits_of_row(targets, t));
    states[t + 1] = std::move(next.hidden);
  }

  Vector carry(hidden, 0.0);
  Vector d_b_vis_step(d);
  Vector d_b_hid_step(nh);
  for (std::size_t t = t_frames; t-- > 0;) {
    std::vector<std::uint8_t> z = bits_of_row(targets, t);
    // conditioned biases at this step
    Vector b_vis = matvec(params.u_vis, states[t]);
    axpy(1.0, params.nade.b_vis, b_vis);
    Vector b_hid = matvec(params.u_hid, states[t]);
    axpy(1.0, params.nade.b_hid, b_hid);

    std::fill(d_b_vis_step.begin(), d_b_vis_step.end(), 0.0);
    std::fill(d_b_hid_step.begin(), d_b_hid_step.end(), 0.0);
    nade_nll_backward(params.nade, b_vis, b_hid, z, grad.nade.w_enc, grad.nade.w_dec,
                      d_b_vis_step, d_b_hid_step);
    axpy(1.0, d_b_vis_step, grad.nade.b_vis);
    axpy(1.0, d_b_hid_step, grad.nade.b_hid);
    add_outer(grad.u_vis, d_b_vis_step, states[t]);
    add_outer(grad.u_hid, d_b_hid_step, states[t]);

    Vector dh = matvec_transposed(params.u_vis, d_b_vis_step);
    axpy(1.0, matvec_transposed(params.u_hid, d_b_hid_step), dh);
    axpy(1.0, carry, dh);
    if (t == 0) break;
    const Vector& h = states[t];
    for (std::size_t i = 0; i < dh.size(); ++i) dh[i] *= h[i] * (1.0 - h[i]);
    add_outer(grad.w_zh, dh, row_of(targets, t - 1));
    add_outer(grad.w_hh, dh, states[t - 1]);
    axpy(1.0, dh, grad.b_h);
    carry = matvec_transposed(params.w_hh, dh);
  }
  return grad;
}

TensorRefs gen_rnn_tensors(GenRnnParams& p) {
  return TensorRefs{{&p.w_zh, &p.w_hh, &p.w_hz}, {&p.b_h, &p.b_z}};
}

ConstTensorRefs gen_rnn_tensors(const GenRnnParams& p) {
  ConstTensorRefs refs;
  refs.mats = {&p.w_zh, &p.w_hh, &p.w_hz};
  refs.vecs = {&p.b_h, &p.b_z};
  return refs;
}

TensorRefs rnn_nade_tensors(RnnNadeParams& p) {
  return TensorRefs{{&p.w_zh, &p.w_hh, &p.u_vis, &p.u_hid, &p.nade.w_enc, &p.nade.w_dec},
                    {&p.b_h, &p.nade.b_vis, &p.nade.b_hid}};
}

ConstTensorRefs rnn_nade_tensors(const RnnNadeParams& p) {
  ConstTensorRefs refs;
  refs.mats = {&p.w_zh, &p.w_hh, &p.u_vis, &p.u_hid, &p.nade.w_enc, &p.nade.w_dec};
  refs.vecs = {&p.b_h, &p.nade.b_vis, &p.nade.b_hid};
  return refs;
}

namespace {

Matrix take_rows(const Matrix& m, std::size_t begin, std::size_t end) {
  Matrix out(end - begin, m.cols);
  std::copy(m.data.begin() + static_cast<long>(begin * m.cols),
            m.data.begin() + static_cast<long>(end * m.cols), out.data.begin());
  return out;
}

template <typename Params, typename LossFn, typename GradFn, typename RefsFn>
std::vector<EpochLoss> train_lm_impl(Params& params, const std::vector<const Matrix*>& train_rolls,
                                     const std::vector<const Matrix*>& valid_rolls,
                                     const TrainConfig& config, LossFn&& loss_fn, GradFn&& grad_fn,
                                     RefsFn&& refs_fn) {
  if (config.bptt_len == 0) throw config_error("train_lm: bptt_len must be positive");
  std::vector<Matrix> chunks;
  for (const auto* roll : train_rolls) {
    for (std::size_t start = 0; start < roll->rows; start += config.bptt_len) {
      chunks.push_back(take_rows(*roll, start, std::min(roll->rows, start + config.bptt_len)));
    }
  }

  auto batch_fn = [&](const Params& p, const std::vector<std::size_t>& order, std::size_t start,
                      std::size_t end) {
    double loss = 0.0;
    double weight = 0.0;
    Params grad;
    bool first = true;
    for (std::size_t k = start; k < end; ++k) {
      const Matrix& chunk = chunks[order[k]];
      loss += loss_fn(p, chunk);
      Params g = grad_fn(p, chunk);
      if (first) {
        grad = std::move(g);
        first = false;
      } else {
        TensorRefs acc = refs_fn(grad);
        TensorRefs add = refs_fn(g);
        for (std::size_t m = 0; m < acc.mats.size(); ++m) {
          for (std::size_t x = 0; x < acc.mats[m]->data.size(); ++x) {
            acc.mats[m]->data[x] += add.mats[m]->data[x];
          }
        }
        for (std::size_t v = 0; v < acc.vecs.size(); ++v) {
          for (std::size_t x = 0; x < acc.vecs[v]->size(); ++x) {
            (*acc.vecs[v])[x] += (*add.vecs[v])[x];
          }
        }
      }
      weight += static_cast<double>(chunk.rows);
    }
    return std::make_tuple(loss, weight, std::move(grad));
  };
  auto valid_fn = [&](const Params& p) {
    double loss = 0.0;
    double n = 0.0;
    for (const auto* roll : valid_rolls) {
      loss += loss_fn(p, *roll);
      n += static_cast<double>(roll->rows);
    }
    return n > 0.0 ? loss / n : 0.0;
  };
  return detail::run_training(params, chunks.size(), config.batch_sequences, config,
                              !valid_rolls.empty(), refs_fn, batch_fn, valid_fn);
}

}  // namespace

std::vector<EpochLoss> train_gen_rnn(GenRnnParams& params,
                                     const std::vector<const Matrix*>& train_rolls,
                                     const std::vector<const Matrix*>& valid_rolls,
                                     const TrainConfig& config) {
  return train_lm_impl(
      params, train_rolls, valid_rolls, config,
      [](const GenRnnParams& p, const Matrix& m) { return gen_rnn_loss(p, m); },
      [](const GenRnnParams& p, const Matrix& m) { return gen_rnn_gradient(p, m); },
      [](GenRnnParams& p) { return gen_rnn_tensors(p); });
}

std::vector<EpochLoss> train_rnn_nade(RnnNadeParams& params,
                                      const std::vector<const Matrix*>& train_rolls,
                                      const std::vector<const Matrix*>& valid_rolls,
                                      const TrainConfig& config) {
  return train_lm_impl(
      params, train_rolls, valid_rolls, config,
      [](const RnnNadeParams& p, const Matrix& m) { return rnn_nade_loss(p, m); },
      [](const RnnNadeParams& p, const Matrix& m) { return rnn_nade_gradient(p, m); },
      [](RnnNadeParams& p) { return rnn_nade_tensors(p); });
}

}  // namespace hybridscribe
