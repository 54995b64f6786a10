#include "hybridscribe/acoustic.hpp"

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

void check_pair(const Matrix& frames, const Matrix& targets, std::size_t in_dim,
                std::size_t out_dim, const char* who) {
  if (frames.rows != targets.rows) {
    throw dim_error(std::string(who) + ": frame count " + std::to_string(frames.rows) +
                    " != target count " + std::to_string(targets.rows));
  }
  if (frames.cols != in_dim) {
    throw dim_error(std::string(who) + ": frame dim " + std::to_string(frames.cols) +
                    " != input dim " + std::to_string(in_dim));
  }
  if (targets.cols != out_dim) {
    throw dim_error(std::string(who) + ": target dim " + std::to_string(targets.cols) +
                    " != output dim " + std::to_string(out_dim));
  }
}

}  // namespace

std::size_t DnnParams::hidden_units_total() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < weights.size(); ++l) n += weights[l].rows;
  return n;
}

DnnParams make_dnn(RngState& rng, std::size_t input_dim, const std::vector<std::size_t>& hidden,
                   std::size_t output_dim, double stddev) {
  DnnParams p;
  std::size_t prev = input_dim;
  for (std::size_t h : hidden) {
    p.weights.push_back(gaussian_matrix(rng, h, prev, stddev));
    p.biases.push_back(Vector(h, 0.0));
    prev = h;
  }
  p.weights.push_back(gaussian_matrix(rng, output_dim, prev, stddev));
  p.biases.push_back(Vector(output_dim, 0.0));
  return p;
}

StackedRnnParams make_stacked_rnn(RngState& rng, std::size_t input_dim,
                                  const std::vector<std::size_t>& hidden,
                                  std::size_t output_dim, double stddev) {
  StackedRnnParams p;
  std::size_t prev = input_dim;
  for (std::size_t h : hidden) {
    StackedRnnParams::Layer layer;
    layer.w_in = gaussian_matrix(rng, h, prev, stddev);
    layer.w_rec = gaussian_matrix(rng, h, h, stddev);
    layer.bias = Vector(h, 0.0);
    p.layers.push_back(std::move(layer));
    prev = h;
  }
  p.w_out = gaussian_matrix(rng, output_dim, prev, stddev);
  p.b_out = Vector(output_dim, 0.0);
  return p;
}

Vector dnn_forward(const DnnParams& params, const Vector& frame) {
  if (frame.size() != params.input_dim()) {
    throw dim_error("dnn_forward: frame dim " + std::to_string(frame.size()) +
                    " != input dim " + std::to_string(params.input_dim()));
  }
  Vector a = frame;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    Vector z = matvec(params.weights[l], a);
    axpy(1.0, params.biases[l], z);
    a = sigmoid(z);
  }
  return a;
}

AcousticPosteriors dnn_posteriors(const DnnParams& params, const Matrix& frames) {
  AcousticPosteriors out;
  out.probs = Matrix(frames.rows, params.output_dim());
  for (std::size_t t = 0; t < frames.rows; ++t) {
    Vector p = dnn_forward(params, row_of(frames, t));
    std::copy(p.begin(), p.end(), out.probs.data.begin() + static_cast<long>(t * p.size()));
  }
  return out;
}

Vector dnn_feature_extract(const DnnParams& params, const Vector& frame) {
  if (frame.size() != params.input_dim()) {
    throw dim_error("dnn_feature_extract: frame dim mismatch");
  }
  Vector features;
  features.reserve(params.hidden_units_total());
  Vector a = frame;
  for (std::size_t l = 0; l + 1 < params.weights.size(); ++l) {
    Vector z = matvec(params.weights[l], a);
    axpy(1.0, params.biases[l], z);
    a = sigmoid(z);
    features.insert(features.end(), a.begin(), a.end());
  }
  return features;
}

Matrix dnn_feature_extract_all(const DnnParams& params, const Matrix& frames) {
  Matrix out(frames.rows, params.hidden_units_total());
  for (std::size_t t = 0; t < frames.rows; ++t) {
    Vector f = dnn_feature_extract(params, row_of(frames, t));
    std::copy(f.begin(), f.end(), out.data.begin() + static_cast<long>(t * f.size()));
  }
  return out;
}

AcousticPosteriors rnn_posteriors(const StackedRnnParams& params, const Matrix& frames) {
  if (frames.rows > 0 && frames.cols != params.input_dim()) {
    throw dim_error("rnn_posteriors: frame dim " + std::to_string(frames.cols) +
                    " != input dim " + std::to_string(params.input_dim()));
  }
  AcousticPosteriors out;
  out.probs = Matrix(frames.rows, params.output_dim());
  std::vector<Vector> state;
  for (const auto& layer : params.layers) state.emplace_back(layer.w_rec.rows, 0.0);
  for (std::size_t t = 0; t < frames.rows; ++t) {
    Vector input = row_of(frames, t);
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
      const auto& layer = params.layers[l];
      Vector z = matvec(layer.w_in, input);
      Vector rec = matvec(layer.w_rec, state[l]);
      axpy(1.0, rec, z);
      axpy(1.0, layer.bias, z);
      state[l] = sigmoid(z);
      input = state[l];
    }
    Vector z = matvec(params.w_out, input);
    axpy(1.0, params.b_out, z);
    Vector o = sigmoid(z);
    std::copy(o.begin(), o.end(), out.probs.data.begin() + static_cast<long>(t * o.size()));
  }
  return out;
}

double dnn_loss(const DnnParams& params, const Matrix& frames, const Matrix& targets) {
  check_pair(frames, targets, params.input_dim(), params.output_dim(), "dnn_loss");
  double loss = 0.0;
  for (std::size_t t = 0; t < frames.rows; ++t) {
    loss += cross_entropy_loss(dnn_forward(params, row_of(frames, t)), row_of(targets, t));
  }
  return loss;
}

DnnParams dnn_gradient(const DnnParams& params, const Matrix& frames, const Matrix& targets) {
  check_pair(frames, targets, params.input_dim(), params.output_dim(), "dnn_gradient");
  DnnParams grad;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    grad.weights.emplace_back(params.weights[l].rows, params.weights[l].cols);
    grad.biases.emplace_back(params.biases[l].size(), 0.0);
  }
  std::size_t n_layers = params.weights.size();
  for (std::size_t t = 0; t < frames.rows; ++t) {
    std::vector<Vector> acts;  // acts[0] = input, acts[l+1] = layer l output
    acts.push_back(row_of(frames, t));
    for (std::size_t l = 0; l < n_layers; ++l) {
      Vector z = matvec(params.weights[l], acts.back());
      axpy(1.0, params.biases[l], z);
      acts.push_back(sigmoid(z));
    }
    // sigmoid + cross-entropy collapses to (p - target) at the output
    Vector delta = acts.back();
    Vector target = row_of(targets, t);
    for (std::size_t i = 0; i < delta.size(); ++i) delta[i] -= target[i];
    for (std::size_t l = n_layers; l-- > 0;) {
      add_outer(grad.weights[l], delta, acts[l]);
      axpy(1.0, delta, grad.biases[l]);
      if (l > 0) {
        Vector back = matvec_transposed(params.weights[l], delta);
        const Vector& a = acts[l];
        for (std::size_t i = 0; i < back.size(); ++i) back[i] *= a[i] * (1.0 - a[i]);
        delta = std::move(back);
      }
    }
  }
  return grad;
}

double rnn_loss(const StackedRnnParams& params, const Matrix& frames, const Matrix& targets) {
  check_pair(frames, targets, params.input_dim(), params.output_dim(), "rnn_loss");
  AcousticPosteriors post = rnn_posteriors(params, frames);
  double loss = 0.0;
  for (std::size_t t = 0; t < frames.rows; ++t) {
    loss += cross_entropy_loss(row_of(post.probs, t), row_of(targets, t));
  }
  return loss;
}

StackedRnnParams rnn_gradient(const StackedRnnParams& params, const Matrix& frames,
                              const Matrix& targets) {
  check_pair(frames, targets, params.input_dim(), params.output_dim(), "rnn_gradient");
  std::size_t n_layers = params.layers.size();
  std::size_t t_frames = frames.rows;

  StackedRnnParams grad;
  for (const auto& layer : params.layers) {
    StackedRnnParams::Layer g;
    g.w_in = Matrix(layer.w_in.rows, layer.w_in.cols);
    g.w_rec = Matrix(layer.w_rec.rows, layer.w_rec.cols);
    g.bias = Vector(layer.bias.size(), 0.0);
    grad.layers.push_back(std::move(g));
  }
  grad.w_out = Matrix(params.w_out.rows, params.w_out.cols);
  grad.b_out = Vector(params.b_out.size(), 0.0);

  // forward, storing every layer state
  std::vector<std::vector<Vector>> states(n_layers);  // states[l][t]
  std::vector<Vector> outputs(t_frames);
  std::vector<Vector> layer_state;
  for (const auto& layer : params.layers) layer_state.emplace_back(layer.w_rec.rows, 0.0);
  for (std::size_t t = 0; t < t_frames; ++t) {
    Vector input = row_of(frames, t);
    for (std::size_t l = 0; l < n_layers; ++l) {
      const auto& layer = params.layers[l];
      Vector z = matvec(layer.w_in, input);
      Vector rec = matvec(layer.w_rec, layer_state[l]);
      axpy(1.0, rec, z);
      axpy(1.0, layer.bias, z);
      layer_state[l] = sigmoid(z);
      states[l].push_back(layer_state[l]);
      input = layer_state[l];
    }
    Vector z = matvec(params.w_out, input);
    axpy(1.0, params.b_out, z);
    outputs[t] = sigmoid(z);
  }

  // backward through time
  std::vector<Vector> rec_carry(n_layers);  // dL/dh_l at time t from t+1
  for (std::size_t l = 0; l < n_layers; ++l) {
    rec_carry[l] = Vector(params.layers[l].w_rec.rows, 0.0);
  }
  for (std::size_t t = t_frames; t-- > 0;) {
    Vector delta_out = outputs[t];
    Vector target = row_of(targets, t);
    for (std::size_t i = 0; i < delta_out.size(); ++i) delta_out[i] -= target[i];
    add_outer(grad.w_out, delta_out, states[n_layers - 1][t]);
    axpy(1.0, delta_out, grad.b_out);

    Vector from_above = matvec_transposed(params.w_out, delta_out);
    for (std::size_t l = n_layers; l-- > 0;) {
      const auto& layer = params.layers[l];
      Vector dh = std::move(from_above);
      axpy(1.0, rec_carry[l], dh);
      const Vector& h = states[l][t];
      for (std::size_t i = 0; i < dh.size(); ++i) dh[i] *= h[i] * (1.0 - h[i]);
      const Vector below = (l == 0) ? row_of(frames, t) : states[l - 1][t];
      add_outer(grad.layers[l].w_in, dh, below);
      if (t > 0) add_outer(grad.layers[l].w_rec, dh, states[l][t - 1]);
      axpy(1.0, dh, grad.layers[l].bias);
      rec_carry[l] = matvec_transposed(layer.w_rec, dh);
      if (l > 0) from_above = matvec_transposed(layer.w_in, dh);
    }
  }
  return grad;
}

TensorRefs dnn_tensors(DnnParams& p) {
  TensorRefs refs;
  for (auto& w : p.weights) refs.mats.push_back(&w);
  for (auto& b : p.biases) refs.vecs.push_back(&b);
  return refs;
}

ConstTensorRefs dnn_tensors(const DnnParams& p) {
  ConstTensorRefs refs;
  for (const auto& w : p.weights) refs.mats.push_back(&w);
  for (const auto& b : p.biases) refs.vecs.push_back(&b);
  return refs;
}

TensorRefs rnn_tensors(StackedRnnParams& p) {
  TensorRefs refs;
  for (auto& layer : p.layers) {
    refs.mats.push_back(&layer.w_in);
    refs.mats.push_back(&layer.w_rec);
    refs.vecs.push_back(&layer.bias);
  }
  refs.mats.push_back(&p.w_out);
  refs.vecs.push_back(&p.b_out);
  return refs;
}

ConstTensorRefs rnn_tensors(const StackedRnnParams& p) {
  ConstTensorRefs refs;
  for (const auto& layer : p.layers) {
    refs.mats.push_back(&layer.w_in);
    refs.mats.push_back(&layer.w_rec);
    refs.vecs.push_back(&layer.bias);
  }
  refs.mats.push_back(&p.w_out);
  refs.vecs.push_back(&p.b_out);
  return refs;
}

namespace {

double mean_frame_loss_dnn(const DnnParams& params, const std::vector<const Matrix*>& frames,
                           const std::vector<const Matrix*>& targets) {
  double loss = 0.0;
  double n = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    loss += dnn_loss(params, *frames[i], *targets[i]);
    n += static_cast<double>(frames[i]->rows);
  }
  return n > 0.0 ? loss / n : 0.0;
}

double mean_frame_loss_rnn(const StackedRnnParams& params,
                           const std::vector<const Matrix*>& frames,
                           const std::vector<const Matrix*>& targets) {
  double loss = 0.0;
  double n = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    loss += rnn_loss(params, *frames[i], *targets[i]);
    n += static_cast<double>(frames[i]->rows);
  }
  return n > 0.0 ? loss / n : 0.0;
}

Matrix take_rows(const Matrix& m, std::size_t begin, std::size_t end) {
  Matrix out(end - begin, m.cols);
  std::copy(m.data.begin() + static_cast<long>(begin * m.cols),
            m.data.begin() + static_cast<long>(end * m.cols), out.data.begin());
  return out;
}

}  // namespace

std::vector<EpochLoss> train_dnn(DnnParams& params, const std::vector<const Matrix*>& train_frames,
                                 const std::vector<const Matrix*>& train_targets,
                                 const std::vector<const Matrix*>& valid_frames,
                                 const std::vector<const Matrix*>& valid_targets,
                                 const TrainConfig& config) {
  if (train_frames.size() != train_targets.size()) {
    throw dim_error("train_dnn: frame/target track counts differ");
  }
  // pool all frames; items are single frames
  std::vector<std::pair<const Matrix*, std::size_t>> index;  // (track, row)
  for (std::size_t i = 0; i < train_frames.size(); ++i) {
    if (train_frames[i]->rows != train_targets[i]->rows) {
      throw dim_error("train_dnn: track " + std::to_string(i) + " frame/target rows differ");
    }
    for (std::size_t t = 0; t < train_frames[i]->rows; ++t) index.emplace_back(train_frames[i], t);
  }
  std::vector<std::pair<const Matrix*, std::size_t>> tindex;
  for (std::size_t i = 0; i < train_targets.size(); ++i) {
    for (std::size_t t = 0; t < train_targets[i]->rows; ++t) tindex.emplace_back(train_targets[i], t);
  }

  auto batch_fn = [&](const DnnParams& p, const std::vector<std::size_t>& order,
                      std::size_t start, std::size_t end) {
    Matrix bx(end - start, p.input_dim());
    Matrix bt(end - start, p.output_dim());
    for (std::size_t k = start; k < end; ++k) {
      auto [fm, fr] = index[order[k]];
      auto [tm, tr] = tindex[order[k]];
      std::copy(fm->data.begin() + static_cast<long>(fr * fm->cols),
                fm->data.begin() + static_cast<long>((fr + 1) * fm->cols),
                bx.data.begin() + static_cast<long>((k - start) * bx.cols));
      std::copy(tm->data.begin() + static_cast<long>(tr * tm->cols),
                tm->data.begin() + static_cast<long>((tr + 1) * tm->cols),
                bt.data.begin() + static_cast<long>((k - start) * bt.cols));
    }
    double loss = dnn_loss(p, bx, bt);
    DnnParams grad = dnn_gradient(p, bx, bt);
    return std::make_tuple(loss, static_cast<double>(end - start), std::move(grad));
  };
  auto valid_fn = [&](const DnnParams& p) {
    return mean_frame_loss_dnn(p, valid_frames, valid_targets);
  };
  auto refs_fn = [](DnnParams& p) { return dnn_tensors(p); };
  return detail::run_training(params, index.size(), config.batch_frames, config,
                              !valid_frames.empty(), refs_fn, batch_fn, valid_fn);
}

std::vector<EpochLoss> train_rnn(StackedRnnParams& params,
                                 const std::vector<const Matrix*>& train_frames,
                                 const std::vector<const Matrix*>& train_targets,
                                 const std::vector<const Matrix*>& valid_frames,
                                 const std::vector<const Matrix*>& valid_targets,
                                 const TrainConfig& config) {
  if (train_frames.size() != train_targets.size()) {
    throw dim_error("train_rnn: frame/target track counts differ");
  }
  if (config.bptt_len == 0) throw config_error("train_rnn: bptt_len must be positive");
  // chunk tracks into subsequences
  std::vector<std::pair<Matrix, Matrix>> chunks;
  for (std::size_t i = 0; i < train_frames.size(); ++i) {
    const Matrix& fm = *train_frames[i];
    const Matrix& tm = *train_targets[i];
    if (fm.rows != tm.rows) {
      throw dim_error("train_rnn: track " + std::to_string(i) + " frame/target rows differ");
    }
    for (std::size_t start = 0; start < fm.rows; start += config.bptt_len) {
      std::size_t end = std::min(fm.rows, start + config.bptt_len);
      chunks.emplace_back(take_rows(fm, start, end), take_rows(tm, start, end));
    }
  }

  auto batch_fn = [&](const StackedRnnParams& p, const std::vector<std::size_t>& order,
                      std::size_t start, std::size_t end) {
    double loss = 0.0;
    double weight = 0.0;
    StackedRnnParams grad;
    bool first = true;
    for (std::size_t k = start; k < end; ++k) {
      const auto& [fx, ft] = chunks[order[k]];
      loss += rnn_loss(p, fx, ft);
      StackedRnnParams g = rnn_gradient(p, fx, ft);
      if (first) {
        grad = std::move(g);
        first = false;
      } else {
        TensorRefs acc = rnn_tensors(grad);
        ConstTensorRefs add = rnn_tensors(g);
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
      weight += static_cast<double>(fx.rows);
    }
    return std::make_tuple(loss, weight, std::move(grad));
  };
  auto valid_fn = [&](const StackedRnnParams& p) {
    return mean_frame_loss_rnn(p, valid_frames, valid_targets);
  };
  auto refs_fn = [](StackedRnnParams& p) { return rnn_tensors(p); };
  return detail::run_training(params, chunks.size(), config.batch_sequences, config,
                              !valid_frames.empty(), refs_fn, batch_fn, valid_fn);
}

}  // namespace hybridscribe
