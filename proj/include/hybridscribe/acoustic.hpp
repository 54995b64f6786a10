#pragma once

#include <cstdint>
#include <vector>

#include "hybridscribe/numeric.hpp"

namespace hybridscribe {

// Per-pitch posterior probabilities P(z_t | x_t), one row per frame.
struct AcousticPosteriors {
  Matrix probs;       // T x N, entries in [0, 1]
  double hop_ms = 0;  // frame grid the probabilities live on
};

// Feed-forward sigmoid network. weights[l] maps layer l-1 activations (layer
// -1 being the input frame) to layer l pre-activations; every layer,
// including the output, applies the sigmoid.
struct DnnParams {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  std::size_t input_dim() const { return weights.empty() ? 0 : weights.front().cols; }
  std::size_t output_dim() const { return weights.empty() ? 0 : weights.back().rows; }
  std::size_t hidden_units_total() const;
};

// Uni-directional stacked Elman network. Layer l at time t sees layer l-1's
// output at t plus its own state at t-1 (zero at t=0); a sigmoid output
// projection sits on the top layer's state.
struct StackedRnnParams {
  struct Layer {
    Matrix w_in;   // hidden x input
    Matrix w_rec;  // hidden x hidden
    Vector bias;
  };
  std::vector<Layer> layers;
  Matrix w_out;
  Vector b_out;

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().w_in.cols; }
  std::size_t output_dim() const { return w_out.rows; }
};

// Weights drawn from N(0, stddev^2), biases zero.
DnnParams make_dnn(RngState& rng, std::size_t input_dim, const std::vector<std::size_t>& hidden,
                   std::size_t output_dim, double stddev = 0.01);
StackedRnnParams make_stacked_rnn(RngState& rng, std::size_t input_dim,
                                  const std::vector<std::size_t>& hidden,
                                  std::size_t output_dim, double stddev = 0.01);

Vector dnn_forward(const DnnParams& params, const Vector& frame);
AcousticPosteriors dnn_posteriors(const DnnParams& params, const Matrix& frames);

// Concatenation of all hidden-layer activations, output layer excluded.
Vector dnn_feature_extract(const DnnParams& params, const Vector& frame);
Matrix dnn_feature_extract_all(const DnnParams& params, const Matrix& frames);

AcousticPosteriors rnn_posteriors(const StackedRnnParams& params, const Matrix& frames);

// Summed cross-entropy of the network outputs against binary targets, and
// its exact gradient. These are the oracle-facing objectives; the training
// loop rescales by frame count for updates.
double dnn_loss(const DnnParams& params, const Matrix& frames, const Matrix& targets);
DnnParams dnn_gradient(const DnnParams& params, const Matrix& frames, const Matrix& targets);
double rnn_loss(const StackedRnnParams& params, const Matrix& frames, const Matrix& targets);
StackedRnnParams rnn_gradient(const StackedRnnParams& params, const Matrix& frames,
                              const Matrix& targets);

TensorRefs dnn_tensors(DnnParams& p);
ConstTensorRefs dnn_tensors(const DnnParams& p);
TensorRefs rnn_tensors(StackedRnnParams& p);
ConstTensorRefs rnn_tensors(const StackedRnnParams& p);

struct TrainConfig {
  double learning_rate = 0.1;
  double momentum = 0.9;
  std::size_t batch_frames = 256;    // DNN minibatch
  std::size_t batch_sequences = 8;   // RNN minibatch
  std::size_t bptt_len = 200;        // subsequence length for BPTT
  std::size_t max_epochs = 50;
  std::size_t patience = 10;         // early-stopping patience, in epochs
  std::uint64_t seed = 1;
};

struct EpochLoss {
  double train = 0.0;  // mean per-frame cross-entropy seen during updates
  double valid = 0.0;  // mean per-frame cross-entropy on the validation set
};

// SGD with momentum on mean per-frame cross-entropy. The DNN treats frames
// independently; the RNN trains by full BPTT on subsequences of bptt_len
// frames (tracks are chunked, tails kept). Early stopping keeps the
// parameters from the best validation epoch. Loss turning non-finite raises
// numeric_error.
std::vector<EpochLoss> train_dnn(DnnParams& params, const std::vector<const Matrix*>& train_frames,
                                 const std::vector<const Matrix*>& train_targets,
                                 const std::vector<const Matrix*>& valid_frames,
                                 const std::vector<const Matrix*>& valid_targets,
                                 const TrainConfig& config);

std::vector<EpochLoss> train_rnn(StackedRnnParams& params,
                                 const std::vector<const Matrix*>& train_frames,
                                 const std::vector<const Matrix*>& train_targets,
                                 const std::vector<const Matrix*>& valid_frames,
                                 const std::vector<const Matrix*>& valid_targets,
                                 const TrainConfig& config);

}  // namespace hybridscribe
