#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

#include "hybridscribe/acoustic.hpp"
#include "hybridscribe/errors.hpp"
#include "hybridscribe/numeric.hpp"

namespace hybridscribe::detail {

// Shared epoch loop: shuffled minibatches, momentum updates on the mean
// per-frame gradient, early stopping on validation loss with best-snapshot
// restore. batch_loss_grad returns (summed loss, frame count, gradient).
template <typename Params, typename MakeRefs, typename BatchLossGrad, typename ValidLoss>
std::vector<EpochLoss> run_training(Params& params, std::size_t n_items, std::size_t batch_size,
                                    const TrainConfig& config, bool has_valid,
                                    MakeRefs&& make_refs, BatchLossGrad&& batch_loss_grad,
                                    ValidLoss&& valid_loss) {
  if (n_items == 0) throw data_error("training: no data");
  if (batch_size == 0) throw config_error("training: batch size must be positive");

  TensorRefs param_refs = make_refs(params);
  Params velocity_store = params;
  TensorRefs velocity = make_refs(velocity_store);
  fill_zero(velocity);

  RngState rng(config.seed);
  std::vector<std::size_t> order(n_items);
  for (std::size_t i = 0; i < n_items; ++i) order[i] = i;

  std::vector<EpochLoss> trace;
  Params best = params;
  double best_metric = has_valid ? valid_loss(params) : std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss_sum = 0.0;
    double epoch_weight = 0.0;
    for (std::size_t start = 0; start < n_items; start += batch_size) {
      std::size_t end = std::min(n_items, start + batch_size);
      auto [loss_sum, weight, grad_store] = batch_loss_grad(params, order, start, end);
      TensorRefs grad_refs = make_refs(grad_store);
      scale_tensors(grad_refs, 1.0 / weight);
      sgd_momentum_step(param_refs, ConstTensorRefs(grad_refs), velocity, config.learning_rate,
                        config.momentum);
      epoch_loss_sum += loss_sum;
      epoch_weight += weight;
    }
    EpochLoss el;
    el.train = epoch_loss_sum / epoch_weight;
    if (!std::isfinite(el.train)) {
      throw numeric_error("training diverged: non-finite loss at epoch " + std::to_string(epoch));
    }
    el.valid = has_valid ? valid_loss(params) : el.train;
    if (!std::isfinite(el.valid)) {
      throw numeric_error("training diverged: non-finite validation loss at epoch " +
                          std::to_string(epoch));
    }
    trace.push_back(el);
    if (el.valid < best_metric) {
      best_metric = el.valid;
      best = params;
      since_best = 0;
    } else {
      ++since_best;
      if (since_best >= config.patience) break;
    }
  }
  params = best;
  return trace;
}

}  // namespace hybridscribe::detail
