#include "hybridscribe/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hybridscribe {

bool config_tie_less(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return a.size() < b.size();
}

ConfigEnumerator::ConfigEnumerator(const Vector& probabilities) {
  std::size_t n = probabilities.size();
  map_config_.resize(n);
  Vector costs(n);
  for (std::size_t i = 0; i < n; ++i) {
    double p = clamp_prob(probabilities[i]);
    double log_p = std::log(p);
    double log_q = std::log(1.0 - p);
    if (p >= 0.5) {
      map_config_[i] = 1;
      map_log_prob_ += log_p;
      costs[i] = log_p - log_q;
    } else {
      map_config_[i] = 0;
      map_log_prob_ += log_q;
      costs[i] = log_q - log_p;
    }
  }
  sorted_to_pitch_.resize(n);
  for (std::size_t i = 0; i < n; ++i) sorted_to_pitch_[i] = static_cast<std::int32_t>(i);
  std::sort(sorted_to_pitch_.begin(), sorted_to_pitch_.end(),
            [&costs](std::int32_t a, std::int32_t b) {
              if (costs[a] != costs[b]) return costs[a] < costs[b];
              return a > b;
            });
  sorted_costs_.resize(n);
  for (std::size_t i = 0; i < n; ++i) sorted_costs_[i] = costs[sorted_to_pitch_[i]];

  frontier_.push(Node{0.0, {}});
}

double ConfigEnumerator::flip_sum(const std::vector<std::int32_t>& flips) const {
  double s = 0.0;
  for (std::int32_t f : flips) s += sorted_costs_[f];
  return s;
}

EnumeratedConfig ConfigEnumerator::realize(const Node& n) const {
  EnumeratedConfig out;
  out.config = map_config_;
  for (std::int32_t f : n.flips) {
    std::int32_t pitch = sorted_to_pitch_[f];
    out.config[static_cast<std::size_t>(pitch)] ^= 1;
  }
  out.log_prob = map_log_prob_ - n.cost;
  return out;
}

void ConfigEnumerator::push_children(const Node& n) {
  auto count = static_cast<std::int32_t>(sorted_costs_.size());
  if (n.flips.empty()) {
    if (count > 0) {
      Node child{0.0, {0}};
      child.cost = flip_sum(child.flips);
      frontier_.push(std::move(child));
    }
    return;
  }
  std::int32_t last = n.flips.back();
  if (last + 1 >= count) return;
  Node sibling{0.0, n.flips};
  sibling.flips.back() = last + 1;
  sibling.cost = flip_sum(sibling.flips);
  frontier_.push(std::move(sibling));
  Node extend{0.0, n.flips};
  extend.flips.push_back(last + 1);
  extend.cost = flip_sum(extend.flips);
  frontier_.push(std::move(extend));
}

void ConfigEnumerator::build_next_batch() {
  if (frontier_.empty()) return;
  double batch_cost = frontier_.top().cost;
  std::vector<EnumeratedConfig> batch;
  while (!frontier_.empty() && frontier_.top().cost == batch_cost &&
         batch.size() < kTieBatchCap) {
    Node n = frontier_.top();
    frontier_.pop();
    batch.push_back(realize(n));
    push_children(n);
  }
  std::sort(batch.begin(), batch.end(), [](const EnumeratedConfig& a, const EnumeratedConfig& b) {
    return config_tie_less(a.config, b.config);
  });
  for (auto& e : batch) pending_.push_back(std::move(e));
}

std::optional<EnumeratedConfig> ConfigEnumerator::next_most_probable() {
  if (pending_.empty()) build_next_batch();
  if (pending_.empty()) return std::nullopt;
  EnumeratedConfig out = std::move(pending_.front());
  pending_.pop_front();
  return out;
}

double ConfigEnumerator::peek_log_prob() const {
  if (!pending_.empty()) return pending_.front().log_prob;
  if (!frontier_.empty()) return map_log_prob_ - frontier_.top().cost;
  return -std::numeric_limits<double>::infinity();
}

}  // namespace hybridscribe
