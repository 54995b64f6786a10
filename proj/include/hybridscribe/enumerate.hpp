#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <vector>

#include "hybridscribe/numeric.hpp"

namespace hybridscribe {

struct EnumeratedConfig {
  std::vector<std::uint8_t> config;  // one bit per pitch
  double log_prob;                   // sum of per-pitch Bernoulli log-terms
};

// Lazily enumerates the binary configurations of independent per-pitch
// Bernoulli probabilities in non-increasing log-probability order.
//
// The first emission is the MAP configuration (bit i = 1 iff p_i >= 0.5).
// Every other configuration is the MAP with a set of bits flipped; flipping
// bit i costs |log p_i - log(1 - p_i)|. Flip-sets are explored best-first
// over a frontier heap (each popped set spawns at most two successors), so
// emitting k configurations touches O(k) heap nodes and never materializes
// the full 2^N space.
//
// Tie order: configurations with exactly equal log-probability are emitted
// in lexicographic order of the bit-vector with bit value 1 sorting before
// 0 (equivalently, descending order as binary numbers with pitch 0 the most
// significant digit). Exact ties are collected into one batch before
// emission; a batch is truncated at kTieBatchCap configurations, beyond
// which the order within the tied class follows frontier discovery order.
class ConfigEnumerator {
 public:
  static constexpr std::size_t kTieBatchCap = 1u << 16;

  // Probabilities are clamped to [kProbEps, 1 - kProbEps].
  explicit ConfigEnumerator(const Vector& probabilities);

  // Next configuration, or nullopt once all 2^N have been emitted.
  std::optional<EnumeratedConfig> next_most_probable();

  // Log-probability the next emission will carry; -inf when exhausted.
  // Emissions are non-increasing, so this bounds every future emission.
  double peek_log_prob() const;

  std::size_t num_pitches() const { return map_config_.size(); }

 private:
  struct Node {
    double cost;                   // sum of flip costs, recomputed exactly
    std::vector<std::int32_t> flips;  // ascending positions into the sorted order
  };
  struct NodeCmp {
    bool operator()(const Node& a, const Node& b) const { return a.cost > b.cost; }
  };

  double flip_sum(const std::vector<std::int32_t>& flips) const;
  EnumeratedConfig realize(const Node& n) const;
  void push_children(const Node& n);
  void build_next_batch();

  std::vector<std::uint8_t> map_config_;
  double map_log_prob_ = 0.0;
  Vector sorted_costs_;                  // ascending
  std::vector<std::int32_t> sorted_to_pitch_;
  std::priority_queue<Node, std::vector<Node>, NodeCmp> frontier_;
  std::deque<EnumeratedConfig> pending_;  // current tie batch, already ordered
};

// True if `a` precedes `b` under the documented tie order (bit 1 before 0
// at the first differing pitch). Shared with the test oracles.
bool config_tie_less(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

}  // namespace hybridscribe
