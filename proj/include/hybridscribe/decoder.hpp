#pragma once

#include <cstdint>
#include <vector>

#include "hybridscribe/acoustic.hpp"
#include "hybridscribe/enumerate.hpp"
#include "hybridscribe/language.hpp"
#include "hybridscribe/pianoroll.hpp"

namespace hybridscribe {

struct DecoderConfig {
  std::size_t beam_width = 100;
  // Per-depth expansion budget of one hypothesis; 0 means 2 * beam_width.
  std::size_t per_parent_cap = 0;

  std::size_t effective_cap() const {
    return per_parent_cap > 0 ? per_parent_cap : 2 * (beam_width > 0 ? beam_width : 1);
  }
};

struct DecodeResult {
  PianoRoll roll;
  double log_likelihood = 0.0;
};

// Scaled-likelihood step score: lm_logprob + acoustic_logprob - prior_logprob.
double hybrid_score_step(double lm_logprob, double acoustic_logprob, double prior_logprob);

// Breadth-first search keeping the beam_width best partial sequences per
// depth. At each depth the surviving hypotheses are swept round-robin (best
// first); each sweep draws the hypothesis's next most probable acoustic
// configuration, scores it, and offers it to a capacity-w queue of the
// highest cumulative scores. A hypothesis stops expanding when its next
// acoustic emission plus the largest possible (lm - prior) step cannot beat
// the queue minimum, when its enumerator is exhausted, or when it hits the
// per-parent cap. Ties are resolved by score, then the configuration
// appended at the current depth (bit 1 before 0), then parent rank.
DecodeResult beam_search(const AcousticPosteriors& posteriors, const LanguageModel& lm,
                         const MarginalPrior& prior, const DecoderConfig& config);

// Chronological argmax under the same expansion rules with beam width 1.
DecodeResult greedy_decode(const AcousticPosteriors& posteriors, const LanguageModel& lm,
                           const MarginalPrior& prior);

// Scores all 2^(N*T) label sequences; test oracle only, enforces N*T <= 16.
DecodeResult exhaustive_decode(const AcousticPosteriors& posteriors, const LanguageModel& lm,
                               const MarginalPrior& prior);

// Recomputes the cumulative hybrid score of a decoded roll from scratch.
double rescore_roll(const PianoRoll& roll, const AcousticPosteriors& posteriors,
                    const LanguageModel& lm, const MarginalPrior& prior);

}  // namespace hybridscribe
