#pragma once

#include <vector>

#include "hybridscribe/acoustic.hpp"
#include "hybridscribe/language.hpp"
#include "hybridscribe/pianoroll.hpp"

namespace hybridscribe {

struct ThresholdSet {
  Vector thresholds;  // per pitch, in [0, 1]
};

// Independent 2-state chain per pitch; state 1 = active.
struct HmmPitchParams {
  struct Pitch {
    double trans[2][2];  // trans[s][s'], rows sum to 1
    double initial[2];   // sums to 1
  };
  std::vector<Pitch> pitches;
};

// Per pitch, the grid value k/100 (k = 1..99) maximizing frame F-measure on
// the fitting data; ties take the lowest threshold. A pitch never active in
// the truth defaults to 0.5.
ThresholdSet fit_thresholds(const std::vector<const AcousticPosteriors*>& posteriors,
                            const std::vector<const PianoRoll*>& truths);

// roll[t][j] = 1 iff posterior >= threshold_j
PianoRoll apply_thresholds(const AcousticPosteriors& posteriors, const ThresholdSet& thresholds);

// Transition counts over consecutive frames and frame-0 state counts, both
// with add-one smoothing.
HmmPitchParams fit_hmm(const std::vector<const PianoRoll*>& truths);

// Per-pitch Viterbi over the 2-state chain with scaled-likelihood emissions
// log P(s|x) - log P(s), where P(on) is the marginal prior. Ties prefer the
// active state.
PianoRoll hmm_smooth(const AcousticPosteriors& posteriors, const HmmPitchParams& hmm,
                     const MarginalPrior& prior);

// Per-pitch sliding median; the window shrinks symmetrically at the edges so
// the count stays odd. Window must be odd and >= 1.
PianoRoll median_filter(const PianoRoll& roll, std::size_t window);
AcousticPosteriors median_filter(const AcousticPosteriors& posteriors, std::size_t window);

// Drops notes with offset - onset < min_ms/1000 (boundary kept).
std::vector<NoteEvent> min_duration_prune(const std::vector<NoteEvent>& notes, double min_ms);

// Each maximal run of active frames becomes one note: onset at the run-start
// frame time, offset at the frame time one past the run end.
std::vector<NoteEvent> roll_to_notes(const PianoRoll& roll);

}  // namespace hybridscribe
