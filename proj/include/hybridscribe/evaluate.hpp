#pragma once

#include <cstdint>
#include <vector>

#include "hybridscribe/pianoroll.hpp"

namespace hybridscribe {

struct EvalResult {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double accuracy = 0.0;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
};

// Recomputes the ratios from tp/fp/fn. Conventions: if tp+fp+fn == 0 all
// four measures are 1; otherwise an undefined ratio (empty denominator) is 0.
EvalResult eval_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

// Cell-wise counts over the time x pitch grid; rolls are aligned by
// truncation to the shorter length.
EvalResult frame_metrics(const PianoRoll& pred, const PianoRoll& truth);

// Onset-only note matching: a prediction matches an unmatched truth note of
// the same pitch with |onset difference| <= tolerance. Matching is greedy in
// ascending onset-difference order and one-to-one.
EvalResult note_onset_metrics(const std::vector<NoteEvent>& pred,
                              const std::vector<NoteEvent>& truth, double tolerance_ms);

// Pooled (micro-averaged) counts across tracks.
EvalResult aggregate(const std::vector<EvalResult>& per_track);

}  // namespace hybridscribe
