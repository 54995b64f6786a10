#include "hybridscribe/postprocess.hpp"

#include <algorithm>
#include <cmath>

#include "hybridscribe/errors.hpp"

namespace hybridscribe {

ThresholdSet fit_thresholds(const std::vector<const AcousticPosteriors*>& posteriors,
                            const std::vector<const PianoRoll*>& truths) {
  if (posteriors.size() != truths.size()) {
    throw dim_error("fit_thresholds: posterior/truth track counts differ");
  }
  if (posteriors.empty()) throw data_error("fit_thresholds: no data");
  std::size_t n = posteriors.front()->probs.cols;
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    if (posteriors[i]->probs.cols != n || truths[i]->pitches != n) {
      throw dim_error("fit_thresholds: pitch counts differ");
    }
    if (posteriors[i]->probs.rows != truths[i]->frames) {
      throw dim_error("fit_thresholds: track " + std::to_string(i) +
                      " posterior/truth frame counts differ");
    }
  }

  ThresholdSet out;
  out.thresholds.assign(n, 0.5);
  for (std::size_t j = 0; j < n; ++j) {
    bool any_active = false;
    for (const auto* truth : truths) {
      for (std::size_t t = 0; t < truth->frames; ++t) {
        if (truth->at(t, j)) {
          any_active = true;
          break;
        }
      }
      if (any_active) break;
    }
    if (!any_active) continue;  // keep the 0.5 default

    double best_f = -1.0;
    double best_theta = 0.5;
    for (int k = 1; k <= 99; ++k) {
      double theta = static_cast<double>(k) / 100.0;
      std::size_t tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < posteriors.size(); ++i) {
        const auto& probs = posteriors[i]->probs;
        const auto* truth = truths[i];
        for (std::size_t t = 0; t < probs.rows; ++t) {
          bool pred = probs.at(t, j) >= theta;
          bool act = truth->at(t, j) != 0;
          if (pred && act) ++tp;
          else if (pred) ++fp;
          else if (act) ++fn;
        }
      }
      double denom = 2.0 * static_cast<double>(tp) + static_cast<double>(fp + fn);
      double f = denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
      if (f > best_f) {
        best_f = f;
        best_theta = theta;
      }
    }
    out.thresholds[j] = best_theta;
  }
  return out;
}

PianoRoll apply_thresholds(const AcousticPosteriors& posteriors, const ThresholdSet& thresholds) {
  if (posteriors.probs.cols != thresholds.thresholds.size()) {
    throw dim_error("apply_thresholds: pitch counts differ");
  }
  PianoRoll roll(posteriors.probs.rows, posteriors.probs.cols, posteriors.hop_ms);
  for (std::size_t t = 0; t < roll.frames; ++t) {
    for (std::size_t j = 0; j < roll.pitches; ++j) {
      roll.at(t, j) = posteriors.probs.at(t, j) >= thresholds.thresholds[j] ? 1 : 0;
    }
  }
  return roll;
}

HmmPitchParams fit_hmm(const std::vector<const PianoRoll*>& truths) {
  if (truths.empty()) throw data_error("fit_hmm: no rolls");
  std::size_t n = truths.front()->pitches;
  for (const auto* r : truths) {
    if (r->pitches != n) throw dim_error("fit_hmm: pitch counts differ");
  }
  HmmPitchParams out;
  out.pitches.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double trans_count[2][2] = {{0, 0}, {0, 0}};
    double init_count[2] = {0, 0};
    for (const auto* r : truths) {
      if (r->frames == 0) continue;
      init_count[r->at(0, j) ? 1 : 0] += 1.0;
      for (std::size_t t = 0; t + 1 < r->frames; ++t) {
        trans_count[r->at(t, j) ? 1 : 0][r->at(t + 1, j) ? 1 : 0] += 1.0;
      }
    }
    auto& p = out.pitches[j];
    for (int s = 0; s < 2; ++s) {
      double row_total = trans_count[s][0] + trans_count[s][1] + 2.0;
      p.trans[s][0] = (trans_count[s][0] + 1.0) / row_total;
      p.trans[s][1] = (trans_count[s][1] + 1.0) / row_total;
    }
    double init_total = init_count[0] + init_count[1] + 2.0;
    p.initial[0] = (init_count[0] + 1.0) / init_total;
    p.initial[1] = (init_count[1] + 1.0) / init_total;
  }
  return out;
}

PianoRoll hmm_smooth(const AcousticPosteriors& posteriors, const HmmPitchParams& hmm,
                     const MarginalPrior& prior) {
  std::size_t t_frames = posteriors.probs.rows;
  std::size_t n = posteriors.probs.cols;
  if (hmm.pitches.size() != n || prior.probs.size() != n) {
    throw dim_error("hmm_smooth: pitch counts differ");
  }
  PianoRoll roll(t_frames, n, posteriors.hop_ms);
  if (t_frames == 0) return roll;

  std::vector<double> delta_prev(2), delta_cur(2);
  std::vector<std::uint8_t> back(t_frames * 2);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& p = hmm.pitches[j];
    double log_trans[2][2];
    for (int s = 0; s < 2; ++s) {
      for (int s2 = 0; s2 < 2; ++s2) log_trans[s][s2] = std::log(p.trans[s][s2]);
    }
    auto emission = [&](std::size_t t, int s) {
      double post = clamp_prob(posteriors.probs.at(t, j));
      double obs = s == 1 ? post : 1.0 - post;
      double pri = s == 1 ? prior.probs[j] : 1.0 - prior.probs[j];
      return std::log(obs) - std::log(pri);
    };
    delta_prev[0] = std::log(p.initial[0]) + emission(0, 0);
    delta_prev[1] = std::log(p.initial[1]) + emission(0, 1);
    for (std::size_t t = 1; t < t_frames; ++t) {
      for (int s = 0; s < 2; ++s) {
        // ties prefer the active predecessor
        double from_on = delta_prev[1] + log_trans[1][s];
        double from_off = delta_prev[0] + log_trans[0][s];
        int arg = from_on >= from_off ? 1 : 0;
        delta_cur[s] = (arg == 1 ? from_on : from_off) + emission(t, s);
        back[t * 2 + s] = static_cast<std::uint8_t>(arg);
      }
      std::swap(delta_prev, delta_cur);
    }
    int state = delta_prev[1] >= delta_prev[0] ? 1 : 0;  // final tie prefers active
    for (std::size_t t = t_frames; t-- > 0;) {
      roll.at(t, j) = static_cast<std::uint8_t>(state);
      if (t > 0) state = back[t * 2 + state];
    }
  }
  return roll;
}

namespace {

void check_window(std::size_t window) {
  if (window == 0 || window % 2 == 0) {
    throw config_error("median_filter: window must be odd and >= 1, got " +
                       std::to_string(window));
  }
}

// Median over a symmetric window, radius shrunk near the edges so the sample
// count stays odd.
template <typename Get, typename Set>
void median_columns(std::size_t t_frames, std::size_t n, std::size_t window, Get&& get,
                    Set&& set) {
  std::size_t half = window / 2;
  std::vector<double> buf;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t t = 0; t < t_frames; ++t) {
      std::size_t r = std::min({half, t, t_frames - 1 - t});
      buf.clear();
      for (std::size_t k = t - r; k <= t + r; ++k) buf.push_back(get(k, j));
      std::nth_element(buf.begin(), buf.begin() + static_cast<long>(r), buf.end());
      set(t, j, buf[r]);
    }
  }
}

}  // namespace

PianoRoll median_filter(const PianoRoll& roll, std::size_t window) {
  check_window(window);
  PianoRoll out(roll.frames, roll.pitches, roll.hop_ms);
  median_columns(
      roll.frames, roll.pitches, window,
      [&](std::size_t t, std::size_t j) { return static_cast<double>(roll.at(t, j)); },
      [&](std::size_t t, std::size_t j, double v) { out.at(t, j) = v >= 0.5 ? 1 : 0; });
  return out;
}

AcousticPosteriors median_filter(const AcousticPosteriors& posteriors, std::size_t window) {
  check_window(window);
  AcousticPosteriors out;
  out.hop_ms = posteriors.hop_ms;
  out.probs = Matrix(posteriors.probs.rows, posteriors.probs.cols);
  median_columns(
      posteriors.probs.rows, posteriors.probs.cols, window,
      [&](std::size_t t, std::size_t j) { return posteriors.probs.at(t, j); },
      [&](std::size_t t, std::size_t j, double v) { out.probs.at(t, j) = v; });
  return out;
}

std::vector<NoteEvent> min_duration_prune(const std::vector<NoteEvent>& notes, double min_ms) {
  if (min_ms < 0.0) throw config_error("min_duration_prune: min_ms must be >= 0");
  double min_s = min_ms / 1000.0;
  std::vector<NoteEvent> out;
  out.reserve(notes.size());
  for (const auto& n : notes) {
    if (n.offset_s - n.onset_s >= min_s) out.push_back(n);
  }
  return out;
}

std::vector<NoteEvent> roll_to_notes(const PianoRoll& roll) {
  std::vector<NoteEvent> notes;
  for (std::size_t j = 0; j < roll.pitches; ++j) {
    std::size_t t = 0;
    while (t < roll.frames) {
      if (!roll.at(t, j)) {
        ++t;
        continue;
      }
      std::size_t start = t;
      while (t < roll.frames && roll.at(t, j)) ++t;
      NoteEvent ev;
      ev.pitch = column_to_pitch(static_cast<int>(j));
      ev.onset_s = roll.frame_time_s(start);
      ev.offset_s = roll.frame_time_s(t);
      notes.push_back(ev);
    }
  }
  std::stable_sort(notes.begin(), notes.end(), [](const NoteEvent& a, const NoteEvent& b) {
    if (a.onset_s != b.onset_s) return a.onset_s < b.onset_s;
    return a.pitch < b.pitch;
  });
  return notes;
}

}  // namespace hybridscribe
