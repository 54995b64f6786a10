#pragma once

#include <vector>

#include "hybridscribe/numeric.hpp"

namespace hybridscribe {

// Mono audio in [-1, 1].
struct AudioClip {
  double sample_rate = 0.0;
  Vector samples;

  double duration_s() const {
    return sample_rate > 0.0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

struct SpectrogramConfig {
  double window_ms = 64.0;
  double hop_ms = 32.0;
  double sample_rate = 16000.0;

  std::size_t window_samples() const;
  std::size_t hop_samples() const;
};

// T x F magnitude frames. frames.at(t, f) is the magnitude of bin f in the
// analysis window starting at sample t*hop.
struct Spectrogram {
  Matrix frames;          // T x F
  double hop_ms = 0.0;
  Vector frame_times_s;   // start time of each frame, t*hop seconds
};

// Per-bin affine normalization fitted on training frames.
struct Standardizer {
  Vector mean;
  Vector stddev;  // floored at kStdFloor
};

inline constexpr double kStdFloor = 1e-8;

// Linear-interpolation resampler. No anti-aliasing filter is applied; the
// kernel is: output sample i is the linear interpolation of the two input
// samples bracketing position i * in_rate / out_rate (clamped at the ends).
// Intended for band-limited desk-scale material.
AudioClip resample(const AudioClip& clip, double target_rate);

// Magnitude STFT with a periodic Hann window, w[n] = 0.5*(1 - cos(2*pi*n/L)).
// FFT size equals the window length L; F = L/2 + 1 bins. Frame t covers
// samples [t*hop, t*hop + L). Frame count: 0 if len < hop; one zero-padded
// frame if hop <= len < L; otherwise floor((len - L)/hop) + 1 full frames
// (the tail shorter than a window is dropped).
Spectrogram stft_magnitude(const AudioClip& clip, const SpectrogramConfig& config);

// Per-bin mean and population (divide-by-N) standard deviation over all
// frames of all inputs; stddev floored at kStdFloor.
Standardizer fit_standardizer(const std::vector<Spectrogram>& training);

// out[t,f] = (in[t,f] - mean[f]) / stddev[f]
Spectrogram apply_standardizer(const Standardizer& s, const Spectrogram& spec);

// Complex DFT used by stft_magnitude and by test oracles: radix-2 FFT for
// power-of-two sizes, direct O(n^2) evaluation otherwise.
void dft_magnitude(const Vector& windowed, Vector& out_bins);

}  // namespace hybridscribe
