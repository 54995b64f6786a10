#include "hybridscribe/signal.hpp"

#include <cmath>
#include <complex>

namespace hybridscribe {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative in-place radix-2 Cooley-Tukey.
void fft_pow2(std::vector<std::complex<double>>& a) {
  std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * kPi / static_cast<double>(len);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

std::size_t SpectrogramConfig::window_samples() const {
  return static_cast<std::size_t>(std::llround(window_ms * sample_rate / 1000.0));
}

std::size_t SpectrogramConfig::hop_samples() const {
  return static_cast<std::size_t>(std::llround(hop_ms * sample_rate / 1000.0));
}

AudioClip resample(const AudioClip& clip, double target_rate) {
  if (target_rate <= 0.0) throw config_error("resample: target rate must be positive");
  AudioClip out;
  out.sample_rate = target_rate;
  if (clip.samples.empty()) return out;
  if (clip.sample_rate == target_rate) {
    out.samples = clip.samples;
    return out;
  }
  std::size_t n_in = clip.samples.size();
  auto n_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_in) * target_rate / clip.sample_rate));
  if (n_out == 0) n_out = 1;
  out.samples.resize(n_out);
  double step = clip.sample_rate / target_rate;
  for (std::size_t i = 0; i < n_out; ++i) {
    double pos = static_cast<double>(i) * step;
    auto lo = static_cast<std::size_t>(pos);
    if (lo >= n_in - 1) {
      out.samples[i] = clip.samples[n_in - 1];
      continue;
    }
    double frac = pos - static_cast<double>(lo);
    out.samples[i] = clip.samples[lo] * (1.0 - frac) + clip.samples[lo + 1] * frac;
  }
  return out;
}

void dft_magnitude(const Vector& windowed, Vector& out_bins) {
  std::size_t n = windowed.size();
  std::size_t n_bins = n / 2 + 1;
  out_bins.assign(n_bins, 0.0);
  if (n == 0) return;
  if (is_pow2(n)) {
    std::vector<std::complex<double>> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = std::complex<double>(windowed[i], 0.0);
    fft_pow2(buf);
    for (std::size_t k = 0; k < n_bins; ++k) out_bins[k] = std::abs(buf[k]);
    return;
  }
  for (std::size_t k = 0; k < n_bins; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double ang = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(i) /
                   static_cast<double>(n);
      re += windowed[i] * std::cos(ang);
      im += windowed[i] * std::sin(ang);
    }
    out_bins[k] = std::sqrt(re * re + im * im);
  }
}

Spectrogram stft_magnitude(const AudioClip& clip, const SpectrogramConfig& config) {
  if (clip.sample_rate != config.sample_rate) {
    throw config_error("stft_magnitude: clip rate " + std::to_string(clip.sample_rate) +
                       " != config rate " + std::to_string(config.sample_rate));
  }
  std::size_t window = config.window_samples();
  std::size_t hop = config.hop_samples();
  if (hop == 0 || window < hop) {
    throw config_error("stft_magnitude: need window_ms >= hop_ms > 0");
  }

  std::size_t len = clip.samples.size();
  std::size_t n_frames = 0;
  if (len >= window) {
    n_frames = (len - window) / hop + 1;
  } else if (len >= hop) {
    n_frames = 1;  // single zero-padded frame
  }

  std::size_t n_bins = window / 2 + 1;
  Spectrogram spec;
  spec.hop_ms = config.hop_ms;
  spec.frames = Matrix(n_frames, n_bins);
  spec.frame_times_s.resize(n_frames);

  Vector hann(window);
  for (std::size_t i = 0; i < window; ++i) {
    hann[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                                    static_cast<double>(window)));
  }

  Vector buf(window);
  Vector bins;
  for (std::size_t t = 0; t < n_frames; ++t) {
    std::size_t start = t * hop;
    for (std::size_t i = 0; i < window; ++i) {
      double s = (start + i < len) ? clip.samples[start + i] : 0.0;
      buf[i] = s * hann[i];
    }
    dft_magnitude(buf, bins);
    for (std::size_t k = 0; k < n_bins; ++k) spec.frames.at(t, k) = bins[k];
    spec.frame_times_s[t] = static_cast<double>(start) / config.sample_rate;
  }
  return spec;
}

Standardizer fit_standardizer(const std::vector<Spectrogram>& training) {
  std::size_t total_frames = 0;
  std::size_t n_bins = 0;
  for (const auto& s : training) {
    total_frames += s.frames.rows;
    if (s.frames.rows > 0) {
      if (n_bins == 0) n_bins = s.frames.cols;
      if (s.frames.cols != n_bins) {
        throw dim_error("fit_standardizer: inconsistent bin counts");
      }
    }
  }
  if (total_frames < 2) {
    throw data_error("fit_standardizer: need at least 2 frames, got " +
                     std::to_string(total_frames));
  }

  Standardizer out;
  out.mean.assign(n_bins, 0.0);
  out.stddev.assign(n_bins, 0.0);
  for (const auto& s : training) {
    for (std::size_t t = 0; t < s.frames.rows; ++t) {
      for (std::size_t f = 0; f < n_bins; ++f) out.mean[f] += s.frames.at(t, f);
    }
  }
  for (std::size_t f = 0; f < n_bins; ++f) out.mean[f] /= static_cast<double>(total_frames);
  for (const auto& s : training) {
    for (std::size_t t = 0; t < s.frames.rows; ++t) {
      for (std::size_t f = 0; f < n_bins; ++f) {
        double d = s.frames.at(t, f) - out.mean[f];
        out.stddev[f] += d * d;
      }
    }
  }
  for (std::size_t f = 0; f < n_bins; ++f) {
    double v = std::sqrt(out.stddev[f] / static_cast<double>(total_frames));
    out.stddev[f] = v < kStdFloor ? kStdFloor : v;
  }
  return out;
}

Spectrogram apply_standardizer(const Standardizer& s, const Spectrogram& spec) {
  if (spec.frames.rows > 0 && spec.frames.cols != s.mean.size()) {
    throw dim_error("apply_standardizer: spectrogram has " + std::to_string(spec.frames.cols) +
                    " bins, standardizer has " + std::to_string(s.mean.size()));
  }
  Spectrogram out = spec;
  for (std::size_t t = 0; t < out.frames.rows; ++t) {
    for (std::size_t f = 0; f < out.frames.cols; ++f) {
      out.frames.at(t, f) = (out.frames.at(t, f) - s.mean[f]) / s.stddev[f];
    }
  }
  return out;
}

}  // namespace hybridscribe
