#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hybridscribe/signal.hpp"

namespace hybridscribe {

// RIFF/WAVE, PCM 16-bit little-endian, 1 or 2 channels. Samples are scaled
// to [-1, 1] by dividing by 32768; stereo is averaged to mono before
// scaling. Unknown chunks are skipped.
AudioClip parse_wav(const std::vector<std::uint8_t>& bytes);

// 16-bit PCM mono. Samples are clamped to [-1, 1] and quantized with
// round(s * 32767).
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);

AudioClip read_wav_file(const std::string& path);
void write_wav_file(const std::string& path, const AudioClip& clip);

}  // namespace hybridscribe
