#include "hybridscribe/wav.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "hybridscribe/errors.hpp"

namespace hybridscribe {

namespace {

std::uint32_t read_u32le(const std::vector<std::uint8_t>& b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

std::uint16_t read_u16le(const std::vector<std::uint8_t>& b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

void need(const std::vector<std::uint8_t>& b, std::size_t off, std::size_t count,
          const char* what) {
  if (off + count > b.size()) {
    throw parse_error(std::string("wav: truncated ") + what, static_cast<long long>(off));
  }
}

void push_u32le(std::vector<std::uint8_t>& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v & 0xff));
  b.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  b.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  b.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

void push_u16le(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v & 0xff));
  b.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

void push_tag(std::vector<std::uint8_t>& b, const char* tag) {
  b.insert(b.end(), tag, tag + 4);
}

}  // namespace

AudioClip parse_wav(const std::vector<std::uint8_t>& bytes) {
  need(bytes, 0, 12, "RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0) {
    throw parse_error("wav: missing RIFF magic", 0);
  }
  if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw parse_error("wav: missing WAVE tag", 8);
  }

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  bool have_data = false;
  std::size_t data_off = 0;
  std::size_t data_len = 0;

  std::size_t off = 12;
  while (off + 8 <= bytes.size()) {
    char tag[5] = {0};
    std::memcpy(tag, bytes.data() + off, 4);
    std::uint32_t chunk_len = read_u32le(bytes, off + 4);
    std::size_t body = off + 8;
    need(bytes, body, chunk_len, tag);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw parse_error("wav: fmt chunk too short", static_cast<long long>(body));
      std::uint16_t audio_format = read_u16le(bytes, body);
      if (audio_format != 1) {
        throw unsupported_format_error(
            "wav: unsupported audio format tag " + std::to_string(audio_format) +
                " (only PCM is supported)",
            static_cast<long long>(body));
      }
      channels = read_u16le(bytes, body + 2);
      sample_rate = read_u32le(bytes, body + 4);
      bits = read_u16le(bytes, body + 14);
      if (bits != 16) {
        throw unsupported_format_error(
            "wav: unsupported bit depth " + std::to_string(bits) + " (only 16-bit is supported)",
            static_cast<long long>(body + 14));
      }
      if (channels != 1 && channels != 2) {
        throw unsupported_format_error(
            "wav: unsupported channel count " + std::to_string(channels),
            static_cast<long long>(body + 2));
      }
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      have_data = true;
      data_off = body;
      data_len = chunk_len;
    }
    // chunks are word-aligned: odd lengths carry one pad byte
    off = body + chunk_len + (chunk_len & 1);
  }
  if (off != bytes.size() && off < bytes.size()) {
    throw parse_error("wav: trailing bytes do not form a chunk", static_cast<long long>(off));
  }
  if (!have_fmt) throw parse_error("wav: no fmt chunk");
  if (!have_data) throw parse_error("wav: no data chunk");

  AudioClip clip;
  clip.sample_rate = static_cast<double>(sample_rate);
  std::size_t bytes_per_frame = 2 * channels;
  std::size_t n_frames = data_len / bytes_per_frame;
  clip.samples.resize(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    std::size_t p = data_off + i * bytes_per_frame;
    auto s0 = static_cast<std::int16_t>(read_u16le(bytes, p));
    if (channels == 1) {
      clip.samples[i] = static_cast<double>(s0) / 32768.0;
    } else {
      auto s1 = static_cast<std::int16_t>(read_u16le(bytes, p + 2));
      clip.samples[i] =
          (static_cast<double>(s0) + static_cast<double>(s1)) / 2.0 / 32768.0;
    }
  }
  return clip;
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  std::vector<std::uint8_t> out;
  auto n = static_cast<std::uint32_t>(clip.samples.size());
  std::uint32_t data_len = n * 2;
  auto rate = static_cast<std::uint32_t>(std::llround(clip.sample_rate));

  push_tag(out, "RIFF");
  push_u32le(out, 36 + data_len);
  push_tag(out, "WAVE");
  push_tag(out, "fmt ");
  push_u32le(out, 16);
  push_u16le(out, 1);          // PCM
  push_u16le(out, 1);          // mono
  push_u32le(out, rate);
  push_u32le(out, rate * 2);   // byte rate
  push_u16le(out, 2);          // block align
  push_u16le(out, 16);         // bits
  push_tag(out, "data");
  push_u32le(out, data_len);
  for (double s : clip.samples) {
    double c = s < -1.0 ? -1.0 : (s > 1.0 ? 1.0 : s);
    auto q = static_cast<std::int16_t>(std::llround(c * 32767.0));
    push_u16le(out, static_cast<std::uint16_t>(q));
  }
  return out;
}

AudioClip read_wav_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open wav file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_wav(bytes);
}

void write_wav_file(const std::string& path, const AudioClip& clip) {
  auto bytes = encode_wav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error("cannot write wav file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace hybridscribe
