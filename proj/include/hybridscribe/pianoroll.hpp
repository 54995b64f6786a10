#pragma once

#include <cstdint>
#include <vector>

namespace hybridscribe {

// 88 piano keys, MIDI note numbers 21 (A0) through 108 (C8).
inline constexpr int kLowestPitch = 21;
inline constexpr int kHighestPitch = 108;
inline constexpr int kNumPitches = 88;

inline int pitch_to_column(int midi_pitch) { return midi_pitch - kLowestPitch; }
inline int column_to_pitch(int column) { return column + kLowestPitch; }

struct NoteEvent {
  int pitch = 0;        // MIDI note number, 21..108
  double onset_s = 0.0;
  double offset_s = 0.0;

  bool operator==(const NoteEvent&) const = default;
};

// Binary time x pitch matrix; frames[t][j] = 1 means column j (MIDI pitch
// 21+j) sounds in frame t.
struct PianoRoll {
  std::size_t frames = 0;
  std::size_t pitches = 0;
  double hop_ms = 0.0;
  std::vector<std::uint8_t> cells;  // row-major, frames*pitches entries, 0/1

  PianoRoll() = default;
  PianoRoll(std::size_t t, std::size_t n, double hop)
      : frames(t), pitches(n), hop_ms(hop), cells(t * n, 0) {}

  std::uint8_t& at(std::size_t t, std::size_t j) { return cells[t * pitches + j]; }
  std::uint8_t at(std::size_t t, std::size_t j) const { return cells[t * pitches + j]; }

  double frame_time_s(std::size_t t) const { return static_cast<double>(t) * hop_ms / 1000.0; }

  bool operator==(const PianoRoll&) const = default;
};

}  // namespace hybridscribe
