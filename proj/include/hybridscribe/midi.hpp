#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hybridscribe/pianoroll.hpp"

namespace hybridscribe {

struct SmfParseResult {
  std::vector<NoteEvent> notes;   // sorted by (onset, pitch)
  std::size_t dropped_notes = 0;  // notes outside MIDI 21..108
};

// Standard MIDI File types 0 and 1. Set-tempo meta events from all tracks
// form one global tempo map (default 120 BPM before the first event).
// A note-on with velocity > 0 opens a note; the next note-off or
// velocity-0 note-on with the same pitch on the same track and channel
// closes it. A velocity > 0 note-on arriving while the pitch is open closes
// the open note at that tick and starts a new one. Notes still open at
// end-of-track are closed at the track end. Sustain pedal (CC64) is ignored.
// SMPTE time division is not supported.
SmfParseResult parse_smf(const std::vector<std::uint8_t>& bytes);

// Type 0 file: one track at the given tempo, 480 ticks per quarter,
// velocity-64 note-on / note-off pairs. Note times are quantized with
// round(seconds * ticks_per_second). Simultaneous events are ordered
// note-offs first, then by pitch.
std::vector<std::uint8_t> encode_smf(const std::vector<NoteEvent>& notes, double bpm = 120.0);

SmfParseResult read_smf_file(const std::string& path);
void write_smf_file(const std::string& path, const std::vector<NoteEvent>& notes,
                    double bpm = 120.0);

}  // namespace hybridscribe
