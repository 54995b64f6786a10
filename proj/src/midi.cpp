#include "hybridscribe/midi.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include "hybridscribe/errors.hpp"

namespace hybridscribe {

namespace {

struct Cursor {
  const std::vector<std::uint8_t>* bytes;
  std::size_t pos = 0;

  std::uint8_t u8(const char* what) {
    if (pos >= bytes->size()) {
      throw parse_error(std::string("smf: truncated ") + what, static_cast<long long>(pos));
    }
    return (*bytes)[pos++];
  }

  std::uint16_t u16be(const char* what) {
    std::uint16_t hi = u8(what), lo = u8(what);
    return static_cast<std::uint16_t>((hi << 8) | lo);
  }

  std::uint32_t u32be(const char* what) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | u8(what);
    return v;
  }

  std::uint32_t varint(const char* what) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      std::uint8_t b = u8(what);
      v = (v << 7) | (b & 0x7f);
      if (!(b & 0x80)) return v;
    }
    throw parse_error("smf: variable-length quantity longer than 4 bytes",
                      static_cast<long long>(pos));
  }

  void skip(std::size_t n, const char* what) {
    if (pos + n > bytes->size()) {
      throw parse_error(std::string("smf: truncated ") + what, static_cast<long long>(pos));
    }
    pos += n;
  }

  void expect_tag(const char* tag) {
    if (pos + 4 > bytes->size() || std::memcmp(bytes->data() + pos, tag, 4) != 0) {
      throw parse_error(std::string("smf: expected '") + tag + "' chunk tag",
                        static_cast<long long>(pos));
    }
    pos += 4;
  }
};

struct RawNote {
  std::uint64_t on_tick;
  std::uint64_t off_tick;
  int pitch;
};

struct TempoEvent {
  std::uint64_t tick;
  std::uint32_t usec_per_quarter;
};

// Piecewise-constant tempo map; seconds are accumulated segment by segment.
class TempoMap {
 public:
  TempoMap(std::vector<TempoEvent> events, std::uint16_t ticks_per_quarter)
      : tpq_(ticks_per_quarter) {
    std::stable_sort(events.begin(), events.end(),
                     [](const TempoEvent& a, const TempoEvent& b) { return a.tick < b.tick; });
    // at equal ticks the later event in file order wins
    for (const auto& e : events) {
      if (!events_.empty() && events_.back().tick == e.tick) {
        events_.back() = e;
      } else {
        events_.push_back(e);
      }
    }
  }

  double tick_to_seconds(std::uint64_t tick) const {
    double seconds = 0.0;
    std::uint64_t seg_start = 0;
    std::uint32_t usec_pq = 500000;  // 120 BPM default
    for (const auto& e : events_) {
      if (e.tick >= tick) break;
      seconds += static_cast<double>(tick_delta(seg_start, std::min<std::uint64_t>(e.tick, tick))) *
                 usec_pq * 1e-6 / tpq_;
      seg_start = e.tick;
      usec_pq = e.usec_per_quarter;
    }
    seconds += static_cast<double>(tick_delta(seg_start, tick)) * usec_pq * 1e-6 / tpq_;
    return seconds;
  }

 private:
  static std::uint64_t tick_delta(std::uint64_t a, std::uint64_t b) { return b > a ? b - a : 0; }

  std::vector<TempoEvent> events_;
  double tpq_;
};

}  // namespace

SmfParseResult parse_smf(const std::vector<std::uint8_t>& bytes) {
  Cursor c{&bytes};
  c.expect_tag("MThd");
  std::uint32_t header_len = c.u32be("header length");
  if (header_len < 6) throw parse_error("smf: header chunk too short", 8);
  std::uint16_t format = c.u16be("format");
  std::uint16_t n_tracks = c.u16be("track count");
  std::uint16_t division = c.u16be("division");
  c.skip(header_len - 6, "header");
  if (format > 1) {
    throw unsupported_format_error("smf: format " + std::to_string(format) +
                                   " not supported (only 0 and 1)");
  }
  if (division & 0x8000) {
    throw unsupported_format_error("smf: SMPTE time division not supported");
  }
  if (division == 0) throw parse_error("smf: zero ticks per quarter");

  std::vector<TempoEvent> tempo_events;
  std::vector<RawNote> raw_notes;

  for (std::uint16_t trk = 0; trk < n_tracks; ++trk) {
    c.expect_tag("MTrk");
    std::uint32_t track_len = c.u32be("track length");
    std::size_t track_end = c.pos + track_len;
    if (track_end > bytes.size()) {
      throw parse_error("smf: truncated track", static_cast<long long>(c.pos));
    }

    std::uint64_t tick = 0;
    std::uint8_t running_status = 0;
    // open note slot per (channel, pitch)
    std::map<std::pair<int, int>, std::uint64_t> open;
    bool saw_end = false;

    while (c.pos < track_end && !saw_end) {
      tick += c.varint("delta time");
      std::uint8_t b = c.u8("event");
      std::uint8_t status;
      std::uint8_t first_data;
      if (b & 0x80) {
        status = b;
        if (status < 0xf0) {
          running_status = status;
          first_data = c.u8("data byte");
        } else {
          first_data = 0;
        }
      } else {
        if (running_status == 0) {
          throw parse_error("smf: data byte with no running status",
                            static_cast<long long>(c.pos - 1));
        }
        status = running_status;
        first_data = b;
      }

      std::uint8_t kind = status & 0xf0;
      int channel = status & 0x0f;
      switch (kind) {
        case 0x80:
        case 0x90: {
          int pitch = first_data & 0x7f;
          std::uint8_t velocity = c.u8("velocity") & 0x7f;
          bool is_on = (kind == 0x90) && velocity > 0;
          auto key = std::make_pair(channel, pitch);
          auto it = open.find(key);
          if (is_on) {
            if (it != open.end()) {
              raw_notes.push_back({it->second, tick, pitch});  // retrigger closes
              it->second = tick;
            } else {
              open.emplace(key, tick);
            }
          } else if (it != open.end()) {
            raw_notes.push_back({it->second, tick, pitch});
            open.erase(it);
          }
          break;
        }
        case 0xa0:
        case 0xb0:
        case 0xe0:
          c.u8("data byte");  // second data byte
          break;
        case 0xc0:
        case 0xd0:
          break;  // one data byte, already consumed
        case 0xf0: {
          if (status == 0xff) {
            std::uint8_t type = c.u8("meta type");
            std::uint32_t len = c.varint("meta length");
            if (type == 0x51) {
              if (len != 3) throw parse_error("smf: bad set-tempo length",
                                              static_cast<long long>(c.pos));
              std::uint32_t usec = 0;
              for (int i = 0; i < 3; ++i) usec = (usec << 8) | c.u8("tempo");
              tempo_events.push_back({tick, usec});
            } else if (type == 0x2f) {
              c.skip(len, "end of track");
              saw_end = true;
            } else {
              c.skip(len, "meta event");
            }
          } else if (status == 0xf0 || status == 0xf7) {
            std::uint32_t len = c.varint("sysex length");
            c.skip(len, "sysex");
          } else {
            throw parse_error("smf: unexpected status byte " + std::to_string(status),
                              static_cast<long long>(c.pos - 1));
          }
          break;
        }
        default:
          throw parse_error("smf: bad status byte", static_cast<long long>(c.pos - 1));
      }
    }

    // tick is now the track end time; close anything still open there
    for (const auto& [key, on_tick] : open) {
      raw_notes.push_back({on_tick, tick, key.second});
    }
    c.pos = track_end;
  }

  TempoMap tempo(std::move(tempo_events), division);
  SmfParseResult result;
  for (const auto& rn : raw_notes) {
    if (rn.pitch < kLowestPitch || rn.pitch > kHighestPitch) {
      ++result.dropped_notes;
      continue;
    }
    if (rn.off_tick <= rn.on_tick) {
      ++result.dropped_notes;  // zero-duration
      continue;
    }
    NoteEvent ev;
    ev.pitch = rn.pitch;
    ev.onset_s = tempo.tick_to_seconds(rn.on_tick);
    ev.offset_s = tempo.tick_to_seconds(rn.off_tick);
    result.notes.push_back(ev);
  }
  std::stable_sort(result.notes.begin(), result.notes.end(),
                   [](const NoteEvent& a, const NoteEvent& b) {
                     if (a.onset_s != b.onset_s) return a.onset_s < b.onset_s;
                     if (a.pitch != b.pitch) return a.pitch < b.pitch;
                     return a.offset_s < b.offset_s;
                   });
  return result;
}

std::vector<std::uint8_t> encode_smf(const std::vector<NoteEvent>& notes, double bpm) {
  constexpr std::uint32_t kTpq = 480;
  double ticks_per_second = kTpq * bpm / 60.0;
  auto usec_per_quarter = static_cast<std::uint32_t>(std::llround(60000000.0 / bpm));

  struct Ev {
    std::uint64_t tick;
    int kind;  // 0 = note-off, 1 = note-on
    int pitch;
  };
  std::vector<Ev> evs;
  evs.reserve(notes.size() * 2);
  for (const auto& n : notes) {
    auto on = static_cast<std::uint64_t>(std::llround(n.onset_s * ticks_per_second));
    auto off = static_cast<std::uint64_t>(std::llround(n.offset_s * ticks_per_second));
    if (off <= on) off = on + 1;
    evs.push_back({on, 1, n.pitch});
    evs.push_back({off, 0, n.pitch});
  }
  std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
    if (a.tick != b.tick) return a.tick < b.tick;
    if (a.kind != b.kind) return a.kind < b.kind;  // offs before ons
    return a.pitch < b.pitch;
  });

  std::vector<std::uint8_t> track;
  auto push_varint = [&track](std::uint64_t v) {
    std::uint8_t buf[5];
    int n = 0;
    do {
      buf[n++] = static_cast<std::uint8_t>(v & 0x7f);
      v >>= 7;
    } while (v != 0);
    for (int i = n - 1; i > 0; --i) track.push_back(buf[i] | 0x80);
    track.push_back(buf[0]);
  };

  // tempo at tick 0
  push_varint(0);
  track.push_back(0xff);
  track.push_back(0x51);
  track.push_back(0x03);
  track.push_back(static_cast<std::uint8_t>((usec_per_quarter >> 16) & 0xff));
  track.push_back(static_cast<std::uint8_t>((usec_per_quarter >> 8) & 0xff));
  track.push_back(static_cast<std::uint8_t>(usec_per_quarter & 0xff));

  std::uint64_t prev_tick = 0;
  for (const auto& e : evs) {
    push_varint(e.tick - prev_tick);
    prev_tick = e.tick;
    track.push_back(e.kind == 1 ? 0x90 : 0x80);
    track.push_back(static_cast<std::uint8_t>(e.pitch & 0x7f));
    track.push_back(e.kind == 1 ? 64 : 0);
  }

  // end of track
  push_varint(0);
  track.push_back(0xff);
  track.push_back(0x2f);
  track.push_back(0x00);

  std::vector<std::uint8_t> out;
  auto push_u32be = [&out](std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
  };
  auto push_u16be = [&out](std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
  };
  out.insert(out.end(), {'M', 'T', 'h', 'd'});
  push_u32be(6);
  push_u16be(0);  // format 0
  push_u16be(1);  // one track
  push_u16be(kTpq);
  out.insert(out.end(), {'M', 'T', 'r', 'k'});
  push_u32be(static_cast<std::uint32_t>(track.size()));
  out.insert(out.end(), track.begin(), track.end());
  return out;
}

SmfParseResult read_smf_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open midi file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_smf(bytes);
}

void write_smf_file(const std::string& path, const std::vector<NoteEvent>& notes, double bpm) {
  auto bytes = encode_smf(notes, bpm);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error("cannot write midi file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace hybridscribe
