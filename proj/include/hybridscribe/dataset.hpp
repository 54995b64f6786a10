#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hybridscribe/pianoroll.hpp"

namespace hybridscribe {

enum class Split { train, valid, test };

std::string split_name(Split s);

struct ManifestRecord {
  std::string audio_path;
  std::string groundtruth_path;
  Split split = Split::train;
  bool has_split = false;  // false until labeled or assigned
};

struct DatasetManifest {
  std::vector<ManifestRecord> records;

  std::vector<ManifestRecord> in_split(Split s) const;
};

// One record per line: `audio_path,midi_path[,split]`. Lines starting with
// '#' and blank lines are skipped. split must be train, valid or test when
// present.
DatasetManifest load_manifest(const std::string& path);
DatasetManifest parse_manifest(const std::string& text, const std::string& origin);
void write_manifest(const std::string& path, const DatasetManifest& manifest);

// Assigns splits to unlabeled records: a seeded shuffle followed by a
// 200:20:50 proportional partition (train count = round(n*200/270), valid =
// round(n*20/270), the rest test). Labeled records keep their labels.
void assign_splits(DatasetManifest& manifest, std::uint64_t seed);

// Frame t is active for a note iff the frame center (t + 0.5)*hop lies in
// [onset, offset). T = ceil(duration_s * 1000 / hop_ms).
PianoRoll notes_to_roll(const std::vector<NoteEvent>& notes, double hop_ms, double duration_s);

}  // namespace hybridscribe
