#include "hybridscribe/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hybridscribe/errors.hpp"
#include "hybridscribe/numeric.hpp"

namespace hybridscribe {

std::string split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
  }
  return "?";
}

std::vector<ManifestRecord> DatasetManifest::in_split(Split s) const {
  std::vector<ManifestRecord> out;
  for (const auto& r : records) {
    if (r.has_split && r.split == s) out.push_back(r);
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Split parse_split(const std::string& name, const std::string& origin, std::size_t line_no) {
  if (name == "train") return Split::train;
  if (name == "valid") return Split::valid;
  if (name == "test") return Split::test;
  throw data_error("manifest " + origin + " line " + std::to_string(line_no) +
                   ": unknown split '" + name + "'");
}

}  // namespace

DatasetManifest parse_manifest(const std::string& text, const std::string& origin) {
  DatasetManifest manifest;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = t.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(trim(t.substr(start)));
        break;
      }
      fields.push_back(trim(t.substr(start, comma - start)));
      start = comma + 1;
    }
    if (fields.size() != 2 && fields.size() != 3) {
      throw data_error("manifest " + origin + " line " + std::to_string(line_no) +
                       ": expected audio,midi[,split], got " + std::to_string(fields.size()) +
                       " fields");
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw data_error("manifest " + origin + " line " + std::to_string(line_no) +
                       ": empty path");
    }
    ManifestRecord rec;
    rec.audio_path = fields[0];
    rec.groundtruth_path = fields[1];
    if (fields.size() == 3 && !fields[2].empty()) {
      rec.split = parse_split(fields[2], origin, line_no);
      rec.has_split = true;
    }
    manifest.records.push_back(std::move(rec));
  }
  if (manifest.records.empty()) {
    throw data_error("manifest " + origin + ": no records");
  }
  return manifest;
}

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open manifest: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path);
}

void write_manifest(const std::string& path, const DatasetManifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw data_error("cannot write manifest: " + path);
  for (const auto& r : manifest.records) {
    out << r.audio_path << "," << r.groundtruth_path;
    if (r.has_split) out << "," << split_name(r.split);
    out << "\n";
  }
}

void assign_splits(DatasetManifest& manifest, std::uint64_t seed) {
  std::vector<std::size_t> unlabeled;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    if (!manifest.records[i].has_split) unlabeled.push_back(i);
  }
  if (unlabeled.empty()) return;

  RngState rng(seed);
  rng.shuffle(unlabeled);
  auto n = static_cast<double>(unlabeled.size());
  auto n_train = static_cast<std::size_t>(std::llround(n * 200.0 / 270.0));
  auto n_valid = static_cast<std::size_t>(std::llround(n * 20.0 / 270.0));
  if (n_train + n_valid > unlabeled.size()) n_valid = unlabeled.size() - n_train;
  for (std::size_t k = 0; k < unlabeled.size(); ++k) {
    auto& rec = manifest.records[unlabeled[k]];
    rec.has_split = true;
    if (k < n_train) {
      rec.split = Split::train;
    } else if (k < n_train + n_valid) {
      rec.split = Split::valid;
    } else {
      rec.split = Split::test;
    }
  }
}

PianoRoll notes_to_roll(const std::vector<NoteEvent>& notes, double hop_ms, double duration_s) {
  if (hop_ms <= 0.0) throw config_error("notes_to_roll: hop_ms must be positive");
  auto t_frames =
      static_cast<std::size_t>(std::max(0.0, std::ceil(duration_s * 1000.0 / hop_ms)));
  PianoRoll roll(t_frames, kNumPitches, hop_ms);
  double hop_s = hop_ms / 1000.0;
  for (const auto& n : notes) {
    if (n.pitch < kLowestPitch || n.pitch > kHighestPitch) continue;
    int col = pitch_to_column(n.pitch);
    // first t with (t + 0.5) * hop >= onset
    auto t_begin = static_cast<long long>(std::ceil(n.onset_s / hop_s - 0.5));
    if (t_begin < 0) t_begin = 0;
    for (auto t = static_cast<std::size_t>(t_begin); t < t_frames; ++t) {
      double center = (static_cast<double>(t) + 0.5) * hop_s;
      if (center >= n.offset_s) break;
      if (center >= n.onset_s) roll.at(t, static_cast<std::size_t>(col)) = 1;
    }
  }
  return roll;
}

}  // namespace hybridscribe
