#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vta/glottis.hpp"
#include "vta/resonance.hpp"
#include "vta/synth_td.hpp"

namespace vta::harness {

struct VowelEntry {
  std::string label;
  std::filesystem::path area;  // required: the 1D methods run on every entry
  std::optional<std::filesystem::path> mesh;
  std::vector<std::filesystem::path> audio;
};

struct CompareConfig {
  std::vector<VowelEntry> vowels;
  double c = 350.0;
  double alpha = 0.0;
  double beta = 0.05;
  double fs = 44100.0;
  double duration = 0.5;   // synthesized seconds per vowel
  int k = 4;               // resonance modes per eigen method
  int n_segments = 20;
  synth::WallKind wall = synth::WallKind::kVibrating;
  synth::WallDynamics wall_dynamics;
  glottis::TwoMassParams glottis;
  bool glottis_feedback = true;
};

// Flat ASCII sections: `[global]`, `[glottis]`, `[wall]`, `[vowel LABEL]`;
// `key = value` lines, `#` comments. Relative paths resolve against base_dir.
CompareConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
CompareConfig load_config(const std::filesystem::path& path);

struct FormantRow {
  std::string vowel;
  Method method;
  double f1 = 0.0, f2 = 0.0;  // Hz, f1 < f2
};

struct FormantTable {
  std::vector<FormantRow> rows;
};

struct CompareReport {
  FormantTable table;
  std::vector<std::string> failures;  // one line per method that could not run
};

// Runs every computable method per vowel: W_R always, H_R and S_R when a mesh
// is present, W_F via the synthesizer, A_F averaged over the audio files.
// File problems abort (throw); per-method solver failures are reported in
// `failures` and the remaining rows still come back.
CompareReport compare(const CompareConfig& cfg, int jobs = 1);

enum class TableFormat { kCsv, kTsv, kPretty };

// Deterministic rendering, sorted by (vowel, method) with the method order
// H_R, W_R, S_R, W_F, A_F; frequencies at 0.1 Hz resolution.
std::string emit(const FormantTable& table, TableFormat format);

// method,mode,f_Hz,re_lambda,im_lambda rows for one resonance set.
std::string emit_resonances(const ResonanceSet& rs);
std::vector<double> parse_resonance_frequencies(std::istream& in);

}  // namespace vta::harness
