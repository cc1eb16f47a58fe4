#include "vta/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

#include "vta/errors.hpp"
#include "vta/formant.hpp"
#include "vta/geometry.hpp"
#include "vta/helmholtz3d.hpp"
#include "vta/wav.hpp"
#include "vta/webster1d.hpp"

namespace vta::harness {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key, int lineno) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("config line " + std::to_string(lineno) + ": key `" + key +
                     "` expects a number, got `" + v + "`");
  }
}

bool to_bool(const std::string& v, const std::string& key, int lineno) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ParseError("config line " + std::to_string(lineno) + ": key `" + key +
                   "` expects on/off");
}

}  // namespace

CompareConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  CompareConfig cfg;
  std::string line;
  int lineno = 0;
  enum class Section { kNone, kGlobal, kGlottis, kWall, kVowel } section = Section::kNone;
  VowelEntry* vowel = nullptr;

  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    std::string s = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']')
        throw ParseError("config line " + std::to_string(lineno) + ": unterminated section");
      std::string name = trim(s.substr(1, s.size() - 2));
      if (name == "global") {
        section = Section::kGlobal;
      } else if (name == "glottis") {
        section = Section::kGlottis;
      } else if (name == "wall") {
        section = Section::kWall;
      } else if (name.rfind("vowel", 0) == 0) {
        std::string label = trim(name.substr(5));
        if (label.empty())
          throw ParseError("config line " + std::to_string(lineno) + ": vowel needs a label");
        for (const auto& v : cfg.vowels)
          if (v.label == label)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": duplicate vowel label `" + label + "`");
        cfg.vowels.push_back(VowelEntry{label, {}, std::nullopt, {}});
        vowel = &cfg.vowels.back();
        section = Section::kVowel;
      } else {
        throw ParseError("config line " + std::to_string(lineno) + ": unknown section `" +
                         name + "`");
      }
      continue;
    }

    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected `key = value`");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError("config line " + std::to_string(lineno) + ": empty key or value");

    auto unknown = [&]() -> ParseError {
      return ParseError("config line " + std::to_string(lineno) + ": unknown key `" + key +
                        "`");
    };

    switch (section) {
      case Section::kNone:
        throw ParseError("config line " + std::to_string(lineno) + ": key before any section");
      case Section::kGlobal:
        if (key == "c") cfg.c = to_double(value, key, lineno);
        else if (key == "alpha") cfg.alpha = to_double(value, key, lineno);
        else if (key == "beta") cfg.beta = to_double(value, key, lineno);
        else if (key == "fs") cfg.fs = to_double(value, key, lineno);
        else if (key == "duration") cfg.duration = to_double(value, key, lineno);
        else if (key == "k") cfg.k = static_cast<int>(to_double(value, key, lineno));
        else if (key == "n_segments") cfg.n_segments = static_cast<int>(to_double(value, key, lineno));
        else if (key == "walls") {
          if (value == "rigid") cfg.wall = synth::WallKind::kRigid;
          else if (value == "vibrating") cfg.wall = synth::WallKind::kVibrating;
          else throw ParseError("config line " + std::to_string(lineno) +
                                ": walls must be rigid or vibrating");
        } else throw unknown();
        break;
      case Section::kGlottis: {
        auto& g = cfg.glottis;
        if (key == "m1") g.m1 = to_double(value, key, lineno);
        else if (key == "m2") g.m2 = to_double(value, key, lineno);
        else if (key == "k1") g.k1 = to_double(value, key, lineno);
        else if (key == "k2") g.k2 = to_double(value, key, lineno);
        else if (key == "kc") g.kc = to_double(value, key, lineno);
        else if (key == "zeta1") g.zeta1 = to_double(value, key, lineno);
        else if (key == "zeta2") g.zeta2 = to_double(value, key, lineno);
        else if (key == "rest_area1") g.rest_area1 = to_double(value, key, lineno);
        else if (key == "rest_area2") g.rest_area2 = to_double(value, key, lineno);
        else if (key == "fold_length") g.fold_length = to_double(value, key, lineno);
        else if (key == "thickness1") g.thickness1 = to_double(value, key, lineno);
        else if (key == "thickness2") g.thickness2 = to_double(value, key, lineno);
        else if (key == "p_sub") g.p_sub = to_double(value, key, lineno);
        else if (key == "collision_stiffness") g.collision_stiffness = to_double(value, key, lineno);
        else if (key == "collision_zeta") g.collision_zeta = to_double(value, key, lineno);
        else if (key == "rho0") g.rho0 = to_double(value, key, lineno);
        else if (key == "mu") g.mu = to_double(value, key, lineno);
        else if (key == "feedback") cfg.glottis_feedback = to_bool(value, key, lineno);
        else throw unknown();
        break;
      }
      case Section::kWall:
        if (key == "m") cfg.wall_dynamics.m = to_double(value, key, lineno);
        else if (key == "b") cfg.wall_dynamics.b = to_double(value, key, lineno);
        else if (key == "k") cfg.wall_dynamics.k = to_double(value, key, lineno);
        else throw unknown();
        break;
      case Section::kVowel:
        if (key == "area") vowel->area = resolve(value);
        else if (key == "mesh") vowel->mesh = resolve(value);
        else if (key == "audio") vowel->audio.push_back(resolve(value));
        else throw unknown();
        break;
    }
  }

  if (cfg.vowels.empty()) throw ValidationError("config: no vowel entries");
  for (const auto& v : cfg.vowels)
    if (v.area.empty())
      throw ValidationError("config: vowel `" + v.label + "` has no area function");
  return cfg;
}

CompareConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path.string());
  try {
    return parse_config(in, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

namespace {

struct LoadedVowel {
  const VowelEntry* entry;
  geom::AreaFunction af;
  std::optional<geom::TetMesh> mesh;
  std::vector<formant::Waveform> audio;
};

struct VowelResult {
  std::vector<FormantRow> rows;
  std::vector<std::string> failures;
};

VowelResult run_vowel(const LoadedVowel& lv, const CompareConfig& cfg) {
  VowelResult out;
  const std::string& label = lv.entry->label;
  auto note = [&](const char* method, const std::exception& e) {
    out.failures.push_back("vowel " + label + " " + method + ": " + e.what());
  };

  webster::WebsterParams wp;
  wp.c = cfg.c;
  wp.alpha = cfg.alpha;
  wp.beta = cfg.beta;
  const int k = std::max(cfg.k, 3);

  std::optional<ResonanceSet> href;
  if (lv.mesh) {
    helm3d::HelmholtzParams hp;
    hp.c = cfg.c;
    hp.alpha = cfg.alpha;
    hp.beta = cfg.beta;
    try {
      href = helm3d::resonances(*lv.mesh, hp, k);
      auto [f1, f2] = first_two(*href);
      out.rows.push_back({label, Method::kHelmholtz, f1, f2});
    } catch (const std::exception& e) {
      note("H_R", e);
    }
  }

  try {
    auto wr = webster::webster_resonances(lv.af, wp, k);
    auto [f1, f2] = first_two(wr);
    out.rows.push_back({label, Method::kWebster, f1, f2});
  } catch (const std::exception& e) {
    note("W_R", e);
  }

  if (href) {
    try {
      auto sr = webster::scale_to_helmholtz(lv.af, *href, wp);
      auto [f1, f2] = first_two(sr.scaled);
      out.rows.push_back({label, Method::kScaledWebster, f1, f2});
    } catch (const std::exception& e) {
      note("S_R", e);
    }
  } else if (lv.mesh) {
    out.failures.push_back("vowel " + label + " S_R: skipped, no Helmholtz reference");
  }

  try {
    synth::TubeParams tp;
    tp.c = cfg.c;
    tp.fs = cfg.fs;
    tp.n_segments = cfg.n_segments;
    tp.wall = cfg.wall;
    tp.wall_dynamics = cfg.wall_dynamics;
    auto gp = cfg.glottis;
    gp.c = cfg.c;
    synth::TwoMassSource source(gp, cfg.glottis_feedback);
    auto w = synth::simulate(lv.af, source, tp, cfg.duration);
    auto est = formant::formants_from_wave(w, 2);
    out.rows.push_back({label, Method::kWebsterFormant, est.frequencies[0],
                        est.frequencies[1]});
  } catch (const std::exception& e) {
    note("W_F", e);
  }

  if (!lv.audio.empty()) {
    try {
      std::vector<formant::FormantEstimate> ests;
      for (const auto& w : lv.audio)
        ests.push_back(formant::formants_from_wave(w, 2));
      auto avg = formant::average_formants(ests);
      out.rows.push_back({label, Method::kAudioFormant, avg.frequencies[0],
                          avg.frequencies[1]});
    } catch (const std::exception& e) {
      note("A_F", e);
    }
  }
  return out;
}

}  // namespace

CompareReport compare(const CompareConfig& cfg, int jobs) {
  // load every referenced file first; a missing file aborts the whole run
  std::vector<LoadedVowel> loaded;
  loaded.reserve(cfg.vowels.size());
  for (const auto& entry : cfg.vowels) {
    LoadedVowel lv;
    lv.entry = &entry;
    lv.af = geom::load_area_function(entry.area);
    if (entry.mesh) lv.mesh = geom::load_mesh(*entry.mesh);
    for (const auto& path : entry.audio) lv.audio.push_back(wav::read_wav(path));
    loaded.push_back(std::move(lv));
  }

  std::vector<VowelResult> results(loaded.size());
  if (jobs > 1) {
    std::vector<std::future<VowelResult>> futures;
    futures.reserve(loaded.size());
    for (const auto& lv : loaded)
      futures.push_back(std::async(std::launch::async,
                                   [&lv, &cfg]() { return run_vowel(lv, cfg); }));
    for (size_t i = 0; i < futures.size(); ++i) results[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < loaded.size(); ++i) results[i] = run_vowel(loaded[i], cfg);
  }

  CompareReport report;
  for (const auto& r : results) {
    report.table.rows.insert(report.table.rows.end(), r.rows.begin(), r.rows.end());
    report.failures.insert(report.failures.end(), r.failures.begin(), r.failures.end());
  }
  return report;
}

namespace {

int method_rank(Method m) {
  switch (m) {
    case Method::kHelmholtz: return 0;
    case Method::kWebster: return 1;
    case Method::kScaledWebster: return 2;
    case Method::kWebsterFormant: return 3;
    case Method::kAudioFormant: return 4;
  }
  return 9;
}

std::vector<FormantRow> sorted_rows(const FormantTable& table) {
  auto rows = table.rows;
  std::sort(rows.begin(), rows.end(), [](const FormantRow& a, const FormantRow& b) {
    if (a.vowel != b.vowel) return a.vowel < b.vowel;
    return method_rank(a.method) < method_rank(b.method);
  });
  return rows;
}

}  // namespace

std::string emit(const FormantTable& table, TableFormat format) {
  auto rows = sorted_rows(table);
  std::string out;
  char buf[160];
  switch (format) {
    case TableFormat::kCsv:
    case TableFormat::kTsv: {
      const char sep = format == TableFormat::kCsv ? ',' : '\t';
      std::snprintf(buf, sizeof(buf), "vowel%cmethod%cF1_Hz%cF2_Hz\n", sep, sep, sep);
      out += buf;
      for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s%c%s%c%.1f%c%.1f\n", r.vowel.c_str(), sep,
                      method_name(r.method), sep, r.f1, sep, r.f2);
        out += buf;
      }
      break;
    }
    case TableFormat::kPretty: {
      std::snprintf(buf, sizeof(buf), "%-10s %-6s %10s %10s\n", "vowel", "method", "F1_Hz",
                    "F2_Hz");
      out += buf;
      for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-10s %-6s %10.1f %10.1f\n", r.vowel.c_str(),
                      method_name(r.method), r.f1, r.f2);
        out += buf;
      }
      break;
    }
  }
  return out;
}

std::string emit_resonances(const ResonanceSet& rs) {
  std::string out = "method,mode,f_Hz,re_lambda,im_lambda\n";
  char buf[200];
  for (size_t i = 0; i < rs.modes.size(); ++i) {
    const auto& m = rs.modes[i];
    std::snprintf(buf, sizeof(buf), "%s,%zu,%.10g,%.10g,%.10g\n", method_name(rs.method),
                  i + 1, m.frequency, m.lambda.real(), m.lambda.imag());
    out += buf;
  }
  return out;
}

std::vector<double> parse_resonance_frequencies(std::istream& in) {
  std::vector<double> fs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s.rfind("method,", 0) == 0 || s.front() == '#') continue;
    // method,mode,f_Hz,...
    std::stringstream row(s);
    std::string method, mode, f;
    if (!std::getline(row, method, ',') || !std::getline(row, mode, ',') ||
        !std::getline(row, f, ','))
      throw ParseError("resonance csv line " + std::to_string(lineno) +
                       ": expected `method,mode,f_Hz,...`");
    fs.push_back(to_double(trim(f), "f_Hz", lineno));
  }
  if (fs.empty()) throw ParseError("resonance csv: no rows");
  return fs;
}

}  // namespace vta::harness
