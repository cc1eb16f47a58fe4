// vta: vocal tract acoustics toolbox. Computes vowel resonances three ways
// (3D FEM Helmholtz, 1D horn eigenanalysis raw and length-scaled, time-domain
// synthesis), extracts formants from audio, and tabulates the comparison.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vta/errors.hpp"
#include "vta/formant.hpp"
#include "vta/geometry.hpp"
#include "vta/harness.hpp"
#include "vta/helmholtz3d.hpp"
#include "vta/synth_td.hpp"
#include "vta/wav.hpp"
#include "vta/webster1d.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw vta::ParseError("cannot write output file: " + out_path);
  out << text;
}

vta::harness::TableFormat parse_format(const std::string& f) {
  if (f == "csv") return vta::harness::TableFormat::kCsv;
  if (f == "tsv") return vta::harness::TableFormat::kTsv;
  if (f == "pretty") return vta::harness::TableFormat::kPretty;
  throw vta::ParseError("unknown format `" + f + "` (csv, tsv, pretty)");
}

std::string describe_mesh(const vta::geom::TetMesh& mesh) {
  using vta::geom::BoundaryTag;
  std::ostringstream out;
  double lo[3] = {1e300, 1e300, 1e300}, hi[3] = {-1e300, -1e300, -1e300};
  for (const auto& v : mesh.vertices) {
    double c[3] = {v.x, v.y, v.z};
    for (int d = 0; d < 3; ++d) {
      lo[d] = std::min(lo[d], c[d]);
      hi[d] = std::max(hi[d], c[d]);
    }
  }
  char buf[256];
  out << "vertices " << mesh.vertices.size() << "\n";
  out << "tets " << mesh.tets.size() << "\n";
  std::snprintf(buf, sizeof(buf), "boundary %zu (gamma1 %d, gamma2 %d, gamma3 %d)\n",
                mesh.boundary.size(), mesh.tag_count(BoundaryTag::kMouth),
                mesh.tag_count(BoundaryTag::kWall), mesh.tag_count(BoundaryTag::kGlottis));
  out << buf;
  std::snprintf(buf, sizeof(buf), "volume %.6e m^3\n", mesh.volume());
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "areas gamma1 %.6e, gamma2 %.6e, gamma3 %.6e m^2\n",
                mesh.tag_area(BoundaryTag::kMouth), mesh.tag_area(BoundaryTag::kWall),
                mesh.tag_area(BoundaryTag::kGlottis));
  out << buf;
  std::snprintf(buf, sizeof(buf), "bbox [%.6g, %.6g] x [%.6g, %.6g] x [%.6g, %.6g] m\n",
                lo[0], hi[0], lo[1], hi[1], lo[2], hi[2]);
  out << buf;
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vocal tract acoustics toolbox"};
  app.require_subcommand(1);

  std::string out_path;

  // ---- make-tube
  auto* make_tube = app.add_subcommand("make-tube", "generate an analytic area function");
  std::string tube_shape = "cylinder";
  double tube_length = 0.175, tube_area = 3e-4;
  int tube_segments = 20;
  make_tube->add_option("--shape", tube_shape, "cylinder | cosine-horn");
  make_tube->add_option("--L", tube_length, "length, m");
  make_tube->add_option("--A0", tube_area, "base area, m^2");
  make_tube->add_option("-n,--segments", tube_segments, "segment count");
  make_tube->add_option("--out", out_path, "output path (default stdout)");

  // ---- make-cylinder-mesh
  auto* make_cyl = app.add_subcommand("make-cylinder-mesh", "generate a tagged cylinder mesh");
  double cyl_length = 0.175, cyl_radius = 0.01, cyl_h = 0.005;
  make_cyl->add_option("--L", cyl_length, "length, m");
  make_cyl->add_option("--r", cyl_radius, "radius, m");
  make_cyl->add_option("--target-h", cyl_h, "target element size, m");
  make_cyl->add_option("--out", out_path, "output path (default stdout)");

  // ---- mesh-info
  auto* mesh_info = app.add_subcommand("mesh-info", "validate a mesh and print a summary");
  std::string mesh_path;
  mesh_info->add_option("--mesh", mesh_path, "tagged tet mesh file")->required();
  mesh_info->add_option("--out", out_path, "output path (default stdout)");

  // ---- shared eigen options
  double c = 350.0, alpha = 0.0, beta = 0.05, shift_hz = 300.0;
  int k = 4;
  std::string format = "csv";

  // ---- helmholtz
  auto* helmholtz = app.add_subcommand("helmholtz", "3D Helmholtz resonances of a mesh");
  helmholtz->add_option("--mesh", mesh_path, "tagged tet mesh file")->required();
  helmholtz->add_option("--c", c, "sound speed, m/s");
  helmholtz->add_option("--alpha", alpha, "wall admittance");
  helmholtz->add_option("--beta", beta, "glottal plane admittance");
  helmholtz->add_option("-k", k, "modes to report");
  helmholtz->add_option("--shift-hz", shift_hz, "eigensolver shift, Hz");
  helmholtz->add_option("--format", format, "csv | pretty");
  helmholtz->add_option("--out", out_path, "output path (default stdout)");

  // ---- webster-eigen
  auto* webster_eigen = app.add_subcommand("webster-eigen", "1D horn resonances of an area function");
  std::string area_path;
  int elements = 200;
  webster_eigen->add_option("--area", area_path, "area function file")->required();
  webster_eigen->add_option("--c", c, "sound speed, m/s");
  webster_eigen->add_option("--alpha", alpha, "wall admittance");
  webster_eigen->add_option("--beta", beta, "glottal admittance");
  webster_eigen->add_option("-k", k, "modes to report");
  webster_eigen->add_option("--elements", elements, "minimum element count");
  webster_eigen->add_option("--shift-hz", shift_hz, "eigensolver shift, Hz");
  webster_eigen->add_option("--format", format, "csv | pretty");
  webster_eigen->add_option("--out", out_path, "output path (default stdout)");

  // ---- webster-scale
  auto* webster_scale = app.add_subcommand(
      "webster-scale", "length-scale an area function onto reference resonances");
  std::string ref_path;
  webster_scale->add_option("--area", area_path, "area function file")->required();
  webster_scale->add_option("--ref-resonances", ref_path, "reference resonance csv")
      ->required();
  webster_scale->add_option("--c", c, "sound speed, m/s");
  webster_scale->add_option("--alpha", alpha, "wall admittance");
  webster_scale->add_option("--beta", beta, "glottal admittance");
  webster_scale->add_option("--out", out_path, "output path (default stdout)");

  // ---- synth
  auto* synth_cmd = app.add_subcommand("synth", "time-domain vowel synthesis to WAV");
  double duration = 1.0, fs = 44100.0, p_sub = 800.0, d0 = 1.6, D0 = 0.002;
  double impulse_amplitude = 1e-4;
  int n_segments = 20;
  std::string walls = "vibrating", source_kind = "twomass", signal = "derivative";
  bool no_feedback = false;
  synth_cmd->add_option("--area", area_path, "area function file")->required();
  synth_cmd->add_option("--duration", duration, "seconds");
  synth_cmd->add_option("--fs", fs, "sample rate, Hz");
  synth_cmd->add_option("--walls", walls, "rigid | vibrating");
  synth_cmd->add_option("--source", source_kind, "twomass | impulse");
  synth_cmd->add_option("--p-sub", p_sub, "subglottal pressure, Pa");
  synth_cmd->add_option("--d0", d0, "wall loss coefficient, m/s");
  synth_cmd->add_option("--D0", D0, "diffusion coefficient, m^3/s");
  synth_cmd->add_option("-n,--segments", n_segments, "tube segments");
  synth_cmd->add_option("--c", c, "sound speed, m/s");
  synth_cmd->add_option("--signal", signal, "derivative | flow (lip output)");
  synth_cmd->add_flag("--no-feedback", no_feedback, "decouple folds from tract pressure");
  synth_cmd->add_option("--impulse-amplitude", impulse_amplitude, "m^3/s");
  synth_cmd->add_option("--out", out_path, "output wav path (default stdout)");

  // ---- formants
  auto* formants_cmd = app.add_subcommand("formants", "LPC formants of a wav file");
  std::string wav_path;
  int n_formants = 2;
  formants_cmd->add_option("--wav", wav_path, "PCM16 mono wav")->required();
  formants_cmd->add_option("-n", n_formants, "number of formants");
  formants_cmd->add_option("--format", format, "csv | pretty");
  formants_cmd->add_option("--out", out_path, "output path (default stdout)");

  // ---- compare
  auto* compare_cmd = app.add_subcommand("compare", "full per-vowel method comparison");
  std::string config_path;
  int jobs = 1;
  compare_cmd->add_option("--config", config_path, "comparison config file")->required();
  compare_cmd->add_option("--format", format, "csv | tsv | pretty");
  compare_cmd->add_option("--jobs", jobs, "vowels processed concurrently");
  compare_cmd->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*make_tube) {
      vta::geom::TubeShape shape;
      if (tube_shape == "cylinder") shape = vta::geom::TubeShape::kCylinder;
      else if (tube_shape == "cosine-horn") shape = vta::geom::TubeShape::kCosineHorn;
      else throw vta::ParseError("unknown shape `" + tube_shape + "`");
      auto af = vta::geom::make_tube(shape, tube_length, tube_area, tube_segments);
      std::ostringstream buf;
      vta::geom::write_area_function(af, buf);
      write_output(buf.str(), out_path);
    } else if (*make_cyl) {
      auto mesh = vta::geom::make_cylinder_mesh(cyl_length, cyl_radius, cyl_h);
      std::ostringstream buf;
      vta::geom::write_mesh(mesh, buf);
      write_output(buf.str(), out_path);
    } else if (*mesh_info) {
      write_output(describe_mesh(vta::geom::load_mesh(mesh_path)), out_path);
    } else if (*helmholtz) {
      vta::helm3d::HelmholtzParams params{c, alpha, beta, shift_hz};
      auto rs = vta::helm3d::resonances(vta::geom::load_mesh(mesh_path), params, k);
      write_output(vta::harness::emit_resonances(rs), out_path);
    } else if (*webster_eigen) {
      vta::webster::WebsterParams params;
      params.c = c;
      params.alpha = alpha;
      params.beta = beta;
      params.shift_hz = shift_hz;
      params.min_elements = elements;
      auto rs = vta::webster::webster_resonances(
          vta::geom::load_area_function(area_path), params, k);
      write_output(vta::harness::emit_resonances(rs), out_path);
    } else if (*webster_scale) {
      vta::webster::WebsterParams params;
      params.c = c;
      params.alpha = alpha;
      params.beta = beta;
      std::ifstream ref(ref_path);
      if (!ref) throw vta::ParseError("cannot open reference csv: " + ref_path);
      auto freqs = vta::harness::parse_resonance_frequencies(ref);
      vta::ResonanceSet href;
      href.method = vta::Method::kHelmholtz;
      for (double f : freqs)
        href.modes.push_back({{0.0, 2.0 * 3.14159265358979323846 * f}, f});
      auto result = vta::webster::scale_to_helmholtz(
          vta::geom::load_area_function(area_path), href, params);
      char gamma_line[64];
      std::snprintf(gamma_line, sizeof(gamma_line), "# gamma = %.8f\n", result.gamma);
      write_output(std::string(gamma_line) + vta::harness::emit_resonances(result.scaled),
                   out_path);
    } else if (*synth_cmd) {
      vta::synth::TubeParams params;
      params.c = c;
      params.fs = fs;
      params.d0 = d0;
      params.D0 = D0;
      params.n_segments = n_segments;
      if (walls == "rigid") params.wall = vta::synth::WallKind::kRigid;
      else if (walls == "vibrating") params.wall = vta::synth::WallKind::kVibrating;
      else throw vta::ParseError("unknown wall model `" + walls + "`");
      if (signal == "derivative") params.output = vta::synth::OutputSignal::kLipFlowDerivative;
      else if (signal == "flow") params.output = vta::synth::OutputSignal::kLipFlow;
      else throw vta::ParseError("unknown output signal `" + signal + "`");

      auto af = vta::geom::load_area_function(area_path);
      std::unique_ptr<vta::synth::Source> source;
      if (source_kind == "twomass") {
        vta::glottis::TwoMassParams gp;
        gp.p_sub = p_sub;
        gp.c = c;
        source = std::make_unique<vta::synth::TwoMassSource>(gp, !no_feedback);
      } else if (source_kind == "impulse") {
        source = std::make_unique<vta::synth::ImpulseSource>(impulse_amplitude);
      } else {
        throw vta::ParseError("unknown source `" + source_kind + "`");
      }
      auto w = vta::synth::simulate(af, *source, params, duration);
      std::ostringstream buf(std::ios::binary);
      vta::wav::write_wav(w, buf);
      write_output(buf.str(), out_path);
    } else if (*formants_cmd) {
      auto w = vta::wav::read_wav(wav_path);
      auto est = vta::formant::formants_from_wave(w, n_formants);
      std::string text;
      char buf[96];
      if (format == "pretty") {
        for (size_t i = 0; i < est.frequencies.size(); ++i) {
          std::snprintf(buf, sizeof(buf), "F%zu = %.1f Hz (bandwidth %.1f Hz)\n", i + 1,
                        est.frequencies[i], est.bandwidths[i]);
          text += buf;
        }
      } else {
        text = "formant,F_Hz,bandwidth_Hz\n";
        for (size_t i = 0; i < est.frequencies.size(); ++i) {
          std::snprintf(buf, sizeof(buf), "%zu,%.1f,%.1f\n", i + 1, est.frequencies[i],
                        est.bandwidths[i]);
          text += buf;
        }
      }
      write_output(text, out_path);
    } else if (*compare_cmd) {
      auto cfg = vta::harness::load_config(config_path);
      auto report = vta::harness::compare(cfg, jobs);
      write_output(vta::harness::emit(report.table, parse_format(format)), out_path);
      for (const auto& f : report.failures) std::cerr << "warning: " << f << "\n";
      if (!report.failures.empty()) return kExitSolver;
    }
  } catch (const vta::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const vta::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const vta::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}
