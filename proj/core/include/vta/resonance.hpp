#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "vta/errors.hpp"
#include "vta/numlin.hpp"

namespace vta {

// Row labels used across the comparison: Helmholtz resonances, Webster
// resonances, length-scaled Webster resonances, time-domain Webster formants,
// audio formants.
enum class Method { kHelmholtz, kWebster, kScaledWebster, kWebsterFormant, kAudioFormant };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::kHelmholtz: return "H_R";
    case Method::kWebster: return "W_R";
    case Method::kScaledWebster: return "S_R";
    case Method::kWebsterFormant: return "W_F";
    case Method::kAudioFormant: return "A_F";
  }
  return "?";
}

struct Mode {
  std::complex<double> lambda;  // 1/s
  double frequency;             // Im(lambda) / 2pi, Hz
};

struct ResonanceSet {
  Method method;
  std::vector<Mode> modes;  // sorted by frequency ascending, all f > 0
  std::string source;       // input file / generator description
  double c = 0.0;
  double alpha = 0.0;
};

// The two lowest retained resonance frequencies.
inline std::pair<double, double> first_two(const ResonanceSet& rs) {
  if (rs.modes.size() < 2)
    throw SolverError(std::string(method_name(rs.method)) +
                      ": fewer than 2 modes retained");
  return {rs.modes[0].frequency, rs.modes[1].frequency};
}

// Positive-frequency modes above the spurious-mode floor, sorted ascending.
std::vector<Mode> retain_acoustic_modes(const std::vector<numlin::EigenPair>& pairs,
                                        double min_hz = 20.0);

}  // namespace vta
