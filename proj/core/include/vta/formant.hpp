#pragma once

#include <span>
#include <vector>

namespace vta::formant {

struct Waveform {
  std::vector<double> samples;
  double fs = 0.0;  // Hz
};

struct FormantEstimate {
  std::vector<double> frequencies;  // Hz, strictly increasing
  std::vector<double> bandwidths;   // Hz, positive
};

struct LpcResult {
  std::vector<double> coefficients;  // a_1..a_p of A(z) = 1 + sum a_k z^-k
  double gain;                       // sqrt of the residual prediction-error energy
};

// Autocorrelation-method linear prediction via Levinson-Durbin. The frame is
// used as given (window before calling). Throws on a zero-energy frame.
LpcResult lpc(std::span<const double> frame, int order);

struct FormantOptions {
  double pre_emphasis = 0.97;
  double frame_seconds = 0.025;
  double hop_seconds = 0.010;
  double min_frequency = 90.0;    // Hz
  double max_bandwidth = 400.0;   // Hz
  double voicing_rms_fraction = 0.01;  // of the utterance peak frame RMS
  int order_override = 0;         // 0: round(2 + fs/1000)
};

// Pre-emphasis, Hamming frames, per-frame LPC, polynomial roots by iterative
// simultaneous (Durand-Kerner) root finding, bandwidth/frequency gating,
// median across voiced frames; returns the n lowest formants.
FormantEstimate formants_from_wave(const Waveform& w, int n,
                                   const FormantOptions& opts = {});

// Arithmetic mean per formant index over repeated utterances.
FormantEstimate average_formants(const std::vector<FormantEstimate>& estimates);

}  // namespace vta::formant
