#include "vta/formant.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "vta/errors.hpp"

namespace vta::formant {

namespace {

constexpr double kPi = 3.14159265358979323846;

// All roots of the monic polynomial z^p + c[0] z^(p-1) + ... + c[p-1] by
// Durand-Kerner (Weierstrass) simultaneous iteration.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> c) {
  using C = std::complex<double>;
  const int p = static_cast<int>(c.size());
  std::vector<C> w(p);
  C seed(0.4, 0.9);
  w[0] = seed;
  for (int j = 1; j < p; ++j) w[j] = w[j - 1] * seed;

  auto eval = [&](C z) {
    C v = 1.0;
    for (int i = 0; i < p; ++i) v = v * z + c[i];
    return v;
  };

  for (int it = 0; it < 500; ++it) {
    double worst = 0.0;
    for (int j = 0; j < p; ++j) {
      C denom = 1.0;
      for (int k = 0; k < p; ++k)
        if (k != j) denom *= (w[j] - w[k]);
      if (std::abs(denom) < 1e-280) continue;
      C delta = eval(w[j]) / denom;
      w[j] -= delta;
      worst = std::max(worst, std::abs(delta) / (1.0 + std::abs(w[j])));
    }
    if (worst < 1e-13) break;
  }
  return w;
}

struct FrameFormants {
  std::vector<double> f, bw;
};

}  // namespace

LpcResult lpc(std::span<const double> frame, int order) {
  const int n = static_cast<int>(frame.size());
  if (order < 2) throw ValidationError("lpc: order must be >= 2");
  if (n <= 2 * order) throw ValidationError("lpc: frame shorter than 2*order");

  std::vector<double> r(order + 1, 0.0);
  for (int k = 0; k <= order; ++k)
    for (int i = k; i < n; ++i) r[k] += frame[i] * frame[i - k];
  if (!(r[0] > 0.0)) throw SolverError("lpc: degenerate frame (zero energy)");
  r[0] *= 1.0 + 1e-9;  // relative floor; keeps pure tones minimum-phase

  std::vector<double> a(order, 0.0), prev(order, 0.0);
  double err = r[0];
  for (int m = 0; m < order; ++m) {
    double acc = r[m + 1];
    for (int i = 0; i < m; ++i) acc += a[i] * r[m - i];
    double k = -acc / err;
    if (!(std::abs(k) < 1.0)) k = std::copysign(1.0 - 1e-10, k);
    std::copy(a.begin(), a.begin() + m, prev.begin());
    a[m] = k;
    for (int i = 0; i < m; ++i) a[i] = prev[i] + k * prev[m - 1 - i];
    err *= (1.0 - k * k);
  }
  return {std::move(a), std::sqrt(std::max(err, 0.0))};
}

namespace {

FrameFormants frame_formants(std::span<const double> frame, double fs, int order,
                             const FormantOptions& opts) {
  auto [a, gain] = lpc(frame, order);
  auto roots = polynomial_roots(a);

  FrameFormants out;
  std::vector<std::pair<double, double>> cand;
  for (const auto& r : roots) {
    if (!(r.imag() > 0.0)) continue;  // keep the positive-angle half
    double mag = std::abs(r);
    if (!(mag > 0.0) || mag >= 1.0) continue;
    double f = std::atan2(r.imag(), r.real()) * fs / (2.0 * kPi);
    double bw = -std::log(mag) * fs / kPi;
    if (f > opts.min_frequency && bw < opts.max_bandwidth) cand.emplace_back(f, bw);
  }
  std::sort(cand.begin(), cand.end());
  for (const auto& [f, bw] : cand) {
    out.f.push_back(f);
    out.bw.push_back(bw);
  }
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t m = v.size() / 2;
  return (v.size() % 2 == 1) ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

FormantEstimate formants_from_wave(const Waveform& w, int n, const FormantOptions& opts) {
  if (!(w.fs > 0.0)) throw ValidationError("formants_from_wave: bad sample rate");
  if (n < 1) throw ValidationError("formants_from_wave: need n >= 1");
  const int nsamp = static_cast<int>(w.samples.size());
  if (nsamp < static_cast<int>(0.1 * w.fs))
    throw ValidationError("formants_from_wave: waveform shorter than 100 ms");

  std::vector<double> x(nsamp);
  x[0] = w.samples[0];
  for (int i = 1; i < nsamp; ++i) x[i] = w.samples[i] - opts.pre_emphasis * w.samples[i - 1];

  const int nw = static_cast<int>(std::lround(opts.frame_seconds * w.fs));
  const int hop = static_cast<int>(std::lround(opts.hop_seconds * w.fs));
  const int order = opts.order_override > 0
                        ? opts.order_override
                        : static_cast<int>(std::lround(2.0 + w.fs / 1000.0));

  struct FrameInfo {
    int offset;
    double rms;
  };
  std::vector<FrameInfo> frames;
  double peak_rms = 0.0;
  for (int off = 0; off + nw <= nsamp; off += hop) {
    double s = 0.0;
    for (int i = 0; i < nw; ++i) s += x[off + i] * x[off + i];
    double rms = std::sqrt(s / nw);
    frames.push_back({off, rms});
    peak_rms = std::max(peak_rms, rms);
  }
  if (frames.empty()) throw ValidationError("formants_from_wave: waveform too short");

  std::vector<double> windowed(nw);
  std::vector<FrameFormants> voiced;
  for (const auto& fr : frames) {
    if (fr.rms < opts.voicing_rms_fraction * peak_rms) continue;
    for (int i = 0; i < nw; ++i) {
      double win = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (nw - 1));
      windowed[i] = x[fr.offset + i] * win;
    }
    voiced.push_back(frame_formants(windowed, w.fs, order, opts));
  }

  FormantEstimate est;
  for (int idx = 0; idx < n; ++idx) {
    std::vector<double> fs_at, bw_at;
    for (const auto& v : voiced)
      if (static_cast<int>(v.f.size()) > idx) {
        fs_at.push_back(v.f[idx]);
        bw_at.push_back(v.bw[idx]);
      }
    if (fs_at.empty())
      throw SolverError("formants_from_wave: fewer than " + std::to_string(n) +
                        " formants found");
    est.frequencies.push_back(median(std::move(fs_at)));
    est.bandwidths.push_back(median(std::move(bw_at)));
  }
  for (int i = 1; i < n; ++i)
    if (!(est.frequencies[i] > est.frequencies[i - 1]))
      throw SolverError("formants_from_wave: formant ordering degenerate");
  return est;
}

FormantEstimate average_formants(const std::vector<FormantEstimate>& estimates) {
  if (estimates.empty()) throw ValidationError("average_formants: empty list");
  const size_t n = estimates.front().frequencies.size();
  for (const auto& e : estimates)
    if (e.frequencies.size() != n || e.bandwidths.size() != n)
      throw ValidationError("average_formants: mismatched formant counts");

  FormantEstimate out;
  out.frequencies.assign(n, 0.0);
  out.bandwidths.assign(n, 0.0);
  for (const auto& e : estimates)
    for (size_t i = 0; i < n; ++i) {
      out.frequencies[i] += e.frequencies[i];
      out.bandwidths[i] += e.bandwidths[i];
    }
  for (size_t i = 0; i < n; ++i) {
    out.frequencies[i] /= estimates.size();
    out.bandwidths[i] /= estimates.size();
  }
  return out;
}

}  // namespace vta::formant
