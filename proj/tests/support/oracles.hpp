#pragma once

// Test-side oracles, deliberately independent of the library implementation:
// dense complex determinants, a grid det-scan root finder for quadratic
// pencils, a radix-2 FFT with parabolic peak picking, and a deterministic RNG.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

struct Rng {
  uint64_t s;
  explicit Rng(uint64_t seed) : s(seed) {}
  uint64_t next() {
    uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * (1.0 / 9007199254740992.0); }  // [0,1)
  double sym() { return uniform() * 2.0 - 1.0; }                            // [-1,1)
};

// Row-major dense matrix helpers.
using Dense = std::vector<std::vector<Complex>>;

Complex dense_det(Dense a);  // by value: destroyed by elimination

// det(l^2 M + l C + K) for dense inputs.
Complex pencil_det(const Dense& M, const Dense& C, const Dense& K, Complex l);

// Scan |det| over a complex grid, Newton-polish every local minimum, dedupe.
std::vector<Complex> pencil_roots_by_scan(const Dense& M, const Dense& C, const Dense& K,
                                          double re_lo, double re_hi, double im_lo,
                                          double im_hi, int nre, int nim);

// In-place radix-2 FFT, size must be a power of two.
void fft(std::vector<Complex>& a);

// Magnitude spectrum of a Hann-windowed, zero-padded signal; bin k maps to
// frequency k*fs/nfft.
std::vector<double> magnitude_spectrum(const std::vector<double>& x, int nfft);

// The `count` highest local maxima of the spectrum between f_lo and f_hi,
// refined by parabolic interpolation, sorted ascending by frequency.
std::vector<double> spectral_peaks(const std::vector<double>& x, double fs, int count,
                                   double f_lo, double f_hi);

// Resonances of a closed(glottis)-open(lips) piecewise-cylindrical acoustic
// chain: two-port transmission matrices are chained from the lips (p = 0)
// toward the glottis and zero crossings of the glottal volume velocity are
// bisected. `segments` runs glottis -> lips as (length, area) pairs.
std::vector<double> transfer_matrix_resonances(
    const std::vector<std::pair<double, double>>& segments, double c, int count,
    double f_lo, double f_hi);

}  // namespace oracle
