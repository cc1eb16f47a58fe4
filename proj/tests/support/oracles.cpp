#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

Complex dense_det(Dense a) {
  const int n = static_cast<int>(a.size());
  Complex det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (std::abs(a[piv][k]) == 0.0) return 0.0;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (int i = k + 1; i < n; ++i) {
      Complex f = a[i][k] / a[k][k];
      for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return det;
}

Complex pencil_det(const Dense& M, const Dense& C, const Dense& K, Complex l) {
  const int n = static_cast<int>(M.size());
  Dense a(n, std::vector<Complex>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = l * l * M[i][j] + l * C[i][j] + K[i][j];
  return dense_det(std::move(a));
}

std::vector<Complex> pencil_roots_by_scan(const Dense& M, const Dense& C, const Dense& K,
                                          double re_lo, double re_hi, double im_lo,
                                          double im_hi, int nre, int nim) {
  std::vector<std::vector<double>> mag(nre, std::vector<double>(nim));
  auto at = [&](int i, int j) {
    double re = re_lo + (re_hi - re_lo) * i / (nre - 1);
    double im = im_lo + (im_hi - im_lo) * j / (nim - 1);
    return Complex(re, im);
  };
  for (int i = 0; i < nre; ++i)
    for (int j = 0; j < nim; ++j) mag[i][j] = std::abs(pencil_det(M, C, K, at(i, j)));

  std::vector<Complex> roots;
  for (int i = 0; i < nre; ++i)
    for (int j = 0; j < nim; ++j) {
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1 && is_min; ++dj) {
          int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nre || jj >= nim || (di == 0 && dj == 0)) continue;
          if (mag[ii][jj] < mag[i][j]) is_min = false;
        }
      if (!is_min) continue;
      // Newton with numerical derivative
      Complex l = at(i, j);
      bool ok = false;
      for (int it = 0; it < 80; ++it) {
        double h = 1e-7 * (1.0 + std::abs(l));
        Complex f = pencil_det(M, C, K, l);
        Complex fp = (pencil_det(M, C, K, l + h) - pencil_det(M, C, K, l - h)) / (2.0 * h);
        if (std::abs(fp) == 0.0) break;
        Complex step = f / fp;
        l -= step;
        if (std::abs(step) < 1e-12 * (1.0 + std::abs(l))) {
          ok = true;
          break;
        }
      }
      if (!ok) continue;
      bool dup = false;
      for (const auto& r : roots)
        if (std::abs(r - l) < 1e-6 * (1.0 + std::abs(l))) dup = true;
      if (!dup) roots.push_back(l);
    }
  return roots;
}

void fft(std::vector<Complex>& a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * M_PI / static_cast<double>(len);
    Complex wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      Complex w = 1.0;
      for (size_t j = 0; j < len / 2; ++j) {
        Complex u = a[i + j], v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<double> magnitude_spectrum(const std::vector<double>& x, int nfft) {
  std::vector<Complex> a(nfft, 0.0);
  const size_t n = std::min<size_t>(x.size(), nfft);
  for (size_t i = 0; i < n; ++i) {
    double w = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / (n - 1));
    a[i] = x[i] * w;
  }
  fft(a);
  std::vector<double> mag(nfft / 2);
  for (int k = 0; k < nfft / 2; ++k) mag[k] = std::abs(a[k]);
  return mag;
}

std::vector<double> spectral_peaks(const std::vector<double>& x, double fs, int count,
                                   double f_lo, double f_hi) {
  int nfft = 1;
  while (nfft < static_cast<int>(x.size())) nfft <<= 1;
  nfft = std::max(nfft, 4096);
  auto mag = magnitude_spectrum(x, nfft);
  double df = fs / nfft;
  struct Peak {
    double f, m;
  };
  std::vector<Peak> peaks;
  int k_lo = std::max(1, static_cast<int>(f_lo / df));
  int k_hi = std::min(static_cast<int>(mag.size()) - 2, static_cast<int>(f_hi / df));
  for (int k = k_lo; k <= k_hi; ++k) {
    if (mag[k] > mag[k - 1] && mag[k] >= mag[k + 1]) {
      // parabolic refinement in log magnitude
      double a = std::log(mag[k - 1] + 1e-300), b = std::log(mag[k] + 1e-300),
             c = std::log(mag[k + 1] + 1e-300);
      double den = a - 2 * b + c;
      double delta = (den == 0.0) ? 0.0 : 0.5 * (a - c) / den;
      peaks.push_back({(k + delta) * df, mag[k]});
    }
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.m > b.m; });
  if (static_cast<int>(peaks.size()) > count) peaks.resize(count);
  std::vector<double> fs_out;
  for (const auto& p : peaks) fs_out.push_back(p.f);
  std::sort(fs_out.begin(), fs_out.end());
  return fs_out;
}

std::vector<double> transfer_matrix_resonances(
    const std::vector<std::pair<double, double>>& segments, double c, int count,
    double f_lo, double f_hi) {
  auto glottal_u = [&](double f) {
    double k = 2.0 * M_PI * f / c;
    Complex p = 0.0, u = 1.0;  // open lips: p = 0, unit flow
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
      double l = it->first, z = c / it->second;  // rho = 1
      double cl = std::cos(k * l), sl = std::sin(k * l);
      Complex p0 = cl * p + Complex(0, 1) * z * sl * u;
      Complex u0 = Complex(0, 1) * (sl / z) * p + cl * u;
      p = p0;
      u = u0;
    }
    return u.real();
  };

  std::vector<double> roots;
  double step = 1.0;
  double prev = glottal_u(f_lo);
  for (double f = f_lo + step; f <= f_hi && static_cast<int>(roots.size()) < count;
       f += step) {
    double cur = glottal_u(f);
    if (prev == 0.0) {
      roots.push_back(f - step);
    } else if (prev * cur < 0.0) {
      double a = f - step, b = f;
      for (int i = 0; i < 60; ++i) {
        double m = 0.5 * (a + b);
        double gm = glottal_u(m);
        if (gm == 0.0) {
          a = b = m;
          break;
        }
        if (gm * glottal_u(a) < 0.0)
          b = m;
        else
          a = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    prev = cur;
  }
  return roots;
}

}  // namespace oracle
