#pragma once

// Reference implementations used only by the tests. Nothing here touches the
// library's transform code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "monogenic/field.hpp"

namespace oracle {

using Complex = std::complex<double>;
using monogenic::ScalarField;

// Naive O(n^2) DFT along one axis of a row-major w x h buffer. sign = -1 is
// the forward direction; the inverse is scaled by 1/n.
inline void dft_axis(std::vector<Complex>& a, int w, int h, bool along_rows, int sign) {
  const int n = along_rows ? w : h;
  const int lines = along_rows ? h : w;
  std::vector<Complex> twiddle(n);
  for (int k = 0; k < n; ++k) {
    twiddle[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * k / n);
  }
  std::vector<Complex> in(n), out(n);
  for (int l = 0; l < lines; ++l) {
    for (int i = 0; i < n; ++i) in[i] = along_rows ? a[l * w + i] : a[i * w + l];
    for (int k = 0; k < n; ++k) {
      Complex acc = 0.0;
      for (int i = 0; i < n; ++i) acc += in[i] * twiddle[(static_cast<long>(k) * i) % n];
      out[k] = sign > 0 ? acc / static_cast<double>(n) : acc;
    }
    for (int i = 0; i < n; ++i) (along_rows ? a[l * w + i] : a[i * w + l]) = out[i];
  }
}

inline std::vector<Complex> dft2(const ScalarField& f) {
  std::vector<Complex> a(f.samples().begin(), f.samples().end());
  dft_axis(a, f.width(), f.height(), true, -1);
  dft_axis(a, f.width(), f.height(), false, -1);
  return a;
}

// Signed angular frequency of bin k out of n.
inline double angular(int k, int n) {
  const int signed_k = k <= n / 2 ? k : k - n;
  return 2.0 * std::numbers::pi * signed_k / n;
}

// Real part of the inverse DFT of m(xi1, xi2, nyq1, nyq2) * F.
inline ScalarField apply_multiplier(
    const ScalarField& f,
    const std::function<Complex(double, double, bool, bool)>& m) {
  const int w = f.width();
  const int h = f.height();
  std::vector<Complex> a = dft2(f);
  for (int ky = 0; ky < h; ++ky) {
    for (int kx = 0; kx < w; ++kx) {
      const bool nyq1 = w % 2 == 0 && kx == w / 2;
      const bool nyq2 = h % 2 == 0 && ky == h / 2;
      a[ky * w + kx] *= m(angular(kx, w), angular(ky, h), nyq1, nyq2);
    }
  }
  dft_axis(a, w, h, true, +1);
  dft_axis(a, w, h, false, +1);
  ScalarField out(w, h);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i].real();
  return out;
}

// Riesz multiplier component j (0 or 1): -i xi_j / |xi|, zero at DC and on the
// Nyquist line of that axis.
inline ScalarField riesz(const ScalarField& f, int j) {
  return apply_multiplier(f, [j](double x1, double x2, bool n1, bool n2) -> Complex {
    const double r = std::hypot(x1, x2);
    if (r == 0.0 || (j == 0 ? n1 : n2)) return 0.0;
    return Complex(0.0, -(j == 0 ? x1 : x2) / r);
  });
}

inline ScalarField poisson(const ScalarField& f, double s) {
  return apply_multiplier(f, [s](double x1, double x2, bool, bool) -> Complex {
    return std::exp(-s * std::hypot(x1, x2));
  });
}

// Sum of cosines c0 + sum a_k cos(w_k t + p_k) and its Poisson / conjugate
// Poisson extension in closed form. The conjugate uses the classical Hilbert
// pair cos -> sin.
struct CosineSeries {
  double c0 = 0.0;
  std::vector<double> amp, omega, phase;

  double value(double t) const {
    double g = c0;
    for (std::size_t k = 0; k < amp.size(); ++k) g += amp[k] * std::cos(omega[k] * t + phase[k]);
    return g;
  }

  struct Pair {
    double u, w, du_ds, dw_ds;
  };

  Pair at(double t, double s) const {
    Pair p{c0, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < amp.size(); ++k) {
      const double e = amp[k] * std::exp(-s * omega[k]);
      const double c = std::cos(omega[k] * t + phase[k]);
      const double sn = std::sin(omega[k] * t + phase[k]);
      p.u += e * c;
      p.w += e * sn;
      p.du_ds -= omega[k] * e * c;
      p.dw_ds -= omega[k] * e * sn;
    }
    return p;
  }

  // (u dw/ds - w du/ds) / (u^2 + w^2).
  double dpc(double t, double s) const {
    const Pair p = at(t, s);
    return (p.u * p.dw_ds - p.w * p.du_ds) / (p.u * p.u + p.w * p.w);
  }
};

inline ScalarField random_field(int w, int h, std::uint64_t seed, double lo = -1.0,
                                double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  ScalarField f(w, h);
  for (auto& x : f.samples()) x = d(rng);
  return f;
}

inline double sup_diff(const ScalarField& a, const ScalarField& b, int border = 0) {
  double s = 0.0;
  for (int y = border; y < a.height() - border; ++y) {
    for (int x = border; x < a.width() - border; ++x) s = std::max(s, std::abs(a(x, y) - b(x, y)));
  }
  return s;
}

inline double sup_abs(const ScalarField& a, int border = 0) {
  return sup_diff(a, ScalarField(a.width(), a.height()), border);
}

}  // namespace oracle
