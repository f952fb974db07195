#include "monogenic/scalespace.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <string>

#include "fft.hpp"

namespace monogenic::scalespace {

using detail::Complex;

SpectralGrid::SpectralGrid(int w, int h) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw Error(ErrorCode::InvalidArgument, "empty spectral grid");
  xi1.resize(w);
  nyquist1.resize(w);
  for (int k = 0; k < w; ++k) {
    xi1[k] = 2.0 * std::numbers::pi * detail::signed_frequency_index(k, w) / w;
    nyquist1[k] = detail::is_nyquist(k, w);
  }
  xi2.resize(h);
  nyquist2.resize(h);
  for (int k = 0; k < h; ++k) {
    xi2[k] = 2.0 * std::numbers::pi * detail::signed_frequency_index(k, h) / h;
    nyquist2[k] = detail::is_nyquist(k, h);
  }
}

double default_fd_step(double s) { return 1e-3 * std::max(s, 1.0); }

namespace {

void require_scale(double s, bool allow_zero, const char* what) {
  if (!std::isfinite(s) || s < 0.0 || (!allow_zero && s == 0.0)) {
    throw Error(ErrorCode::NegativeScale,
                std::string(what) + ": scale must be " + (allow_zero ? ">= 0" : "> 0"));
  }
}

ScalarField axpby(double a, const ScalarField& x, double b, const ScalarField& y) {
  ScalarField out(x.width(), x.height());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

}  // namespace

ScaleSpace::ScaleSpace(const ScalarField& f) : grid_(f.width(), f.height()) {
  require_finite(f, "scale space input");
  spectrum_.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) spectrum_[i] = Complex(f[i], 0.0);
  const std::array<int, 2> dims{grid_.height, grid_.width};
  detail::fft_forward(spectrum_, dims);
}

template <class Multiplier>
ScalarField ScaleSpace::apply(Multiplier&& m) const {
  std::vector<Complex> buf(spectrum_.size());
  std::size_t i = 0;
  for (int ky = 0; ky < grid_.height; ++ky) {
    for (int kx = 0; kx < grid_.width; ++kx, ++i) buf[i] = m(kx, ky) * spectrum_[i];
  }
  const std::array<int, 2> dims{grid_.height, grid_.width};
  detail::fft_inverse(buf, dims);

  ScalarField out(grid_.width, grid_.height);
  double sup_real = 0.0;
  double sup_imag = 0.0;
  for (std::size_t k = 0; k < buf.size(); ++k) {
    out[k] = buf[k].real();
    sup_real = std::max(sup_real, std::abs(buf[k].real()));
    sup_imag = std::max(sup_imag, std::abs(buf[k].imag()));
  }
  if (sup_imag > kImaginaryTolerance * std::max(1.0, sup_real)) {
    throw Error(ErrorCode::NonRealOutput,
                "inverse transform left imaginary residue " + std::to_string(sup_imag));
  }
  return out;
}

VectorField ScaleSpace::apply_riesz_pair(double sign, auto&& radial) const {
  auto component = [&](bool first) {
    return apply([&](int kx, int ky) {
      const double r = grid_.radius(kx, ky);
      if (r == 0.0) return Complex(0.0, 0.0);
      const bool nyq = first ? grid_.nyquist1[kx] : grid_.nyquist2[ky];
      const double xi = nyq ? 0.0 : (first ? grid_.xi1[kx] : grid_.xi2[ky]);
      return Complex(0.0, -sign * xi / r * radial(r));
    });
  };
  return VectorField(component(true), component(false));
}

VectorField ScaleSpace::riesz() const {
  return apply_riesz_pair(1.0, [](double) { return 1.0; });
}

VectorField ScaleSpace::isotropic_hilbert() const {
  return apply_riesz_pair(-1.0, [](double) { return 1.0; });
}

ScalarField ScaleSpace::poisson(double s) const {
  require_scale(s, true, "poisson_filter");
  return apply([&](int kx, int ky) { return Complex(std::exp(-s * grid_.radius(kx, ky)), 0.0); });
}

VectorField ScaleSpace::conjugate_poisson(double s) const {
  require_scale(s, false, "conjugate_poisson_filter");
  return apply_riesz_pair(-1.0, [s](double r) { return std::exp(-s * r); });
}

MonogenicField ScaleSpace::at(double s) const {
  require_scale(s, false, "monogenic_scale");
  return MonogenicField{poisson(s), conjugate_poisson(s), s};
}

ScaleDerivatives ScaleSpace::derivative(double s, DerivativeMode mode, double delta) const {
  require_scale(s, false, "scale_derivative");
  if (mode == DerivativeMode::Analytic) {
    auto radial = [s](double r) { return -r * std::exp(-s * r); };
    ScalarField du = apply([&](int kx, int ky) { return Complex(radial(grid_.radius(kx, ky)), 0.0); });
    return ScaleDerivatives{std::move(du), apply_riesz_pair(-1.0, radial)};
  }
  if (delta == 0.0) delta = default_fd_step(s);
  if (!(delta > 0.0) || delta >= s) {
    throw Error(ErrorCode::InvalidArgument, "finite-difference step must satisfy 0 < delta < s");
  }
  const MonogenicField hi = at(s + delta);
  const MonogenicField lo = at(s - delta);
  const double k = 1.0 / (2.0 * delta);
  return ScaleDerivatives{axpby(k, hi.u, -k, lo.u),
                          VectorField(axpby(k, hi.v.v1, -k, lo.v.v1), axpby(k, hi.v.v2, -k, lo.v.v2))};
}

VectorField riesz_transform(const ScalarField& f) { return ScaleSpace(f).riesz(); }

VectorField isotropic_hilbert(const ScalarField& f) { return ScaleSpace(f).isotropic_hilbert(); }

ScalarField poisson_filter(const ScalarField& f, double s) {
  require_scale(s, true, "poisson_filter");
  if (s == 0.0) return f;
  return ScaleSpace(f).poisson(s);
}

VectorField conjugate_poisson_filter(const ScalarField& f, double s) {
  require_scale(s, false, "conjugate_poisson_filter");
  return ScaleSpace(f).conjugate_poisson(s);
}

MonogenicField monogenic_scale(const ScalarField& f, double s) {
  require_scale(s, false, "monogenic_scale");
  return ScaleSpace(f).at(s);
}

ScaleDerivatives scale_derivative(const ScalarField& f, double s, DerivativeMode mode,
                                  double delta) {
  require_scale(s, false, "scale_derivative");
  return ScaleSpace(f).derivative(s, mode, delta);
}

namespace {

// Differentiates one line of n samples read through get().
template <class Get, class Put>
void differentiate_line(int n, Stencil stencil, Get get, Put put) {
  put(0, get(1) - get(0));
  put(n - 1, get(n - 1) - get(n - 2));
  for (int i = 1; i < n - 1; ++i) {
    const bool wide = stencil == Stencil::Central4 && i >= 2 && i <= n - 3;
    if (wide) {
      put(i, (-get(i + 2) + 8.0 * get(i + 1) - 8.0 * get(i - 1) + get(i - 2)) / 12.0);
    } else {
      put(i, 0.5 * (get(i + 1) - get(i - 1)));
    }
  }
}

}  // namespace

VectorField spatial_gradient(const ScalarField& f, Stencil stencil) {
  const int min_size = stencil == Stencil::Central4 ? 5 : 3;
  if (f.width() < min_size || f.height() < min_size) {
    throw Error(ErrorCode::ImageTooSmall,
                "spatial_gradient needs at least " + std::to_string(min_size) + " samples per axis");
  }
  VectorField g(f.width(), f.height());
  for (int y = 0; y < f.height(); ++y) {
    differentiate_line(
        f.width(), stencil, [&](int x) { return f(x, y); },
        [&](int x, double d) { g.v1(x, y) = d; });
  }
  for (int x = 0; x < f.width(); ++x) {
    differentiate_line(
        f.height(), stencil, [&](int y) { return f(x, y); },
        [&](int y, double d) { g.v2(x, y) = d; });
  }
  return g;
}

}  // namespace monogenic::scalespace
