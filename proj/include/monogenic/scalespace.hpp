#pragma once

#include <complex>
#include <vector>

#include "monogenic/field.hpp"

namespace monogenic::scalespace {

// Angular frequencies of each bin of a width x height transform, in the
// standard layout (non-negative indices first, then negative ones).
struct SpectralGrid {
  int width = 0;
  int height = 0;
  std::vector<double> xi1;     // per column
  std::vector<double> xi2;     // per row
  std::vector<bool> nyquist1;  // column is the Nyquist bin of an even width
  std::vector<bool> nyquist2;

  explicit SpectralGrid(int width, int height);
  double radius(int kx, int ky) const { return std::hypot(xi1[kx], xi2[ky]); }
};

// Sup |imag| allowed before an inverse transform is reported as NonRealOutput,
// relative to max(1, sup |real|).
inline constexpr double kImaginaryTolerance = 1e-9;

enum class DerivativeMode { Analytic, FiniteDifference };

struct ScaleDerivatives {
  ScalarField du_ds;
  VectorField dv_ds;
};

// delta = 1e-3 * max(s, 1).
double default_fd_step(double s);

// Forward spectrum of one image, reusable across scales. Immutable after
// construction; every query runs its own inverse transform.
class ScaleSpace {
 public:
  explicit ScaleSpace(const ScalarField& f);

  int width() const { return grid_.width; }
  int height() const { return grid_.height; }

  VectorField riesz() const;
  VectorField isotropic_hilbert() const;
  ScalarField poisson(double s) const;
  VectorField conjugate_poisson(double s) const;
  MonogenicField at(double s) const;
  ScaleDerivatives derivative(double s, DerivativeMode mode = DerivativeMode::Analytic,
                              double delta = 0.0) const;

 private:
  template <class Multiplier>
  ScalarField apply(Multiplier&& m) const;
  VectorField apply_riesz_pair(double sign, auto&& radial) const;

  SpectralGrid grid_;
  std::vector<std::complex<double>> spectrum_;
};

// Component j: inverse transform of (-i xi_j / |xi|) F. DC and the odd part at
// Nyquist bins are zeroed. cos(w x1) -> (sin(w x1), 0).
VectorField riesz_transform(const ScalarField& f);

// H[f] = -(R1 f) e1 - (R2 f) e2.
VectorField isotropic_hilbert(const ScalarField& f);

// Multiplier exp(-s |xi|). Throws NegativeScale for s < 0.
ScalarField poisson_filter(const ScalarField& f, double s);

// Vector part of the monogenic scale-space: the isotropic Hilbert transform of
// the Poisson-filtered signal. cos(w x1) -> (-exp(-s w) sin(w x1), 0).
VectorField conjugate_poisson_filter(const ScalarField& f, double s);

MonogenicField monogenic_scale(const ScalarField& f, double s);

// Analytic: multipliers -|xi| exp(-s|xi|) (and the Hilbert factor for dv/ds).
// FiniteDifference: central difference with step delta (0 selects the default);
// requires delta < s.
ScaleDerivatives scale_derivative(const ScalarField& f, double s,
                                  DerivativeMode mode = DerivativeMode::Analytic,
                                  double delta = 0.0);

enum class Stencil {
  Central2,  // (f[x+1] - f[x-1]) / 2
  Central4,  // (-f[x+2] + 8 f[x+1] - 8 f[x-1] + f[x-2]) / 12
};

// Component j approximates df/dx_j. Interior central differences, one-sided
// first differences on the outermost samples (Central4 falls back to Central2
// one sample in). Throws ImageTooSmall below 3 (Central2) or 5 (Central4).
VectorField spatial_gradient(const ScalarField& f, Stencil stencil = Stencil::Central2);

}  // namespace monogenic::scalespace
