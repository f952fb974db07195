#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "monogenic/field.hpp"
#include "monogenic/scalespace.hpp"

namespace monogenic::edgeops {

enum class Method { Canny, Sobel, Dpc, La, Mdpc, LaMdpc };

inline constexpr std::array<Method, 6> kAllMethods{Method::Canny, Method::Sobel, Method::Dpc,
                                                   Method::La,    Method::Mdpc,  Method::LaMdpc};

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);
bool is_phase_method(Method m);

// Vector-valued edge response. magnitude = hypot(g1, g2).
struct GradientMap {
  ScalarField g1;
  ScalarField g2;
  ScalarField magnitude;
  Method method = Method::Dpc;
  double scale = 0.0;
};

GradientMap make_gradient_map(ScalarField g1, ScalarField g2, Method method, double scale);

struct EdgeMap {
  Mask edges;  // 0 or 1
  Method method = Method::Dpc;
  double scale = 0.0;
  double nms_radius = 0.0;
  double low = 0.0;
  double high = 0.0;

  std::size_t count() const;
};

struct DetectorConfig {
  Method method = Method::Mdpc;
  double scale = 0.5;
  scalespace::DerivativeMode derivative_mode = scalespace::DerivativeMode::Analytic;
  double fd_step = 0.0;         // 0 selects scalespace::default_fd_step(scale)
  double mask_eps = 1e-8;       // relative to the peak amplitude
  double nms_radius = 1.5;
  double low = 1.0;             // on the normalized magnitude scale
  double high = 3.5;
  int pad = 16;                 // mirror padding before filtering
  double canny_sigma = 1.0;
  double normalize_percentile = 0.99;
  double normalize_target = 10.0;

  // Throws InvalidArgument / NegativeScale / BadThresholds.
  void validate() const;
};

// (u dv/ds - v du/ds) / (u^2 + |v|^2); zero where the amplitude is <= eps.
GradientMap dpc_gradient(const MonogenicField& f, const scalespace::ScaleDerivatives& d,
                         double eps);

// (u Du + |v| D|v|) / (u^2 + |v|^2), i.e. the spatial gradient of the local
// attenuation.
GradientMap la_gradient(const MonogenicField& f, double eps);

enum class CurvatureEvaluation { CliffordProduct, ClosedForm };

// sin^2(theta) Vec[(D n) n] with n = v/|v|. d_j n comes from the quotient rule
// on the spatial gradient of v, so sign flips of n through |v| = 0 never get
// differenced. Zero where |v| <= eps or the amplitude is <= eps.
VectorField orientation_curvature_term(
    const MonogenicField& f, double eps,
    CurvatureEvaluation how = CurvatureEvaluation::CliffordProduct);

// DPC - sin^2(theta) Vec[(D n) n].
GradientMap mdpc_gradient(const MonogenicField& f, const scalespace::ScaleDerivatives& d,
                          double eps);

// DPC - D a - sin^2(theta) Vec[(D n) n] = mdpc - la.
GradientMap mixed_gradient(const MonogenicField& f, const scalespace::ScaleDerivatives& d,
                           double eps);

// Unnormalized 3x3 Sobel, replicated borders.
GradientMap sobel_gradient(const ScalarField& img);

// Central-difference gradient of the Gaussian-smoothed image.
GradientMap canny_gradient(const ScalarField& img, double sigma);

// Keeps a pixel when its magnitude is >= the bilinearly interpolated magnitudes
// at +/- radius along (g1, g2). Ridges still wider than one pixel across the
// gradient are then thinned, keeping the stronger pixel and never breaking
// connectivity. Suppressed pixels get zero magnitude and direction.
GradientMap non_maximum_suppression(const GradientMap& g, double radius);

// Seeds at magnitude >= high, grown through 8-connected pixels >= low.
EdgeMap hysteresis_threshold(const GradientMap& g, double low, double high);

// Linear-interpolated percentile (q in [0,1]) of all samples.
double percentile(const ScalarField& f, double q);

// Rescales so that the q-th percentile of the magnitude maps to target (the
// maximum is used when that percentile is zero; an all-zero map stays zero).
GradientMap normalize_magnitude(const GradientMap& g, double q, double target);

struct Detection {
  GradientMap gradient;    // normalized, before suppression
  GradientMap suppressed;  // after non-maximum suppression
  EdgeMap edges;
  std::vector<std::pair<std::string, double>> stage_ms;
};

Detection detect(const ScalarField& img, const DetectorConfig& cfg);

// ITU-R BT.601 luma.
inline double luminance(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

}  // namespace monogenic::edgeops
