#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "monogenic/field.hpp"
#include "monogenic/scalespace.hpp"

namespace monogenic::verify {

enum class Statistic { Median, P95, Sup };
// AtMost: statistic <= tolerance. AtLeast: statistic > tolerance.
enum class Comparison { AtMost, AtLeast };

std::string_view to_string(Statistic s);

struct ResidualReport {
  std::string identity;
  ScalarField residual;  // per-sample |residual|
  Mask included;         // samples that enter the statistics
  std::size_t count = 0;
  double median = 0.0;
  double p95 = 0.0;
  double sup = 0.0;
  double s = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  Statistic statistic = Statistic::Median;
  Comparison comparison = Comparison::AtMost;
  double tolerance = 0.0;
  bool vacuous = false;  // nothing left after masking
  bool pass = false;
  std::string note;

  double value() const;
};

// Fills count/median/p95/sup/vacuous/pass from residual and included. A
// vacuous AtMost check passes, a vacuous AtLeast check fails.
void finalize(ResidualReport& r);

ResidualReport make_report(std::string identity, ScalarField residual, Mask included,
                           Statistic statistic, Comparison comparison, double tolerance);

// Closed form of the Cauchy kernel E(s + x) = (s - x) / |s + x|^3 in R^2.
struct CauchyKernelSample {
  double u = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double a = 0.0;      // -ln(s^2 + |x|^2)
  double theta = 0.0;  // arctan(|x| / s) in [0, pi]
  double r1 = 0.0;     // -(x / |x|) theta; zero on the axis x = 0
  double r2 = 0.0;
};

// Throws OriginSingularity at (0, 0, 0).
CauchyKernelSample cauchy_kernel_oracle(double x1, double x2, double s);

// Pixels with amplitude > eps and |v| > eps whose whole 5x5 neighbourhood is
// valid and inside the grid.
Mask interior_mask(const MonogenicField& f, double eps, int band = 2);

// Residuals of the scale-derivative identities. The field is space.at(s);
// scale derivatives are central differences with step delta, spatial ones the
// Central4 stencil.
struct Theorem31Reports {
  ResidualReport amplitude;  // da/ds + Sc[(D e^r) e^-r]
  ResidualReport phase_vector;  // |dr/ds + Da - sin^2 Vec[(Dn)n] + (sin cos - theta) dn/ds|
};
Theorem31Reports check_theorem31(const scalespace::ScaleSpace& space, double s, double delta,
                                 double eps, double tolerance = 1e-3);

// Sc[(d/ds e^r) e^-r].
ResidualReport check_lemma_scalar_zero(const scalespace::ScaleSpace& space, double s,
                                       double delta, double eps, double tolerance = 1e-6);

// Median residual at delta over the median at delta / 2, as a 1x1 report that
// passes when the ratio lies in [lo, hi].
ResidualReport check_lemma_scalar_zero_ratio(const scalespace::ScaleSpace& space, double s,
                                             double delta, double eps, double lo = 3.0,
                                             double hi = 5.0);

struct Lemma33Reports {
  ResidualReport scale_rotor;   // Vec[(d/ds e^r) e^-r] - (sin cos - theta) dn/ds - dr/ds
  ResidualReport dirac_rotor;   // Vec[(D e^r) e^-r] + sin^2 Vec[(Dn)n]
  ResidualReport grade;  // |Sc[(Dn)n]| + |Biv[(Dn)n]|
};
Lemma33Reports check_lemma33(const scalespace::ScaleSpace& space, double s, double delta,
                             double eps, double tolerance = 1e-4, double grade_tolerance = 1e-10);

// Axial-form identities on the Cauchy kernel with exact derivatives, m = 2.
// Rows of the residual field are scales, columns radii.
ResidualReport check_axial_corollary(const std::vector<double>& s_values,
                                     const std::vector<double>& radii,
                                     double tolerance = 1e-8);
std::vector<double> default_axial_radii();  // 0.5, 0.6, ..., 5.0

// m = 1: da/ds + dtheta/dx and da/dx - dtheta/ds on a periodic 1D Poisson
// pair, 1 x n residual.
ResidualReport check_axial_reduction_1d(double s, double tolerance = 1e-4);

// Features computed from the oracle's (u, v) against its closed-form a and r at
// the given points, max over both.
struct OraclePoint {
  double x1, x2, s;
};
ResidualReport check_cauchy_oracle(const std::vector<OraclePoint>& points,
                                   double tolerance = 1e-10);
std::vector<OraclePoint> default_oracle_points(std::size_t n = 100);

// Relative residual |IF + da/ds| / |da/ds| (median).
ResidualReport check_theorem34(const scalespace::ScaleSpace& space, double s, double delta,
                               double eps, double tolerance = 1e-3);
// Absolute residual |IF + da/ds| (sup).
ResidualReport check_theorem34_absolute(const scalespace::ScaleSpace& space, double s,
                                        double delta, double eps, double tolerance = 1e-3);

// |-sin^2 Vec[(Dn)n] + (sin cos - theta) dn/ds|, sup. AtLeast for fields with
// varying orientation, AtMost for plane signals.
ResidualReport check_dpc_extrema_mismatch(const scalespace::ScaleSpace& space, double s,
                                          double eps, Comparison comparison, double tolerance);
// The same extra term against (MDPC - DPC) + theta term.
ResidualReport check_mismatch_consistency(const scalespace::ScaleSpace& space, double s,
                                          double eps, double tolerance = 1e-12);

// Sc[(Dn) sin cos] + Sc[(D theta) n], the expansion of the instantaneous
// frequency in polar quantities. Zero outside the mask.
ScalarField instantaneous_frequency_expansion(const MonogenicField& f, double eps,
                                              scalespace::Stencil stencil);
ResidualReport check_phase_derivative_expansion(const MonogenicField& f, double eps,
                                                double tolerance = 1e-6);

enum class Suite { Theorem31, Lemma32, Lemma33, Axial, Theorem34, Mismatch };
inline constexpr Suite kAllSuites[] = {Suite::Theorem31, Suite::Lemma32, Suite::Lemma33,
                                       Suite::Axial,     Suite::Theorem34, Suite::Mismatch};
std::string_view to_string(Suite s);
std::optional<Suite> parse_suite(std::string_view name);

struct Tolerances {
  double theorem31 = 1e-3;
  double lemma32 = 1e-6;
  double lemma32_ratio_lo = 3.0;
  double lemma32_ratio_hi = 5.0;
  double lemma33 = 1e-4;
  double lemma33_grade = 1e-10;
  double axial = 1e-8;
  double axial_1d = 1e-4;
  double cauchy_oracle = 1e-10;
  double theorem34 = 1e-3;
  double theorem34_plane = 1e-3;
  double phase_expansion = 1e-6;
  double mismatch_floor = 1e-2;
  double mismatch_plane = 1e-3;
  double mismatch_consistency = 1e-12;
};

// Built-in fixtures.
ScalarField reference_image();  // 128x128 band-limited random field
ScalarField blob_image();       // 128x128 Gaussian blob
ScalarField plane_image();      // 128x128 oblique periodic cosine
inline constexpr double kReferenceScale = 0.5;

std::vector<ResidualReport> run_suite(Suite suite, const Tolerances& tol = {});

// identity,statistic,value,tolerance,pass
std::string to_csv(const std::vector<ResidualReport>& reports);

}  // namespace monogenic::verify
