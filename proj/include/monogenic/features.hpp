#pragma once

#include "monogenic/field.hpp"
#include "monogenic/scalespace.hpp"

namespace monogenic::features {

// Feature map plus validity mask (nonzero = valid).
struct MaskedField {
  ScalarField values;
  Mask valid;
};

struct MaskedVectorField {
  VectorField values;
  Mask valid;
};

struct LocalFeatures {
  ScalarField amplitude;
  MaskedField attenuation;
  MaskedField phase_angle;
  MaskedVectorField orientation;
  MaskedVectorField phase_vector;
};

inline constexpr double kDefaultRelativeMaskEpsilon = 1e-8;

// relative * max amplitude, floored at the smallest normal double so that the
// threshold stays positive on an all-zero field.
double default_mask_epsilon(const MonogenicField& f,
                            double relative = kDefaultRelativeMaskEpsilon);

// sqrt(u^2 + |v|^2).
ScalarField local_amplitude(const MonogenicField& f);

// (1/2) ln(u^2 + |v|^2) where the amplitude exceeds eps; ln(eps) and masked
// elsewhere.
MaskedField local_attenuation(const MonogenicField& f, double eps);

// atan2(|v|, u) in [0, pi]. Pixels with amplitude <= eps are masked.
MaskedField phase_angle(const MonogenicField& f, double eps = 0.0);

// v/|v| where |v| > eps.
MaskedVectorField local_orientation(const MonogenicField& f, double eps);

// orientation * phase angle on the orientation mask, (0,0) elsewhere.
MaskedVectorField local_phase_vector(const MonogenicField& f, double eps);

// Sc[(D F) F^-1] with F = u + v1 e1 + v2 e2 and D F = sum_j e_j d_j F.
// Masked where the amplitude is <= eps.
MaskedField instantaneous_frequency(const MonogenicField& f, double eps,
                                    scalespace::Stencil stencil = scalespace::Stencil::Central2);

LocalFeatures local_features(const MonogenicField& f, double eps);

}  // namespace monogenic::features
