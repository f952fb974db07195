#include "monogenic/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "monogenic/clifford.hpp"

namespace monogenic::features {

namespace cl = monogenic::clifford;

namespace {

void require_eps(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::InvalidArgument, "mask epsilon must be finite and non-negative");
  }
}

double amplitude_at(const MonogenicField& f, std::size_t i) {
  return std::sqrt(f.u[i] * f.u[i] + f.v.v1[i] * f.v.v1[i] + f.v.v2[i] * f.v.v2[i]);
}

}  // namespace

double default_mask_epsilon(const MonogenicField& f, double relative) {
  double peak = 0.0;
  for (std::size_t i = 0; i < f.u.size(); ++i) peak = std::max(peak, amplitude_at(f, i));
  return std::max(relative * peak, std::numeric_limits<double>::min());
}

ScalarField local_amplitude(const MonogenicField& f) {
  ScalarField a(f.width(), f.height());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = amplitude_at(f, i);
  return a;
}

MaskedField local_attenuation(const MonogenicField& f, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "attenuation needs eps > 0");
  MaskedField out{ScalarField(f.width(), f.height()), Mask(f.width(), f.height())};
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    const double a2 = f.u[i] * f.u[i] + f.v.v1[i] * f.v.v1[i] + f.v.v2[i] * f.v.v2[i];
    if (std::sqrt(a2) > eps) {
      out.values[i] = 0.5 * std::log(a2);
      out.valid[i] = 1;
    } else {
      out.values[i] = std::log(eps);
    }
  }
  return out;
}

MaskedField phase_angle(const MonogenicField& f, double eps) {
  require_eps(eps);
  MaskedField out{ScalarField(f.width(), f.height()), Mask(f.width(), f.height())};
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    out.values[i] = std::atan2(f.v.norm_at(i), f.u[i]);
    out.valid[i] = amplitude_at(f, i) > eps ? 1 : 0;
  }
  return out;
}

MaskedVectorField local_orientation(const MonogenicField& f, double eps) {
  require_eps(eps);
  MaskedVectorField out{VectorField(f.width(), f.height()), Mask(f.width(), f.height())};
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    const double n = f.v.norm_at(i);
    if (n > eps) {
      out.values.v1[i] = f.v.v1[i] / n;
      out.values.v2[i] = f.v.v2[i] / n;
      out.valid[i] = 1;
    }
  }
  return out;
}

MaskedVectorField local_phase_vector(const MonogenicField& f, double eps) {
  MaskedVectorField out = local_orientation(f, eps);
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    if (!out.valid[i]) continue;
    const double theta = std::atan2(f.v.norm_at(i), f.u[i]);
    out.values.v1[i] *= theta;
    out.values.v2[i] *= theta;
  }
  return out;
}

MaskedField instantaneous_frequency(const MonogenicField& f, double eps,
                                    scalespace::Stencil stencil) {
  require_eps(eps);
  const VectorField du = scalespace::spatial_gradient(f.u, stencil);
  const VectorField dv1 = scalespace::spatial_gradient(f.v.v1, stencil);
  const VectorField dv2 = scalespace::spatial_gradient(f.v.v2, stencil);

  MaskedField out{ScalarField(f.width(), f.height()), Mask(f.width(), f.height())};
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    if (!(amplitude_at(f, i) > eps)) continue;
    const auto F = cl::Multivector2::paravector(f.u[i], f.v.v1[i], f.v.v2[i]);
    const auto d1F = cl::Multivector2::paravector(du.v1[i], dv1.v1[i], dv2.v1[i]);
    const auto d2F = cl::Multivector2::paravector(du.v2[i], dv1.v2[i], dv2.v2[i]);
    const auto DF = cl::kE1 * d1F + cl::kE2 * d2F;
    out.values[i] = cl::scalar_part(DF * cl::paravector_inverse(F, 0.0));
    out.valid[i] = 1;
  }
  return out;
}

LocalFeatures local_features(const MonogenicField& f, double eps) {
  return LocalFeatures{local_amplitude(f), local_attenuation(f, eps), phase_angle(f, eps),
                       local_orientation(f, eps), local_phase_vector(f, eps)};
}

}  // namespace monogenic::features
