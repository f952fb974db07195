#include "monogenic/verify.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "fft.hpp"
#include "monogenic/clifford.hpp"
#include "monogenic/edgeops.hpp"
#include "monogenic/features.hpp"
#include "monogenic/synthetic.hpp"

namespace monogenic::verify {

using clifford::Multivector2;
using scalespace::ScaleSpace;
using scalespace::Stencil;

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct Polar {
  ScalarField a;
  ScalarField theta;
  VectorField n;
  Mask amp_ok;
  Mask orient_ok;
  std::vector<Multivector2> er;
};

Polar polar(const MonogenicField& f, double eps) {
  const int w = f.width();
  const int h = f.height();
  Polar p{ScalarField(w, h), ScalarField(w, h), VectorField(w, h), Mask(w, h), Mask(w, h), {}};
  p.er.resize(f.u.size());
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    const double u = f.u[i];
    const double vn = f.v.norm_at(i);
    const double amp = std::hypot(u, vn);
    const double theta = std::atan2(vn, u);
    p.theta[i] = theta;
    if (amp > eps) {
      p.a[i] = std::log(amp);
      p.amp_ok[i] = 1;
    }
    if (vn > eps) {
      p.orient_ok[i] = 1;
      p.n.v1[i] = f.v.v1[i] / vn;
      p.n.v2[i] = f.v.v2[i] / vn;
      p.er[i] = clifford::exp_vector(Multivector2::vector(f.v.v1[i], f.v.v2[i]), theta, 0.0);
    } else {
      p.er[i] = Multivector2::scalar(std::cos(theta));
    }
  }
  return p;
}

// d1, d2 of a multivector field, componentwise.
struct MultivectorGradient {
  std::vector<Multivector2> d1;
  std::vector<Multivector2> d2;
};

MultivectorGradient gradient(const std::vector<Multivector2>& m, int w, int h, Stencil st) {
  ScalarField c0(w, h), c1(w, h), c2(w, h), c12(w, h);
  for (std::size_t i = 0; i < m.size(); ++i) {
    c0[i] = m[i].s0;
    c1[i] = m[i].c1;
    c2[i] = m[i].c2;
    c12[i] = m[i].c12;
  }
  const auto g0 = scalespace::spatial_gradient(c0, st);
  const auto g1 = scalespace::spatial_gradient(c1, st);
  const auto g2 = scalespace::spatial_gradient(c2, st);
  const auto g12 = scalespace::spatial_gradient(c12, st);
  MultivectorGradient out;
  out.d1.resize(m.size());
  out.d2.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out.d1[i] = {g0.v1[i], g1.v1[i], g2.v1[i], g12.v1[i]};
    out.d2[i] = {g0.v2[i], g1.v2[i], g2.v2[i], g12.v2[i]};
  }
  return out;
}

Multivector2 dirac_at(const MultivectorGradient& g, std::size_t i) {
  return clifford::kE1 * g.d1[i] + clifford::kE2 * g.d2[i];
}

// D n as a multivector per pixel, n = v/|v|. d_j n comes from the quotient rule
// on d_j v, so sign flips of n between samples are never differenced.
std::vector<Multivector2> dirac_of_orientation(const MonogenicField& f, Stencil st) {
  const auto g1 = scalespace::spatial_gradient(f.v.v1, st);
  const auto g2 = scalespace::spatial_gradient(f.v.v2, st);
  std::vector<Multivector2> out(f.u.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double vn = f.v.norm_at(i);
    if (!(vn > 0.0)) continue;
    const double n1 = f.v.v1[i] / vn;
    const double n2 = f.v.v2[i] / vn;
    auto dn = [&](double a1, double a2) {
      const double proj = n1 * a1 + n2 * a2;
      return Multivector2::vector((a1 - n1 * proj) / vn, (a2 - n2 * proj) / vn);
    };
    out[i] = clifford::kE1 * dn(g1.v1[i], g2.v1[i]) + clifford::kE2 * dn(g1.v2[i], g2.v2[i]);
  }
  return out;
}

Mask intersect(Mask m, const Mask& other) {
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = m[i] && other[i];
  return m;
}

// Polar quantities at s and s +/- delta plus the combined mask.
struct ScaleStencil {
  MonogenicField f;
  Polar p0, pp, pm;
  Mask mask;
  double delta;
};

ScaleStencil scale_stencil(const ScaleSpace& space, double s, double delta, double eps) {
  if (!(delta > 0.0) || !(delta < s)) {
    throw Error(ErrorCode::InvalidArgument, "verification needs 0 < delta < s");
  }
  ScaleStencil st{space.at(s), {}, {}, {}, {}, delta};
  st.p0 = polar(st.f, eps);
  st.pp = polar(space.at(s + delta), eps);
  st.pm = polar(space.at(s - delta), eps);
  st.mask = intersect(intersect(interior_mask(st.f, eps), st.pp.orient_ok), st.pm.orient_ok);
  return st;
}

double scale_diff(const ScaleStencil& st, const ScalarField& plus, const ScalarField& minus,
                  std::size_t i) {
  return (plus[i] - minus[i]) / (2.0 * st.delta);
}

Multivector2 scale_diff_er(const ScaleStencil& st, std::size_t i) {
  return (st.pp.er[i] - st.pm.er[i]) * (1.0 / (2.0 * st.delta));
}

ResidualReport lemma32_raw(const ScaleSpace& space, double s, double delta, double eps) {
  const ScaleStencil st = scale_stencil(space, s, delta, eps);
  ScalarField res(st.f.width(), st.f.height());
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (!st.mask[i]) continue;
    res[i] = std::abs(clifford::scalar_part(scale_diff_er(st, i) * clifford::conjugate(st.p0.er[i])));
  }
  ResidualReport r;
  r.residual = std::move(res);
  r.included = st.mask;
  r.s = s;
  r.delta = delta;
  r.eps = eps;
  return r;
}

double masked_median(const ScalarField& f, const Mask& m) {
  std::vector<double> v;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (m[i]) v.push_back(f[i]);
  }
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 0.5);
}

// Forward-mode dual number for exact first derivatives of closed forms.
struct Dual {
  double v = 0.0;
  double d = 0.0;
};
Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator-(Dual a) { return {-a.v, -a.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
Dual sqrt(Dual a) {
  const double r = std::sqrt(a.v);
  return {r, a.d / (2.0 * r)};
}
Dual log(Dual a) { return {std::log(a.v), a.d / a.v}; }
Dual atan2(Dual y, Dual x) {
  return {std::atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / (x.v * x.v + y.v * y.v)};
}
using std::atan2;
using std::log;
using std::sqrt;

template <class T>
struct Kernel {
  T u, v1, v2;
};

template <class T>
Kernel<T> cauchy_kernel(T x1, T x2, T s) {
  const T q = s * s + x1 * x1 + x2 * x2;
  const T den = q * sqrt(q);
  return {s / den, -x1 / den, -x2 / den};
}

// a and theta of the axial kernel at x = (rho, 0); the axial magnitude is the
// coefficient of -e1.
template <class T>
std::pair<T, T> axial_polar(T rho, T s) {
  const T zero{};
  const Kernel<T> k = cauchy_kernel(rho, zero, s);
  const T v = -k.v1;
  const T a = log(k.u * k.u + v * v) * T{0.5};
  return {a, atan2(v, k.u)};
}

Dual constant(double x) { return {x, 0.0}; }
Dual variable(double x) { return {x, 1.0}; }

std::vector<detail::Complex> spectrum_1d(const std::vector<double>& g) {
  std::vector<detail::Complex> buf(g.begin(), g.end());
  const std::array<int, 1> dims{static_cast<int>(g.size())};
  detail::fft_forward(buf, dims);
  return buf;
}

// Real part of the inverse transform of G(k) * m(k), with m given per signed
// angular frequency and Nyquist flag.
template <class M>
std::vector<double> apply_1d(const std::vector<detail::Complex>& spec, M&& m) {
  const int n = static_cast<int>(spec.size());
  std::vector<detail::Complex> buf(spec.size());
  for (int k = 0; k < n; ++k) {
    const double xi = 2.0 * std::numbers::pi * detail::signed_frequency_index(k, n) / n;
    buf[k] = spec[k] * m(xi, detail::is_nyquist(k, n));
  }
  const std::array<int, 1> dims{n};
  detail::fft_inverse(buf, dims);
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
  return out;
}

struct Pair1d {
  std::vector<double> u, v, ux, vx;
};

// u + i v with v the (standard) Hilbert transform of u, at scale s.
Pair1d poisson_pair_1d(const std::vector<detail::Complex>& spec, double s) {
  using C = detail::Complex;
  const C i1{0.0, 1.0};
  auto hilbert = [&](double xi, bool nyq) -> C {
    if (xi == 0.0 || nyq) return 0.0;
    return -i1 * (xi > 0.0 ? 1.0 : -1.0) * std::exp(-s * std::abs(xi));
  };
  Pair1d p;
  p.u = apply_1d(spec, [&](double xi, bool) -> C { return std::exp(-s * std::abs(xi)); });
  p.v = apply_1d(spec, hilbert);
  p.ux = apply_1d(spec, [&](double xi, bool nyq) -> C {
    return nyq ? C{0.0} : i1 * xi * std::exp(-s * std::abs(xi));
  });
  p.vx = apply_1d(spec, [&](double xi, bool nyq) -> C { return i1 * xi * hilbert(xi, nyq); });
  return p;
}

ScalarField theta_term_component(const Polar& p, const ScalarField& dn, const Mask& m) {
  ScalarField out(dn.width(), dn.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!m[i]) continue;
    const double t = p.theta[i];
    out[i] = (std::sin(t) * std::cos(t) - t) * dn[i];
  }
  return out;
}

// d n / ds from the analytic scale derivative of v.
VectorField orientation_scale_derivative(const MonogenicField& f,
                                         const scalespace::ScaleDerivatives& d, double eps) {
  VectorField out(f.width(), f.height());
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    const double vn = f.v.norm_at(i);
    if (!(vn > eps)) continue;
    const double n1 = f.v.v1[i] / vn;
    const double n2 = f.v.v2[i] / vn;
    const double along = n1 * d.dv_ds.v1[i] + n2 * d.dv_ds.v2[i];
    out.v1[i] = (d.dv_ds.v1[i] - along * n1) / vn;
    out.v2[i] = (d.dv_ds.v2[i] - along * n2) / vn;
  }
  return out;
}

struct ExtraTerm {
  VectorField value;
  VectorField theta_term;
  Mask mask;
  MonogenicField f;
  scalespace::ScaleDerivatives d;
};

ExtraTerm extra_term(const ScaleSpace& space, double s, double eps) {
  ExtraTerm e;
  e.f = space.at(s);
  e.d = space.derivative(s);
  e.mask = interior_mask(e.f, eps);
  const Polar p = polar(e.f, eps);
  const VectorField curvature = edgeops::orientation_curvature_term(e.f, eps);
  const VectorField dn = orientation_scale_derivative(e.f, e.d, eps);
  e.theta_term = VectorField(theta_term_component(p, dn.v1, e.mask),
                             theta_term_component(p, dn.v2, e.mask));
  e.value = VectorField(e.f.width(), e.f.height());
  for (std::size_t i = 0; i < e.f.u.size(); ++i) {
    if (!e.mask[i]) continue;
    e.value.v1[i] = -curvature.v1[i] + e.theta_term.v1[i];
    e.value.v2[i] = -curvature.v2[i] + e.theta_term.v2[i];
  }
  return e;
}

}  // namespace

std::string_view to_string(Statistic s) {
  switch (s) {
    case Statistic::Median: return "median";
    case Statistic::P95: return "p95";
    case Statistic::Sup: return "sup";
  }
  return "?";
}

double ResidualReport::value() const {
  switch (statistic) {
    case Statistic::Median: return median;
    case Statistic::P95: return p95;
    case Statistic::Sup: return sup;
  }
  return sup;
}

void finalize(ResidualReport& r) {
  std::vector<double> v;
  for (std::size_t i = 0; i < r.residual.size(); ++i) {
    if (r.included[i]) v.push_back(r.residual[i]);
  }
  r.count = v.size();
  r.vacuous = v.empty();
  if (r.vacuous) {
    r.median = r.p95 = r.sup = 0.0;
    r.pass = r.comparison == Comparison::AtMost;
    if (r.note.empty()) r.note = "vacuous: every sample masked";
    return;
  }
  std::sort(v.begin(), v.end());
  r.median = quantile_sorted(v, 0.5);
  r.p95 = quantile_sorted(v, 0.95);
  r.sup = v.back();
  const double x = r.value();
  r.pass = r.comparison == Comparison::AtMost ? x <= r.tolerance : x > r.tolerance;
}

ResidualReport make_report(std::string identity, ScalarField residual, Mask included,
                           Statistic statistic, Comparison comparison, double tolerance) {
  if (!residual.same_shape(included)) {
    throw Error(ErrorCode::InvalidArgument, "residual and mask differ in shape");
  }
  ResidualReport r;
  r.identity = std::move(identity);
  r.residual = std::move(residual);
  r.included = std::move(included);
  r.statistic = statistic;
  r.comparison = comparison;
  r.tolerance = tolerance;
  finalize(r);
  return r;
}

CauchyKernelSample cauchy_kernel_oracle(double x1, double x2, double s) {
  if (x1 == 0.0 && x2 == 0.0 && s == 0.0) {
    throw Error(ErrorCode::OriginSingularity, "Cauchy kernel is singular at the origin");
  }
  const Kernel<double> k = cauchy_kernel(x1, x2, s);
  const double rho = std::hypot(x1, x2);
  CauchyKernelSample out;
  out.u = k.u;
  out.v1 = k.v1;
  out.v2 = k.v2;
  out.a = -std::log(s * s + rho * rho);
  out.theta = std::atan2(rho, s);
  if (rho > 0.0) {
    out.r1 = -(x1 / rho) * out.theta;
    out.r2 = -(x2 / rho) * out.theta;
  }
  return out;
}

Mask interior_mask(const MonogenicField& f, double eps, int band) {
  const int w = f.width();
  const int h = f.height();
  Mask valid(w, h);
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    const double vn = f.v.norm_at(i);
    valid[i] = std::hypot(f.u[i], vn) > eps && vn > eps;
  }
  Mask out(w, h);
  for (int y = band; y < h - band; ++y) {
    for (int x = band; x < w - band; ++x) {
      bool ok = true;
      for (int dy = -band; dy <= band && ok; ++dy) {
        for (int dx = -band; dx <= band && ok; ++dx) ok = valid(x + dx, y + dy) != 0;
      }
      out(x, y) = ok;
    }
  }
  return out;
}

Theorem31Reports check_theorem31(const ScaleSpace& space, double s, double delta, double eps,
                                 double tolerance) {
  const ScaleStencil st = scale_stencil(space, s, delta, eps);
  const int w = st.f.width();
  const int h = st.f.height();
  const MultivectorGradient dE = gradient(st.p0.er, w, h, Stencil::Central4);
  const VectorField da = scalespace::spatial_gradient(st.p0.a, Stencil::Central4);
  const std::vector<Multivector2> dn = dirac_of_orientation(st.f, Stencil::Central4);

  ScalarField res_amp(w, h), res_vec(w, h);
  for (std::size_t i = 0; i < res_amp.size(); ++i) {
    if (!st.mask[i]) continue;
    const double a_s = scale_diff(st, st.pp.a, st.pm.a, i);
    const Multivector2 er_inv = clifford::conjugate(st.p0.er[i]);
    res_amp[i] = std::abs(a_s + clifford::scalar_part(dirac_at(dE, i) * er_inv));

    const double t = st.p0.theta[i];
    const double tp = st.pp.theta[i];
    const double tm = st.pm.theta[i];
    const double n1 = st.p0.n.v1[i];
    const double n2 = st.p0.n.v2[i];
    const double dn1 = scale_diff(st, st.pp.n.v1, st.pm.n.v1, i);
    const double dn2 = scale_diff(st, st.pp.n.v2, st.pm.n.v2, i);
    const double dr1 = (st.pp.n.v1[i] * tp - st.pm.n.v1[i] * tm) / (2.0 * delta);
    const double dr2 = (st.pp.n.v2[i] * tp - st.pm.n.v2[i] * tm) / (2.0 * delta);
    const Multivector2 curv = dn[i] * Multivector2::vector(n1, n2);
    const double sin2 = std::sin(t) * std::sin(t);
    const double k = std::sin(t) * std::cos(t) - t;
    const double e1 = dr1 + da.v1[i] - sin2 * curv.c1 + k * dn1;
    const double e2 = dr2 + da.v2[i] - sin2 * curv.c2 + k * dn2;
    res_vec[i] = std::hypot(e1, e2);
  }
  Theorem31Reports out{
      make_report("theorem31_amplitude", std::move(res_amp), st.mask, Statistic::Median,
                  Comparison::AtMost, tolerance),
      make_report("theorem31_phase_vector", std::move(res_vec), st.mask, Statistic::Median,
                  Comparison::AtMost, tolerance)};
  for (ResidualReport* r : {&out.amplitude, &out.phase_vector}) {
    r->s = s;
    r->delta = delta;
    r->eps = eps;
  }
  return out;
}

ResidualReport check_lemma_scalar_zero(const ScaleSpace& space, double s, double delta,
                                       double eps, double tolerance) {
  ResidualReport r = lemma32_raw(space, s, delta, eps);
  r.identity = "lemma32_scalar_zero";
  r.statistic = Statistic::Median;
  r.comparison = Comparison::AtMost;
  r.tolerance = tolerance;
  finalize(r);
  return r;
}

ResidualReport check_lemma_scalar_zero_ratio(const ScaleSpace& space, double s, double delta,
                                             double eps, double lo, double hi) {
  const ResidualReport full = lemma32_raw(space, s, delta, eps);
  const ResidualReport half = lemma32_raw(space, s, 0.5 * delta, eps);
  const Mask m = intersect(full.included, half.included);
  const double num = masked_median(full.residual, m);
  const double den = masked_median(half.residual, m);
  ScalarField dev(1, 1);
  Mask inc(1, 1, 1);
  double ratio = 0.0;
  if (den > 0.0) {
    ratio = num / den;
    dev[0] = std::abs(ratio - 0.5 * (lo + hi));
  } else {
    inc[0] = 0;
  }
  ResidualReport r = make_report("lemma32_halving_ratio_deviation", std::move(dev), std::move(inc),
                                 Statistic::Sup, Comparison::AtMost, 0.5 * (hi - lo));
  r.s = s;
  r.delta = delta;
  r.eps = eps;
  char buf[96];
  std::snprintf(buf, sizeof buf, "ratio=%.6g (median %.3e at delta, %.3e at delta/2)", ratio,
                num, den);
  r.note = buf;
  return r;
}

Lemma33Reports check_lemma33(const ScaleSpace& space, double s, double delta, double eps,
                             double tolerance, double grade_tolerance) {
  const ScaleStencil st = scale_stencil(space, s, delta, eps);
  const int w = st.f.width();
  const int h = st.f.height();
  const MultivectorGradient dE = gradient(st.p0.er, w, h, Stencil::Central4);
  const std::vector<Multivector2> dn = dirac_of_orientation(st.f, Stencil::Central4);

  ScalarField res_scale(w, h), res_dirac(w, h), rg(w, h);
  for (std::size_t i = 0; i < res_scale.size(); ++i) {
    if (!st.mask[i]) continue;
    const Multivector2 er_inv = clifford::conjugate(st.p0.er[i]);
    const double t = st.p0.theta[i];
    const double tp = st.pp.theta[i];
    const double tm = st.pm.theta[i];
    const double k = std::sin(t) * std::cos(t) - t;
    const double sin2 = std::sin(t) * std::sin(t);

    const Multivector2 ls = scale_diff_er(st, i) * er_inv;
    const double dn1 = scale_diff(st, st.pp.n.v1, st.pm.n.v1, i);
    const double dn2 = scale_diff(st, st.pp.n.v2, st.pm.n.v2, i);
    const double dr1 = (st.pp.n.v1[i] * tp - st.pm.n.v1[i] * tm) / (2.0 * delta);
    const double dr2 = (st.pp.n.v2[i] * tp - st.pm.n.v2[i] * tm) / (2.0 * delta);
    res_scale[i] = std::hypot(ls.c1 - k * dn1 - dr1, ls.c2 - k * dn2 - dr2);

    const Multivector2 ld = dirac_at(dE, i) * er_inv;
    const Multivector2 curv = dn[i] * Multivector2::vector(st.p0.n.v1[i], st.p0.n.v2[i]);
    res_dirac[i] = std::hypot(ld.c1 + sin2 * curv.c1, ld.c2 + sin2 * curv.c2);
    rg[i] = std::abs(curv.s0) + std::abs(curv.c12);
  }
  Lemma33Reports out{
      make_report("lemma33_scale_rotor", std::move(res_scale), st.mask, Statistic::Median,
                  Comparison::AtMost, tolerance),
      make_report("lemma33_dirac_rotor", std::move(res_dirac), st.mask, Statistic::Median,
                  Comparison::AtMost, tolerance),
      make_report("lemma33_curvature_grade", std::move(rg), st.mask, Statistic::Sup,
                  Comparison::AtMost, grade_tolerance)};
  for (ResidualReport* r : {&out.scale_rotor, &out.dirac_rotor, &out.grade}) {
    r->s = s;
    r->delta = delta;
    r->eps = eps;
  }
  return out;
}

std::vector<double> default_axial_radii() {
  std::vector<double> r;
  for (int i = 5; i <= 50; ++i) r.push_back(0.1 * i);
  return r;
}

ResidualReport check_axial_corollary(const std::vector<double>& s_values,
                                     const std::vector<double>& radii, double tolerance) {
  if (s_values.empty() || radii.empty()) {
    throw Error(ErrorCode::InvalidArgument, "axial check needs scales and radii");
  }
  constexpr double m = 2.0;
  ScalarField res(static_cast<int>(radii.size()), static_cast<int>(s_values.size()));
  for (std::size_t j = 0; j < s_values.size(); ++j) {
    const double s = s_values[j];
    if (!(s > 0.0)) throw Error(ErrorCode::NegativeScale, "axial check needs s > 0");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double rho = radii[i];
      if (!(rho > 0.1)) {
        throw Error(ErrorCode::OriginSingularity, "axial check samples rho > 0.1 only");
      }
      const auto [a_r, t_r] = axial_polar(variable(rho), constant(s));
      const auto [a_s, t_s] = axial_polar(constant(rho), variable(s));
      const double t = t_r.v;
      const double amplitude_res = -a_s.d - t_r.d - (m - 1.0) / rho * std::sin(t) * std::cos(t);
      const double angle_res = t_s.d - a_r.d - (m - 1.0) / rho * std::sin(t) * std::sin(t);
      res(static_cast<int>(i), static_cast<int>(j)) = std::max(std::abs(amplitude_res), std::abs(angle_res));
    }
  }
  Mask all(res.width(), res.height(), 1);
  return make_report("axial_corollary", std::move(res), std::move(all), Statistic::Sup,
                     Comparison::AtMost, tolerance);
}

ResidualReport check_axial_reduction_1d(double s, double tolerance) {
  constexpr int n = 256;
  const double delta = scalespace::default_fd_step(s);
  if (!(s > delta)) throw Error(ErrorCode::NegativeScale, "1D reduction needs s > delta");
  std::vector<double> g(n);
  for (int x = 0; x < n; ++x) {
    const double t = 2.0 * std::numbers::pi * x / n;
    g[x] = 1.0 + 0.4 * std::cos(3.0 * t + 0.3) + 0.25 * std::cos(7.0 * t + 1.1) +
           0.1 * std::sin(11.0 * t);
  }
  const auto spec = spectrum_1d(g);
  const Pair1d p0 = poisson_pair_1d(spec, s);
  const Pair1d pp = poisson_pair_1d(spec, s + delta);
  const Pair1d pm = poisson_pair_1d(spec, s - delta);
  ScalarField res(n, 1);
  for (int x = 0; x < n; ++x) {
    const double a2 = p0.u[x] * p0.u[x] + p0.v[x] * p0.v[x];
    const double a_x = (p0.u[x] * p0.ux[x] + p0.v[x] * p0.vx[x]) / a2;
    const double t_x = (p0.u[x] * p0.vx[x] - p0.v[x] * p0.ux[x]) / a2;
    const double ap = 0.5 * std::log(pp.u[x] * pp.u[x] + pp.v[x] * pp.v[x]);
    const double am = 0.5 * std::log(pm.u[x] * pm.u[x] + pm.v[x] * pm.v[x]);
    double dt = std::atan2(pp.v[x], pp.u[x]) - std::atan2(pm.v[x], pm.u[x]);
    dt = std::remainder(dt, 2.0 * std::numbers::pi);
    const double a_s = (ap - am) / (2.0 * delta);
    const double t_s = dt / (2.0 * delta);
    res(x, 0) = std::max(std::abs(a_s + t_x), std::abs(a_x - t_s));
  }
  Mask all(n, 1, 1);
  ResidualReport r = make_report("axial_reduction_1d", std::move(res), std::move(all),
                                 Statistic::Sup, Comparison::AtMost, tolerance);
  r.s = s;
  r.delta = delta;
  return r;
}

std::vector<OraclePoint> default_oracle_points(std::size_t n) {
  std::mt19937_64 rng(0xCA0C11ULL);
  std::uniform_real_distribution<double> xs(-3.0, 3.0);
  std::uniform_real_distribution<double> ss(0.2, 3.0);
  std::vector<OraclePoint> pts;
  while (pts.size() < n) {
    const OraclePoint p{xs(rng), xs(rng), ss(rng)};
    if (std::hypot(p.x1, p.x2) > 0.1) pts.push_back(p);
  }
  return pts;
}

ResidualReport check_cauchy_oracle(const std::vector<OraclePoint>& points, double tolerance) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "no oracle points");
  const int n = static_cast<int>(points.size());
  MonogenicField f{ScalarField(n, 1), VectorField(n, 1), 0.0};
  for (int i = 0; i < n; ++i) {
    const CauchyKernelSample k = cauchy_kernel_oracle(points[i].x1, points[i].x2, points[i].s);
    f.u[i] = k.u;
    f.v.v1[i] = k.v1;
    f.v.v2[i] = k.v2;
  }
  constexpr double eps = DBL_MIN;
  const auto amplitude = features::local_amplitude(f);
  const auto atten = features::local_attenuation(f, eps);
  const auto phase = features::local_phase_vector(f, eps);
  ScalarField res(n, 1);
  Mask inc(n, 1);
  for (int i = 0; i < n; ++i) {
    const CauchyKernelSample k = cauchy_kernel_oracle(points[i].x1, points[i].x2, points[i].s);
    inc[i] = atten.valid[i] && phase.valid[i];
    const double da = std::abs(atten.values[i] - k.a);
    const double dr = std::hypot(phase.values.v1[i] - k.r1, phase.values.v2[i] - k.r2);
    const double damp = std::abs(amplitude[i] - std::exp(k.a)) / std::exp(k.a);
    res[i] = std::max({da, dr, damp});
  }
  return make_report("cauchy_kernel_oracle", std::move(res), std::move(inc), Statistic::Sup,
                     Comparison::AtMost, tolerance);
}

namespace {

struct FrequencyPair {
  ScalarField lhs;  // instantaneous frequency
  ScalarField a_s;
  Mask mask;
  ScaleStencil st;
};

FrequencyPair frequency_pair(const ScaleSpace& space, double s, double delta, double eps) {
  FrequencyPair fp{{}, {}, {}, scale_stencil(space, s, delta, eps)};
  const auto inst = features::instantaneous_frequency(fp.st.f, eps, Stencil::Central4);
  fp.lhs = inst.values;
  fp.mask = intersect(fp.st.mask, inst.valid);
  fp.a_s = ScalarField(fp.st.f.width(), fp.st.f.height());
  for (std::size_t i = 0; i < fp.a_s.size(); ++i) {
    if (fp.mask[i]) fp.a_s[i] = scale_diff(fp.st, fp.st.pp.a, fp.st.pm.a, i);
  }
  return fp;
}

}  // namespace

ResidualReport check_theorem34(const ScaleSpace& space, double s, double delta, double eps,
                               double tolerance) {
  FrequencyPair fp = frequency_pair(space, s, delta, eps);
  double peak = 0.0;
  for (std::size_t i = 0; i < fp.a_s.size(); ++i) {
    if (fp.mask[i]) peak = std::max(peak, std::abs(fp.a_s[i]));
  }
  ScalarField res(fp.a_s.width(), fp.a_s.height());
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (!fp.mask[i]) continue;
    if (!(std::abs(fp.a_s[i]) > 1e-8 * peak)) {
      fp.mask[i] = 0;
      continue;
    }
    res[i] = std::abs(fp.lhs[i] + fp.a_s[i]) / std::abs(fp.a_s[i]);
  }
  ResidualReport r = make_report("theorem34_relative", std::move(res), fp.mask,
                                 Statistic::Median, Comparison::AtMost, tolerance);
  r.s = s;
  r.delta = delta;
  r.eps = eps;
  return r;
}

ResidualReport check_theorem34_absolute(const ScaleSpace& space, double s, double delta,
                                        double eps, double tolerance) {
  const FrequencyPair fp = frequency_pair(space, s, delta, eps);
  ScalarField res(fp.a_s.width(), fp.a_s.height());
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (fp.mask[i]) res[i] = std::abs(fp.lhs[i] + fp.a_s[i]);
  }
  ResidualReport r = make_report("theorem34_absolute", std::move(res), fp.mask, Statistic::Sup,
                                 Comparison::AtMost, tolerance);
  r.s = s;
  r.delta = delta;
  r.eps = eps;
  return r;
}

ResidualReport check_dpc_extrema_mismatch(const ScaleSpace& space, double s, double eps,
                                          Comparison comparison, double tolerance) {
  const ExtraTerm e = extra_term(space, s, eps);
  ScalarField res(e.f.width(), e.f.height());
  for (std::size_t i = 0; i < res.size(); ++i) res[i] = e.value.norm_at(i);
  ResidualReport r =
      make_report(comparison == Comparison::AtLeast ? "mismatch_extra_term_floor"
                                                    : "mismatch_extra_term_plane",
                  std::move(res), e.mask, Statistic::Sup, comparison, tolerance);
  r.s = s;
  r.eps = eps;
  return r;
}

ResidualReport check_mismatch_consistency(const ScaleSpace& space, double s, double eps,
                                          double tolerance) {
  const ExtraTerm e = extra_term(space, s, eps);
  const auto dpc = edgeops::dpc_gradient(e.f, e.d, eps);
  const auto mdpc = edgeops::mdpc_gradient(e.f, e.d, eps);
  ScalarField res(e.f.width(), e.f.height());
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (!e.mask[i]) continue;
    const double x1 = mdpc.g1[i] - dpc.g1[i] + e.theta_term.v1[i];
    const double x2 = mdpc.g2[i] - dpc.g2[i] + e.theta_term.v2[i];
    res[i] = std::hypot(x1 - e.value.v1[i], x2 - e.value.v2[i]);
  }
  ResidualReport r = make_report("mismatch_consistency", std::move(res), e.mask, Statistic::Sup,
                                 Comparison::AtMost, tolerance);
  r.s = s;
  r.eps = eps;
  return r;
}

ScalarField instantaneous_frequency_expansion(const MonogenicField& f, double eps,
                                              Stencil stencil) {
  // Derivatives of theta and n follow from those of u and v by the chain rule;
  // differencing theta and n themselves fails near zeros of v.
  const VectorField gu = scalespace::spatial_gradient(f.u, stencil);
  const VectorField gv1 = scalespace::spatial_gradient(f.v.v1, stencil);
  const VectorField gv2 = scalespace::spatial_gradient(f.v.v2, stencil);
  ScalarField out(f.width(), f.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double u = f.u[i];
    const double vn = f.v.norm_at(i);
    if (!(vn > eps)) continue;
    const double a2 = u * u + vn * vn;
    const double n1 = f.v.v1[i] / vn;
    const double n2 = f.v.v2[i] / vn;
    const Multivector2 n = Multivector2::vector(n1, n2);
    const std::array<double, 2> du{gu.v1[i], gu.v2[i]};
    const std::array<Multivector2, 2> dv{Multivector2::vector(gv1.v1[i], gv2.v1[i]),
                                         Multivector2::vector(gv1.v2[i], gv2.v2[i])};
    Multivector2 dtheta;
    Multivector2 dn;
    for (int j = 0; j < 2; ++j) {
      const double along = n1 * dv[j].c1 + n2 * dv[j].c2;  // d_j |v|
      const Multivector2 dnj = (dv[j] - n * along) * (1.0 / vn);
      const double dthj = (u * along - vn * du[j]) / a2;
      const Multivector2 ej = j == 0 ? clifford::kE1 : clifford::kE2;
      dn = dn + ej * dnj;
      dtheta = dtheta + ej * dthj;
    }
    const double t = std::atan2(vn, u);
    out[i] = clifford::scalar_part(dn * (std::sin(t) * std::cos(t))) +
             clifford::scalar_part(dtheta * n);
  }
  return out;
}

ResidualReport check_phase_derivative_expansion(const MonogenicField& f, double eps,
                                                double tolerance) {
  const ScalarField rhs = instantaneous_frequency_expansion(f, eps, Stencil::Central4);
  const auto lhs = features::instantaneous_frequency(f, eps, Stencil::Central4);
  const Mask mask = intersect(interior_mask(f, eps), lhs.valid);
  ScalarField res(f.width(), f.height());
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (mask[i]) res[i] = std::abs(lhs.values[i] - rhs[i]);
  }
  ResidualReport r = make_report("phase_derivative_expansion", std::move(res), mask,
                                 Statistic::Sup, Comparison::AtMost, tolerance);
  r.s = f.scale;
  r.eps = eps;
  return r;
}

std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::Theorem31: return "theorem31";
    case Suite::Lemma32: return "lemma32";
    case Suite::Lemma33: return "lemma33";
    case Suite::Axial: return "axial";
    case Suite::Theorem34: return "theorem34";
    case Suite::Mismatch: return "mismatch";
  }
  return "?";
}

std::optional<Suite> parse_suite(std::string_view name) {
  for (Suite s : kAllSuites) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

ScalarField reference_image() {
  return synthetic::band_limited_random(128, 128, 4, 20240611ULL, 1.0, 0.3);
}

ScalarField blob_image() { return synthetic::radial_blob(128, 128, 8.0); }

ScalarField plane_image() {
  const double omega = 2.0 * std::numbers::pi * std::hypot(5.0, 3.0) / 128.0;
  return synthetic::plane_wave(128, 128, omega, std::atan2(3.0, 5.0));
}

std::vector<ResidualReport> run_suite(Suite suite, const Tolerances& tol) {
  const double s = kReferenceScale;
  const double delta = scalespace::default_fd_step(s);
  auto eps_for = [&](const ScaleSpace& sp) {
    return features::default_mask_epsilon(sp.at(s));
  };
  std::vector<ResidualReport> out;
  switch (suite) {
    case Suite::Theorem31: {
      const ScaleSpace sp(reference_image());
      auto r = check_theorem31(sp, s, delta, eps_for(sp), tol.theorem31);
      out.push_back(std::move(r.amplitude));
      out.push_back(std::move(r.phase_vector));
      break;
    }
    case Suite::Lemma32: {
      const ScaleSpace sp(reference_image());
      const double eps = eps_for(sp);
      out.push_back(check_lemma_scalar_zero(sp, s, delta, eps, tol.lemma32));
      out.push_back(check_lemma_scalar_zero_ratio(sp, s, delta, eps, tol.lemma32_ratio_lo,
                                                  tol.lemma32_ratio_hi));
      break;
    }
    case Suite::Lemma33: {
      const ScaleSpace sp(reference_image());
      auto r = check_lemma33(sp, s, delta, eps_for(sp), tol.lemma33, tol.lemma33_grade);
      out.push_back(std::move(r.scale_rotor));
      out.push_back(std::move(r.dirac_rotor));
      out.push_back(std::move(r.grade));
      break;
    }
    case Suite::Axial:
      out.push_back(check_axial_corollary({0.5, 1.0, 2.0}, default_axial_radii(), tol.axial));
      out.push_back(check_axial_reduction_1d(1.0, tol.axial_1d));
      out.push_back(check_cauchy_oracle(default_oracle_points(), tol.cauchy_oracle));
      break;
    case Suite::Theorem34: {
      const ScaleSpace sp(reference_image());
      const double eps = eps_for(sp);
      out.push_back(check_theorem34(sp, s, delta, eps, tol.theorem34));
      const ScaleSpace plane(synthetic::plane_wave(128, 128, std::numbers::pi / 8.0));
      ResidualReport pr =
          check_theorem34_absolute(plane, s, delta, eps_for(plane), tol.theorem34_plane);
      pr.identity = "theorem34_plane_wave";
      out.push_back(std::move(pr));
      out.push_back(check_phase_derivative_expansion(sp.at(s), eps, tol.phase_expansion));
      break;
    }
    case Suite::Mismatch: {
      const ScaleSpace blob(blob_image());
      const ScaleSpace plane(plane_image());
      out.push_back(check_dpc_extrema_mismatch(blob, s, eps_for(blob), Comparison::AtLeast,
                                               tol.mismatch_floor));
      out.push_back(check_dpc_extrema_mismatch(plane, s, eps_for(plane), Comparison::AtMost,
                                               tol.mismatch_plane));
      out.push_back(check_mismatch_consistency(blob, s, eps_for(blob), tol.mismatch_consistency));
      break;
    }
  }
  return out;
}

std::string to_csv(const std::vector<ResidualReport>& reports) {
  std::ostringstream os;
  os << "identity,statistic,value,tolerance,pass,comparison,count,median,p95,sup,s,delta,eps,"
        "vacuous\n";
  char buf[512];
  for (const ResidualReport& r : reports) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.6e,%.6e,%s,%s,%zu,%.6e,%.6e,%.6e,%.6g,%.6g,%.6e,%s\n",
                  r.identity.c_str(), std::string(to_string(r.statistic)).c_str(), r.value(),
                  r.tolerance, r.pass ? "true" : "false",
                  r.comparison == Comparison::AtMost ? "at_most" : "greater_than", r.count,
                  r.median, r.p95, r.sup, r.s, r.delta, r.eps, r.vacuous ? "true" : "false");
    os << buf;
  }
  return os.str();
}

}  // namespace monogenic::verify
