#include "monogenic/edgeops.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <numbers>

#include "monogenic/clifford.hpp"
#include "monogenic/features.hpp"

namespace monogenic::edgeops {

namespace cl = monogenic::clifford;
using scalespace::ScaleDerivatives;
using scalespace::spatial_gradient;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Canny: return "canny";
    case Method::Sobel: return "sobel";
    case Method::Dpc: return "dpc";
    case Method::La: return "la";
    case Method::Mdpc: return "mdpc";
    case Method::LaMdpc: return "la_mdpc";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

bool is_phase_method(Method m) { return m != Method::Canny && m != Method::Sobel; }

GradientMap make_gradient_map(ScalarField g1, ScalarField g2, Method method, double scale) {
  if (!g1.same_shape(g2)) throw Error(ErrorCode::InvalidArgument, "gradient shape mismatch");
  ScalarField mag(g1.width(), g1.height());
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::hypot(g1[i], g2[i]);
  return GradientMap{std::move(g1), std::move(g2), std::move(mag), method, scale};
}

std::size_t EdgeMap::count() const {
  return static_cast<std::size_t>(std::count(edges.samples().begin(), edges.samples().end(), 1));
}

void DetectorConfig::validate() const {
  if (!std::isfinite(scale) || scale <= 0.0) {
    throw Error(ErrorCode::NegativeScale, "scale must be > 0");
  }
  if (!(nms_radius > 0.0) || !std::isfinite(nms_radius)) {
    throw Error(ErrorCode::InvalidArgument, "nms radius must be > 0");
  }
  if (!(low < high)) throw Error(ErrorCode::BadThresholds, "low threshold must be < high");
  if (fd_step < 0.0 || (derivative_mode == scalespace::DerivativeMode::FiniteDifference &&
                        fd_step >= scale)) {
    throw Error(ErrorCode::InvalidArgument, "finite-difference step must satisfy 0 < delta < s");
  }
  if (!(mask_eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "mask epsilon must be > 0");
  if (pad < 0) throw Error(ErrorCode::InvalidArgument, "padding must be >= 0");
  if (!(canny_sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "canny sigma must be > 0");
  if (!(normalize_percentile >= 0.0 && normalize_percentile <= 1.0) || !(normalize_target > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "bad magnitude normalization parameters");
  }
}

namespace {

double squared_amplitude(const MonogenicField& f, std::size_t i) {
  return f.u[i] * f.u[i] + f.v.v1[i] * f.v.v1[i] + f.v.v2[i] * f.v.v2[i];
}

ScalarField difference(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace

GradientMap dpc_gradient(const MonogenicField& f, const ScaleDerivatives& d, double eps) {
  ScalarField g1(f.width(), f.height());
  ScalarField g2(f.width(), f.height());
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    const double a2 = squared_amplitude(f, i);
    if (!(std::sqrt(a2) > eps)) continue;
    g1[i] = (f.u[i] * d.dv_ds.v1[i] - f.v.v1[i] * d.du_ds[i]) / a2;
    g2[i] = (f.u[i] * d.dv_ds.v2[i] - f.v.v2[i] * d.du_ds[i]) / a2;
  }
  return make_gradient_map(std::move(g1), std::move(g2), Method::Dpc, f.scale);
}

GradientMap la_gradient(const MonogenicField& f, double eps) {
  const VectorField du = spatial_gradient(f.u);
  const VectorField dv1 = spatial_gradient(f.v.v1);
  const VectorField dv2 = spatial_gradient(f.v.v2);

  ScalarField g1(f.width(), f.height());
  ScalarField g2(f.width(), f.height());
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    const double a2 = squared_amplitude(f, i);
    if (!(std::sqrt(a2) > eps)) continue;
    // |v| D|v| = <v, D v>; |v| has a kink where v vanishes, so it is not
    // differenced directly.
    const double w1 = f.v.v1[i] * dv1.v1[i] + f.v.v2[i] * dv2.v1[i];
    const double w2 = f.v.v1[i] * dv1.v2[i] + f.v.v2[i] * dv2.v2[i];
    g1[i] = (f.u[i] * du.v1[i] + w1) / a2;
    g2[i] = (f.u[i] * du.v2[i] + w2) / a2;
  }
  return make_gradient_map(std::move(g1), std::move(g2), Method::La, f.scale);
}

VectorField orientation_curvature_term(const MonogenicField& f, double eps,
                                       CurvatureEvaluation how) {
  const VectorField dv1 = spatial_gradient(f.v.v1);
  const VectorField dv2 = spatial_gradient(f.v.v2);

  VectorField out(f.width(), f.height());
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    const double vn = f.v.norm_at(i);
    const double a2 = squared_amplitude(f, i);
    if (!(vn > eps) || !(std::sqrt(a2) > eps)) continue;
    const double n1 = f.v.v1[i] / vn;
    const double n2 = f.v.v2[i] / vn;
    // d_j n = (d_j v - n <n, d_j v>) / |v|
    const double p1 = n1 * dv1.v1[i] + n2 * dv2.v1[i];
    const double p2 = n1 * dv1.v2[i] + n2 * dv2.v2[i];
    const double d1n1 = (dv1.v1[i] - n1 * p1) / vn;
    const double d1n2 = (dv2.v1[i] - n2 * p1) / vn;
    const double d2n1 = (dv1.v2[i] - n1 * p2) / vn;
    const double d2n2 = (dv2.v2[i] - n2 * p2) / vn;
    const double sin2 = vn * vn / a2;

    double w1 = 0.0;
    double w2 = 0.0;
    if (how == CurvatureEvaluation::CliffordProduct) {
      const auto Dn = cl::kE1 * cl::Multivector2::vector(d1n1, d1n2) +
                      cl::kE2 * cl::Multivector2::vector(d2n1, d2n2);
      const auto w = cl::vector_part(Dn * cl::Multivector2::vector(n1, n2));
      w1 = w.c1;
      w2 = w.c2;
    } else {
      // D n = -div n + curl n e12;  (-d + c e12)(n1 e1 + n2 e2)
      const double div = d1n1 + d2n2;
      const double curl = d1n2 - d2n1;
      w1 = -div * n1 - curl * n2;
      w2 = curl * n1 - div * n2;
    }
    out.v1[i] = sin2 * w1;
    out.v2[i] = sin2 * w2;
  }
  return out;
}

GradientMap mdpc_gradient(const MonogenicField& f, const ScaleDerivatives& d, double eps) {
  const GradientMap dpc = dpc_gradient(f, d, eps);
  const VectorField corr = orientation_curvature_term(f, eps);
  return make_gradient_map(difference(dpc.g1, corr.v1), difference(dpc.g2, corr.v2),
                           Method::Mdpc, f.scale);
}

GradientMap mixed_gradient(const MonogenicField& f, const ScaleDerivatives& d, double eps) {
  const GradientMap mdpc = mdpc_gradient(f, d, eps);
  const GradientMap la = la_gradient(f, eps);
  return make_gradient_map(difference(mdpc.g1, la.g1), difference(mdpc.g2, la.g2),
                           Method::LaMdpc, f.scale);
}

GradientMap sobel_gradient(const ScalarField& img) {
  if (img.width() < 3 || img.height() < 3) {
    throw Error(ErrorCode::ImageTooSmall, "sobel needs at least 3x3 pixels");
  }
  const int w = img.width();
  const int h = img.height();
  auto at = [&](int x, int y) {
    return img(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };
  ScalarField g1(w, h);
  ScalarField g2(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      g1(x, y) = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1)) -
                 (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
      g2(x, y) = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1)) -
                 (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
    }
  }
  return make_gradient_map(std::move(g1), std::move(g2), Method::Sobel, 0.0);
}

namespace {

ScalarField gaussian_smooth(const ScalarField& img, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
    sum += kernel[k + radius];
  }
  for (double& k : kernel) k /= sum;

  const int w = img.width();
  const int h = img.height();
  ScalarField tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += kernel[k + radius] * img(reflect_index(x + k, w), y);
      tmp(x, y) = acc;
    }
  }
  ScalarField out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) acc += kernel[k + radius] * tmp(x, reflect_index(y + k, h));
      out(x, y) = acc;
    }
  }
  return out;
}

}  // namespace

GradientMap canny_gradient(const ScalarField& img, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "canny sigma must be > 0");
  VectorField g = spatial_gradient(gaussian_smooth(img, sigma));
  return make_gradient_map(std::move(g.v1), std::move(g.v2), Method::Canny, 0.0);
}

namespace {

double sample_bilinear(const ScalarField& f, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(f.width() - 1));
  y = std::clamp(y, 0.0, static_cast<double>(f.height() - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, f.width() - 1);
  const int y1 = std::min(y0 + 1, f.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = (1.0 - fx) * f(x0, y0) + fx * f(x1, y0);
  const double bottom = (1.0 - fx) * f(x0, y1) + fx * f(x1, y1);
  return (1.0 - fy) * top + fy * bottom;
}

// 8-neighbours starting east, counter-clockwise (y grows downwards).
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

// Deleting a pixel with exactly one 8-connected foreground run around it (and
// at least two foreground neighbours) keeps the topology and the line ends.
bool deletable(const Mask& m, int x, int y) {
  int p[9];
  int count = 0;
  for (int k = 0; k < 8; ++k) {
    const int nx = x + kDx[k];
    const int ny = y + kDy[k];
    p[k] = nx >= 0 && ny >= 0 && nx < m.width() && ny < m.height() && m(nx, ny) != 0;
    count += p[k];
  }
  p[8] = p[0];
  if (count < 2) return false;
  int yokoi = 0;
  for (int k = 0; k < 8; k += 2) {
    const int a = 1 - p[k];
    const int b = 1 - p[k + 1];
    const int c = 1 - p[(k + 2) % 8];
    yokoi += a - a * b * c;
  }
  return yokoi == 1;
}

// Thins ridges that are more than one pixel wide across the gradient: a pixel
// goes when its neighbour along the (8-way quantized) gradient direction is
// still present and stronger, and removing it does not change connectivity.
// Ties are broken towards the larger index. Weakest pixels are visited first,
// repeated until nothing changes.
void thin_across_gradient(Mask& keep, const GradientMap& g) {
  const int w = keep.width();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return g.magnitude[a] < g.magnitude[b];
  });
  auto stronger = [&](std::size_t q, std::size_t p) {
    return g.magnitude[q] > g.magnitude[p] || (g.magnitude[q] == g.magnitude[p] && q > p);
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i : order) {
      if (!keep[i]) continue;
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      const double angle = std::atan2(-g.g2[i], g.g1[i]);
      const int k = static_cast<int>(std::lround(angle / (std::numbers::pi / 4.0))) & 7;
      bool dominated = false;
      for (int sign : {1, -1}) {
        const int nx = x + sign * kDx[k];
        const int ny = y + sign * kDy[k];
        if (nx < 0 || ny < 0 || nx >= w || ny >= keep.height() || !keep(nx, ny)) continue;
        dominated = dominated || stronger(static_cast<std::size_t>(ny) * w + nx, i);
      }
      if (dominated && deletable(keep, x, y)) {
        keep[i] = 0;
        changed = true;
      }
    }
  }
}

}  // namespace

GradientMap non_maximum_suppression(const GradientMap& g, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "nms radius must be > 0");
  const int w = g.magnitude.width();
  const int h = g.magnitude.height();
  Mask keep(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = g.magnitude(x, y);
      if (!(m > 0.0)) continue;
      const double dx = radius * g.g1(x, y) / m;
      const double dy = radius * g.g2(x, y) / m;
      if (m >= sample_bilinear(g.magnitude, x + dx, y + dy) &&
          m >= sample_bilinear(g.magnitude, x - dx, y - dy)) {
        keep(x, y) = 1;
      }
    }
  }
  thin_across_gradient(keep, g);

  GradientMap out{ScalarField(w, h), ScalarField(w, h), ScalarField(w, h), g.method, g.scale};
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (!keep[i]) continue;
    out.g1[i] = g.g1[i];
    out.g2[i] = g.g2[i];
    out.magnitude[i] = g.magnitude[i];
  }
  return out;
}

EdgeMap hysteresis_threshold(const GradientMap& g, double low, double high) {
  if (!(low < high)) throw Error(ErrorCode::BadThresholds, "low threshold must be < high");
  const int w = g.magnitude.width();
  const int h = g.magnitude.height();
  EdgeMap out{Mask(w, h), g.method, g.scale, 0.0, low, high};
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (g.magnitude(x, y) >= high) {
        out.edges(x, y) = 1;
        queue.emplace_back(x, y);
      }
    }
  }
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h || out.edges(nx, ny)) continue;
        if (g.magnitude(nx, ny) >= low) {
          out.edges(nx, ny) = 1;
          queue.emplace_back(nx, ny);
        }
      }
    }
  }
  return out;
}

double percentile(const ScalarField& f, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::InvalidArgument, "percentile outside [0,1]");
  std::vector<double> v(f.samples().begin(), f.samples().end());
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

GradientMap normalize_magnitude(const GradientMap& g, double q, double target) {
  double ref = percentile(g.magnitude, q);
  if (!(ref > 0.0)) ref = max_abs(g.magnitude);
  const double k = ref > 0.0 ? target / ref : 0.0;
  GradientMap out = g;
  for (std::size_t i = 0; i < out.magnitude.size(); ++i) {
    out.g1[i] *= k;
    out.g2[i] *= k;
    out.magnitude[i] *= k;
  }
  return out;
}

Detection detect(const ScalarField& img, const DetectorConfig& cfg) {
  cfg.validate();
  require_finite(img, "detect");
  using Clock = std::chrono::steady_clock;
  std::vector<std::pair<std::string, double>> stages;
  auto t0 = Clock::now();
  auto lap = [&](const char* name) {
    const auto t1 = Clock::now();
    stages.emplace_back(name, std::chrono::duration<double, std::milli>(t1 - t0).count());
    t0 = t1;
  };

  const ScalarField padded = mirror_pad(img, cfg.pad);
  GradientMap raw;
  if (cfg.method == Method::Sobel) {
    raw = sobel_gradient(padded);
  } else if (cfg.method == Method::Canny) {
    raw = canny_gradient(padded, cfg.canny_sigma);
  } else {
    const scalespace::ScaleSpace space(padded);
    const MonogenicField field = space.at(cfg.scale);
    const ScaleDerivatives derivs = space.derivative(cfg.scale, cfg.derivative_mode, cfg.fd_step);
    lap("poisson_filtering");
    const double eps = features::default_mask_epsilon(field, cfg.mask_eps);
    switch (cfg.method) {
      case Method::Dpc: raw = dpc_gradient(field, derivs, eps); break;
      case Method::La: raw = la_gradient(field, eps); break;
      case Method::Mdpc: raw = mdpc_gradient(field, derivs, eps); break;
      default: raw = mixed_gradient(field, derivs, eps); break;
    }
  }
  raw.method = cfg.method;
  raw.scale = is_phase_method(cfg.method) ? cfg.scale : 0.0;
  raw = make_gradient_map(crop(raw.g1, cfg.pad, cfg.pad, img.width(), img.height()),
                          crop(raw.g2, cfg.pad, cfg.pad, img.width(), img.height()), raw.method,
                          raw.scale);
  lap("gradient");

  GradientMap normalized =
      normalize_magnitude(raw, cfg.normalize_percentile, cfg.normalize_target);
  GradientMap suppressed = non_maximum_suppression(normalized, cfg.nms_radius);
  lap("non_maximum_suppression");
  EdgeMap edges = hysteresis_threshold(suppressed, cfg.low, cfg.high);
  edges.nms_radius = cfg.nms_radius;
  lap("hysteresis");
  return Detection{std::move(normalized), std::move(suppressed), std::move(edges),
                   std::move(stages)};
}

}  // namespace monogenic::edgeops
