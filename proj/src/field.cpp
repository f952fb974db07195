#include "monogenic/field.hpp"

#include <algorithm>

namespace monogenic {

ScalarField mirror_pad(const ScalarField& f, int margin) {
  if (margin < 0) throw Error(ErrorCode::InvalidArgument, "negative padding margin");
  if (margin == 0) return f;
  ScalarField out(f.width() + 2 * margin, f.height() + 2 * margin);
  for (int y = 0; y < out.height(); ++y) {
    const int sy = reflect_index(y - margin, f.height());
    for (int x = 0; x < out.width(); ++x) {
      out(x, y) = f(reflect_index(x - margin, f.width()), sy);
    }
  }
  return out;
}

ScalarField crop(const ScalarField& f, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || x0 + width > f.width() || y0 + height > f.height()) {
    throw Error(ErrorCode::InvalidArgument, "crop window outside field");
  }
  ScalarField out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out(x, y) = f(x0 + x, y0 + y);
  }
  return out;
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.samples()) m = std::max(m, std::abs(x));
  return m;
}

double sup_difference(const ScalarField& a, const ScalarField& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::InvalidArgument, "shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace monogenic
