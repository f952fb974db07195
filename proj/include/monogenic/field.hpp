#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "monogenic/error.hpp"

namespace monogenic {

// Row-major sampled image-domain function on a unit-spaced grid.
// x is the column index (first coordinate x1), y the row index (x2).
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Grid(int width, int height, std::vector<T> samples) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
    }
    if (samples.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(ErrorCode::InvalidArgument, "sample count does not match dimensions");
    }
    data_ = std::move(samples);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> samples() { return data_; }
  std::span<const T> samples() const { return data_; }
  const std::vector<T>& vector() const { return data_; }

  bool same_shape(const auto& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using ScalarField = Grid<double>;
// Nonzero entries mark valid pixels.
using Mask = Grid<std::uint8_t>;

// Coefficients of e1 and e2.
struct VectorField {
  ScalarField v1;
  ScalarField v2;

  VectorField() = default;
  VectorField(int width, int height) : v1(width, height), v2(width, height) {}
  VectorField(ScalarField a, ScalarField b) : v1(std::move(a)), v2(std::move(b)) {
    if (!v1.same_shape(v2)) {
      throw Error(ErrorCode::InvalidArgument, "vector field components differ in shape");
    }
  }

  int width() const { return v1.width(); }
  int height() const { return v1.height(); }
  double norm_at(std::size_t i) const { return std::hypot(v1[i], v2[i]); }
};

// f = u + v at a fixed scale s.
struct MonogenicField {
  ScalarField u;
  VectorField v;
  double scale = 0.0;

  int width() const { return u.width(); }
  int height() const { return u.height(); }
};

inline bool all_finite(const ScalarField& f) {
  for (double x : f.samples()) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline void require_finite(const ScalarField& f, const char* what) {
  if (f.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": empty field");
  if (!all_finite(f)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": non-finite samples");
  }
}

// Reflect an index into [0, n) with edge-including (symmetric) mirroring.
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

ScalarField mirror_pad(const ScalarField& f, int margin);
ScalarField crop(const ScalarField& f, int x0, int y0, int width, int height);

double max_abs(const ScalarField& f);
double sup_difference(const ScalarField& a, const ScalarField& b);

}  // namespace monogenic
