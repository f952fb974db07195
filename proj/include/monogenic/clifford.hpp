#pragma once

#include <cmath>

namespace monogenic::clifford {

inline constexpr double kDefaultZeroNormEpsilon = 1e-12;

// Element of Cl(0,2): s0 + c1 e1 + c2 e2 + c12 e12, with e1^2 = e2^2 = -1.
struct Multivector2 {
  double s0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c12 = 0.0;

  static constexpr Multivector2 scalar(double s) { return {s, 0.0, 0.0, 0.0}; }
  static constexpr Multivector2 vector(double x1, double x2) { return {0.0, x1, x2, 0.0}; }
  static constexpr Multivector2 paravector(double x0, double x1, double x2) {
    return {x0, x1, x2, 0.0};
  }
  static constexpr Multivector2 bivector(double b) { return {0.0, 0.0, 0.0, b}; }

  constexpr Multivector2 operator+(const Multivector2& o) const {
    return {s0 + o.s0, c1 + o.c1, c2 + o.c2, c12 + o.c12};
  }
  constexpr Multivector2 operator-(const Multivector2& o) const {
    return {s0 - o.s0, c1 - o.c1, c2 - o.c2, c12 - o.c12};
  }
  constexpr Multivector2 operator-() const { return {-s0, -c1, -c2, -c12}; }
  constexpr Multivector2 operator*(double k) const { return {s0 * k, c1 * k, c2 * k, c12 * k}; }
  friend constexpr Multivector2 operator*(double k, const Multivector2& m) { return m * k; }

  constexpr bool operator==(const Multivector2&) const = default;

  bool is_finite() const {
    return std::isfinite(s0) && std::isfinite(c1) && std::isfinite(c2) && std::isfinite(c12);
  }
  // Euclidean norm over all four components.
  double norm() const { return std::sqrt(s0 * s0 + c1 * c1 + c2 * c2 + c12 * c12); }
};

inline constexpr Multivector2 kOne{1.0, 0.0, 0.0, 0.0};
inline constexpr Multivector2 kE1{0.0, 1.0, 0.0, 0.0};
inline constexpr Multivector2 kE2{0.0, 0.0, 1.0, 0.0};
inline constexpr Multivector2 kE12{0.0, 0.0, 0.0, 1.0};

// Multiplication table:
//   e1 e2 = e12, e2 e1 = -e12, e12 e1 = e2, e1 e12 = -e2,
//   e2 e12 = e1, e12 e2 = -e1, e12 e12 = -1.
constexpr Multivector2 geometric_product(const Multivector2& a, const Multivector2& b) {
  return {
      a.s0 * b.s0 - a.c1 * b.c1 - a.c2 * b.c2 - a.c12 * b.c12,
      a.s0 * b.c1 + a.c1 * b.s0 + a.c2 * b.c12 - a.c12 * b.c2,
      a.s0 * b.c2 + a.c2 * b.s0 - a.c1 * b.c12 + a.c12 * b.c1,
      a.s0 * b.c12 + a.c12 * b.s0 + a.c1 * b.c2 - a.c2 * b.c1,
  };
}

constexpr Multivector2 operator*(const Multivector2& a, const Multivector2& b) {
  return geometric_product(a, b);
}

constexpr double scalar_part(const Multivector2& m) { return m.s0; }
constexpr Multivector2 vector_part(const Multivector2& m) { return {0.0, m.c1, m.c2, 0.0}; }
constexpr Multivector2 bivector_part(const Multivector2& m) { return {0.0, 0.0, 0.0, m.c12}; }

// Clifford conjugate: negates vector and bivector grades.
constexpr Multivector2 conjugate(const Multivector2& m) { return {m.s0, -m.c1, -m.c2, -m.c12}; }

// conj(m) / |m|^2 for a paravector m. Throws Error(ZeroNorm) when |m| <= eps,
// Error(InvalidArgument) when m carries a bivector part.
Multivector2 paravector_inverse(const Multivector2& m, double eps = kDefaultZeroNormEpsilon);

// cos(theta) + (v/|v|) sin(theta). v must be a pure vector with |v| > eps.
Multivector2 exp_vector(const Multivector2& v, double theta,
                        double eps = kDefaultZeroNormEpsilon);

}  // namespace monogenic::clifford
