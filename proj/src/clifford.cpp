#include "monogenic/clifford.hpp"

#include "monogenic/error.hpp"

namespace monogenic::clifford {

Multivector2 paravector_inverse(const Multivector2& m, double eps) {
  if (m.c12 != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "paravector_inverse: element has a bivector part");
  }
  const double n2 = m.s0 * m.s0 + m.c1 * m.c1 + m.c2 * m.c2;
  if (!(std::sqrt(n2) > eps)) {
    throw Error(ErrorCode::ZeroNorm, "paravector_inverse: norm below epsilon");
  }
  return conjugate(m) * (1.0 / n2);
}

Multivector2 exp_vector(const Multivector2& v, double theta, double eps) {
  if (v.s0 != 0.0 || v.c12 != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "exp_vector: direction must be a pure vector");
  }
  const double len = std::hypot(v.c1, v.c2);
  if (!(len > eps)) {
    throw Error(ErrorCode::ZeroNorm, "exp_vector: direction norm below epsilon");
  }
  const double s = std::sin(theta) / len;
  return {std::cos(theta), v.c1 * s, v.c2 * s, 0.0};
}

}  // namespace monogenic::clifford
