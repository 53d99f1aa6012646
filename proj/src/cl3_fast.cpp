#include "cliffrope/cl3_fast.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cliffrope::cl3 {

MV8 mv8_from_multivector(const ga::Multivector& m) {
  const auto slots = ga::to_cl3_layout(m);
  MV8 out;
  std::copy(slots.begin(), slots.end(), out.c.begin());
  return out;
}

ga::Multivector mv8_to_multivector(const MV8& m) { return ga::from_cl3_layout(m.c); }

void validate_mv8_rotor(const MV8& rotor) {
  if (rotor[MV8::kE1] != 0.0 || rotor[MV8::kE2] != 0.0 || rotor[MV8::kE3] != 0.0 ||
      rotor[MV8::kE123] != 0.0) {
    throw std::invalid_argument("mv8_rotor_sandwich: rotor has odd-grade coefficients");
  }
  const double n2 = rotor[0] * rotor[0] + rotor[3] * rotor[3] + rotor[5] * rotor[5] +
                    rotor[6] * rotor[6];
  if (!(std::abs(n2 - 1.0) <= ga::kUnitTolerance)) {
    throw std::invalid_argument("mv8_rotor_sandwich: rotor is not unit (|R|^2 = " +
                                std::to_string(n2) + ")");
  }
}

MV8 mv8_rotor_sandwich(const MV8& rotor, const MV8& a) {
  validate_mv8_rotor(rotor);
  // Even part as a quaternion: e12 -> i, e23 -> j, e13 = -e31 -> k.
  const double w = rotor[MV8::kScalar];
  const double x = rotor[MV8::kE12];
  const double y = rotor[MV8::kE23];
  const double z = -rotor[MV8::kE31];
  const double m00 = w * w + x * x - y * y - z * z, m01 = 2 * (x * y - w * z), m02 = 2 * (x * z + w * y);
  const double m10 = 2 * (x * y + w * z), m11 = w * w - x * x + y * y - z * z, m12 = 2 * (y * z - w * x);
  const double m20 = 2 * (x * z - w * y), m21 = 2 * (y * z + w * x), m22 = w * w - x * x - y * y + z * z;

  // Vector (v1, v2, v3) has dual v1 e23 + v2 e31 + v3 e12, i.e. quaternion v3 i + v1 j - v2 k.
  // Sandwiching commutes with the (central) pseudoscalar, so rotating the dual suffices.
  const auto rotate = [&](double v1, double v2, double v3, double& o1, double& o2, double& o3) {
    const double qi = v3, qj = v1, qk = -v2;
    const double ri = m00 * qi + m01 * qj + m02 * qk;
    const double rj = m10 * qi + m11 * qj + m12 * qk;
    const double rk = m20 * qi + m21 * qj + m22 * qk;
    o1 = rj;
    o2 = -rk;
    o3 = ri;
  };

  MV8 out;
  out[MV8::kScalar] = a[MV8::kScalar];
  out[MV8::kE123] = a[MV8::kE123];
  rotate(a[MV8::kE1], a[MV8::kE2], a[MV8::kE3], out[MV8::kE1], out[MV8::kE2], out[MV8::kE3]);
  rotate(a[MV8::kE23], a[MV8::kE31], a[MV8::kE12], out[MV8::kE23], out[MV8::kE31], out[MV8::kE12]);
  return out;
}

MV8 mv8_rotor_sandwich_two_product(const MV8& rotor, const MV8& a) {
  validate_mv8_rotor(rotor);
  return mv8_product(mv8_product(rotor, a), mv8_reverse(rotor));
}

}  // namespace cliffrope::cl3
