#include "cliffrope/quat.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cliffrope::quat {
namespace {

constexpr ga::BladeMask kE12 = 0b011;
constexpr ga::BladeMask kE23 = 0b110;
constexpr ga::BladeMask kE13 = 0b101;

void require_unit(const Quaternion& r, const char* op) {
  if (!is_unit(r)) {
    throw std::invalid_argument(std::string(op) + ": quaternion is not unit (|r|^2 = " +
                                std::to_string(r.norm_squared()) + ")");
  }
}

}  // namespace

double Quaternion::norm() const { return std::sqrt(norm_squared()); }

double PureQuaternion::norm() const { return std::sqrt(x * x + y * y + z * z); }

bool is_unit(const Quaternion& q) { return std::abs(q.norm_squared() - 1.0) <= kUnitTolerance; }

Quaternion quat_rotor(const PureQuaternion& axis, double half_angle) {
  const double n2 = axis.x * axis.x + axis.y * axis.y + axis.z * axis.z;
  if (!(std::abs(n2 - 1.0) <= kUnitTolerance)) {
    throw std::invalid_argument("quat_rotor: axis is not unit (|u|^2 = " + std::to_string(n2) +
                                ")");
  }
  const double s = std::sin(half_angle);
  return {std::cos(half_angle), s * axis.x, s * axis.y, s * axis.z};
}

PureQuaternion quat_sandwich(const Quaternion& r, const PureQuaternion& v) {
  require_unit(r, "quat_sandwich");
  // The scalar part is round-off only for unit r; it is dropped.
  const Quaternion out = r * v.as_quaternion() * r.conjugate();
  return {out.x, out.y, out.z};
}

ga::Multivector quat_to_even_cl3(const Quaternion& q) {
  ga::Multivector m(3);
  m[0] = q.w;
  m[kE12] = q.x;
  m[kE23] = q.y;
  m[kE13] = q.z;
  return m;
}

Quaternion even_cl3_to_quat(const ga::Multivector& m) {
  if (m.dim() != 3) throw std::invalid_argument("even_cl3_to_quat: expected a Cl(3,0) multivector");
  for (ga::BladeMask mask = 0; mask < m.size(); ++mask) {
    if ((std::popcount(mask) & 1) && std::abs(m[mask]) > 1e-12) {
      throw std::invalid_argument("even_cl3_to_quat: odd-grade coefficient is nonzero");
    }
  }
  return {m[0], m[kE12], m[kE23], m[kE13]};
}

Mat3 quat_to_rotation_matrix(const Quaternion& r) {
  require_unit(r, "quat_to_rotation_matrix");
  const auto [w, x, y, z] = r;
  return {{
      {w * w + x * x - y * y - z * z, 2 * (x * y - w * z), 2 * (x * z + w * y)},
      {2 * (x * y + w * z), w * w - x * x + y * y - z * z, 2 * (y * z - w * x)},
      {2 * (x * z - w * y), 2 * (y * z + w * x), w * w - x * x - y * y + z * z},
  }};
}

Vec3 operator*(const Mat3& m, const Vec3& v) {
  Vec3 out{};
  for (int r = 0; r < 3; ++r) out[r] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2];
  return out;
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c] + a[r][2] * b[2][c];
    }
  }
  return out;
}

double determinant(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace cliffrope::quat
