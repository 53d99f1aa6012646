#pragma once

// Quaternions and their identification with the even subalgebra of Cl(3,0).

#include <array>

#include "cliffrope/ga_core.hpp"

namespace cliffrope::quat {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// w + x i + y j + z k
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static constexpr Quaternion identity() { return {1.0, 0.0, 0.0, 0.0}; }

  constexpr Quaternion conjugate() const { return {w, -x, -y, -z}; }
  double norm() const;
  constexpr double norm_squared() const { return w * w + x * x + y * y + z * z; }

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
  constexpr Quaternion operator+(const Quaternion& o) const {
    return {w + o.w, x + o.x, y + o.y, z + o.z};
  }
  constexpr Quaternion operator-(const Quaternion& o) const {
    return {w - o.w, x - o.x, y - o.y, z - o.z};
  }
  constexpr Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }

  constexpr bool operator==(const Quaternion&) const = default;
};

// Quaternion with zero scalar part; x, y, z are the i, j, k coefficients.
struct PureQuaternion {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion as_quaternion() const { return {0.0, x, y, z}; }
  constexpr Vec3 as_vec3() const { return {x, y, z}; }
  static constexpr PureQuaternion from_vec3(const Vec3& v) { return {v[0], v[1], v[2]}; }
  double norm() const;

  constexpr bool operator==(const PureQuaternion&) const = default;
};

inline constexpr double kUnitTolerance = 1e-9;

constexpr Quaternion hamilton_product(const Quaternion& p, const Quaternion& q) {
  return {
      p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
      p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
      p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
      p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
  };
}

constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return hamilton_product(p, q);
}

bool is_unit(const Quaternion& q);

// cos(half_angle) + sin(half_angle) * axis. The axis must be unit within
// kUnitTolerance; throws std::invalid_argument otherwise.
Quaternion quat_rotor(const PureQuaternion& axis, double half_angle);

// r v r^-1 for unit r. Throws std::invalid_argument if r is not unit.
PureQuaternion quat_sandwich(const Quaternion& r, const PureQuaternion& v);

// 1 -> 1, i -> e12, j -> e23, k -> e13.
ga::Multivector quat_to_even_cl3(const Quaternion& q);

// Inverse of quat_to_even_cl3. Throws std::invalid_argument if the input is
// not a Cl(3,0) multivector or has an odd-grade coefficient above 1e-12.
Quaternion even_cl3_to_quat(const ga::Multivector& m);

// Matrix M with M v == quat_sandwich(r, v). Throws std::invalid_argument for non-unit r.
Mat3 quat_to_rotation_matrix(const Quaternion& r);

Vec3 operator*(const Mat3& m, const Vec3& v);
Mat3 operator*(const Mat3& a, const Mat3& b);
double determinant(const Mat3& m);

}  // namespace cliffrope::quat
