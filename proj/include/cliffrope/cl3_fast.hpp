#pragma once

// Fixed-size Cl(3,0) kernels on 8-coefficient multivectors.
//
// Slot layout: (1, e1, e2, e12, e3, e31, e23, e123).

#include <array>
#include <span>

#include "cliffrope/ga_core.hpp"

namespace cliffrope::cl3 {

struct MV8 {
  std::array<double, 8> c{};

  enum Slot : std::size_t { kScalar = 0, kE1 = 1, kE2 = 2, kE12 = 3, kE3 = 4, kE31 = 5, kE23 = 6, kE123 = 7 };

  static constexpr MV8 scalar(double s) { return MV8{{s, 0, 0, 0, 0, 0, 0, 0}}; }
  static constexpr MV8 unit(Slot slot, double coeff = 1.0) {
    MV8 m;
    m.c[slot] = coeff;
    return m;
  }

  constexpr double operator[](std::size_t slot) const { return c[slot]; }
  constexpr double& operator[](std::size_t slot) { return c[slot]; }

  constexpr bool operator==(const MV8&) const = default;
};

MV8 mv8_from_multivector(const ga::Multivector& m);
ga::Multivector mv8_to_multivector(const MV8& m);

constexpr MV8 mv8_reverse(const MV8& a) {
  return MV8{{a[0], a[1], a[2], -a[3], a[4], -a[5], -a[6], -a[7]}};
}

// Geometric product, expanded from ga_core basis products (see tools/mv8_codegen.cpp).
constexpr MV8 mv8_product(const MV8& lhs, const MV8& rhs) {
  const auto& a = lhs.c;
  const auto& b = rhs.c;
  MV8 result;
  auto& out = result.c;
  out[0] = a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3] + a[4] * b[4] - a[5] * b[5] - a[6] * b[6] - a[7] * b[7];
  out[1] = a[0] * b[1] + a[1] * b[0] - a[2] * b[3] + a[3] * b[2] + a[4] * b[5] - a[5] * b[4] - a[6] * b[7] - a[7] * b[6];
  out[2] = a[0] * b[2] + a[1] * b[3] + a[2] * b[0] - a[3] * b[1] - a[4] * b[6] - a[5] * b[7] + a[6] * b[4] - a[7] * b[5];
  out[3] = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0] + a[4] * b[7] + a[5] * b[6] - a[6] * b[5] + a[7] * b[4];
  out[4] = a[0] * b[4] - a[1] * b[5] + a[2] * b[6] - a[3] * b[7] + a[4] * b[0] + a[5] * b[1] - a[6] * b[2] - a[7] * b[3];
  out[5] = a[0] * b[5] - a[1] * b[4] + a[2] * b[7] - a[3] * b[6] + a[4] * b[1] + a[5] * b[0] + a[6] * b[3] + a[7] * b[2];
  out[6] = a[0] * b[6] + a[1] * b[7] + a[2] * b[4] + a[3] * b[5] - a[4] * b[2] - a[5] * b[3] + a[6] * b[0] + a[7] * b[1];
  out[7] = a[0] * b[7] + a[1] * b[6] + a[2] * b[5] + a[3] * b[4] + a[4] * b[3] + a[5] * b[2] + a[6] * b[1] + a[7] * b[0];
  return result;
}

constexpr MV8 operator*(const MV8& a, const MV8& b) { return mv8_product(a, b); }

// Throws std::invalid_argument unless the odd slots are zero and the norm is 1 within 1e-9.
void validate_mv8_rotor(const MV8& rotor);

// rotor * a * reverse(rotor), fused: the vector part and the dual of the
// bivector part are rotated by the same 3x3 matrix; scalar and e123 pass
// through untouched. Throws as validate_mv8_rotor.
MV8 mv8_rotor_sandwich(const MV8& rotor, const MV8& a);

// Reference composition of two mv8_product calls.
MV8 mv8_rotor_sandwich_two_product(const MV8& rotor, const MV8& a);

// Bivector u_i e12 + u_j e23 + u_k e13 built from an (i, j, k) axis.
constexpr MV8 mv8_bivector_from_axis(double ai, double aj, double ak) {
  return MV8{{0, 0, 0, ai, 0, -ak, aj, 0}};
}

}  // namespace cliffrope::cl3
