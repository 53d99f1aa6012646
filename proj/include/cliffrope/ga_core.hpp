#pragma once

// Dense Clifford algebra Cl(n,0) for small n.
//
// Multivectors are stored as 2^n coefficients indexed by blade mask: bit k of
// the mask is set when basis vector e_{k+1} participates in the blade. Every
// basis vector squares to +1.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace cliffrope::ga {

inline constexpr int kMaxDim = 12;

using BladeMask = std::uint32_t;

struct Blade {
  BladeMask mask = 0;

  constexpr int grade() const { return std::popcount(mask); }
};

// Sign of the product of two canonically ordered basis blades in Cl(n,0):
// (-1)^(number of transpositions needed to sort the concatenated factors).
constexpr int blade_product_sign(BladeMask a, BladeMask b) {
  int swaps = 0;
  for (BladeMask shifted = a >> 1; shifted != 0; shifted >>= 1) {
    swaps += std::popcount(shifted & b);
  }
  return (swaps & 1) ? -1 : 1;
}

// (-1)^(g(g-1)/2)
constexpr int reverse_sign(int grade) { return ((grade * (grade - 1) / 2) & 1) ? -1 : 1; }

class Multivector {
 public:
  // Zero multivector of Cl(dim,0). Throws std::invalid_argument unless 0 <= dim <= kMaxDim.
  explicit Multivector(int dim);
  Multivector(int dim, std::vector<double> coeffs);

  static Multivector scalar(int dim, double value);
  static Multivector blade(int dim, BladeMask mask, double coeff = 1.0);
  // Basis blade from 1-based vector indices in the given order, e.g. {2, 1} is e2e1 = -e12.
  static Multivector basis_product(int dim, std::initializer_list<int> indices);

  int dim() const { return dim_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  double operator[](BladeMask mask) const { return coeffs_[mask]; }
  double& operator[](BladeMask mask) { return coeffs_[mask]; }

  Multivector& operator+=(const Multivector& other);
  Multivector& operator-=(const Multivector& other);
  Multivector& operator*=(double s);

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, double s) { return a *= s; }
  friend Multivector operator*(double s, Multivector a) { return a *= s; }
  friend Multivector operator-(Multivector a) { return a *= -1.0; }

  bool operator==(const Multivector&) const = default;

  std::string to_string() const;

 private:
  int dim_;
  std::vector<double> coeffs_;
};

// Geometric product. Throws std::invalid_argument on dimension mismatch.
Multivector geometric_product(const Multivector& a, const Multivector& b);
inline Multivector operator*(const Multivector& a, const Multivector& b) {
  return geometric_product(a, b);
}

Multivector reverse(const Multivector& a);

// Keeps only the grade-g part. Throws std::out_of_range unless 0 <= g <= dim.
Multivector grade_project(const Multivector& a, int g);

double mv_norm(const Multivector& a);

// Scalar part of a * reverse(a).
double versor_norm_squared(const Multivector& a);

inline constexpr double kUnitTolerance = 1e-9;

// Unit even versor. The coefficients of odd grades are exactly zero and
// <R reverse(R)>_0 is within kUnitTolerance of 1.
class Rotor {
 public:
  // Identity rotor of Cl(dim,0).
  explicit Rotor(int dim);

  // Validates the rotor invariants. Throws std::invalid_argument on violation.
  static Rotor from_multivector(Multivector value);

  const Multivector& value() const { return value_; }
  int dim() const { return value_.dim(); }

 private:
  explicit Rotor(Multivector value) : value_(std::move(value)) {}
  friend Rotor rotor_exp(const Multivector& bivector, double half_angle);
  friend Rotor compose(const Rotor& outer, const Rotor& inner);
  Multivector value_;
};

// cos(half_angle) + sin(half_angle) * bivector for a unit simple bivector
// (bivector^2 == -1). Throws std::invalid_argument for anything else.
Rotor rotor_exp(const Multivector& bivector, double half_angle);

// outer * inner; applying the result equals applying inner first, then outer.
Rotor compose(const Rotor& outer, const Rotor& inner);

Rotor inverse(const Rotor& r);

// r * a * reverse(r). Throws std::invalid_argument on dimension mismatch.
Multivector sandwich(const Rotor& r, const Multivector& a);

// Cl(3,0) coefficient layout (1, e1, e2, e12, e3, e31, e23, e123). Slot k holds
// blade mask k, except slot 5 which stores e31 = -e13.
inline constexpr std::size_t kCl3Slots = 8;
inline constexpr BladeMask kE31Slot = 5;

std::vector<double> to_cl3_layout(const Multivector& a);
Multivector from_cl3_layout(std::span<const double> slots);

}  // namespace cliffrope::ga
