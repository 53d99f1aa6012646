#include "cliffrope/ga_core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cliffrope::ga {
namespace {

constexpr double kZeroTolerance = 1e-12;

void require_same_dim(const Multivector& a, const Multivector& b, const char* op) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << op << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

Multivector::Multivector(int dim) : dim_(dim) {
  if (dim < 0 || dim > kMaxDim) {
    throw std::invalid_argument("Multivector: dimension must be in [0, " + std::to_string(kMaxDim) +
                                "], got " + std::to_string(dim));
  }
  coeffs_.assign(std::size_t{1} << dim, 0.0);
}

Multivector::Multivector(int dim, std::vector<double> coeffs) : Multivector(dim) {
  if (coeffs.size() != coeffs_.size()) {
    throw std::invalid_argument("Multivector: expected " + std::to_string(coeffs_.size()) +
                                " coefficients, got " + std::to_string(coeffs.size()));
  }
  coeffs_ = std::move(coeffs);
}

Multivector Multivector::scalar(int dim, double value) {
  Multivector m(dim);
  m.coeffs_[0] = value;
  return m;
}

Multivector Multivector::blade(int dim, BladeMask mask, double coeff) {
  Multivector m(dim);
  if (mask >= m.size()) {
    throw std::invalid_argument("Multivector::blade: mask out of range for dimension " +
                                std::to_string(dim));
  }
  m.coeffs_[mask] = coeff;
  return m;
}

Multivector Multivector::basis_product(int dim, std::initializer_list<int> indices) {
  Multivector result = scalar(dim, 1.0);
  for (int index : indices) {
    if (index < 1 || index > dim) {
      throw std::invalid_argument("Multivector::basis_product: basis index out of range");
    }
    result = geometric_product(result, blade(dim, BladeMask{1} << (index - 1)));
  }
  return result;
}

Multivector& Multivector::operator+=(const Multivector& other) {
  require_same_dim(*this, other, "operator+");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
  require_same_dim(*this, other, "operator-");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

std::string Multivector::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (BladeMask mask = 0; mask < coeffs_.size(); ++mask) {
    if (coeffs_[mask] == 0.0) continue;
    if (!first) out << " + ";
    first = false;
    out << coeffs_[mask];
    if (mask != 0) {
      out << "*e";
      for (int k = 0; k < dim_; ++k) {
        if (mask & (BladeMask{1} << k)) out << (k + 1);
      }
    }
  }
  if (first) out << "0";
  return out.str();
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  require_same_dim(a, b, "geometric_product");
  Multivector result(a.dim());
  const auto n = static_cast<BladeMask>(a.size());
  for (BladeMask i = 0; i < n; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (BladeMask j = 0; j < n; ++j) {
      const double bj = b[j];
      if (bj == 0.0) continue;
      result[i ^ j] += blade_product_sign(i, j) * ai * bj;
    }
  }
  return result;
}

Multivector reverse(const Multivector& a) {
  Multivector result = a;
  for (BladeMask mask = 0; mask < result.size(); ++mask) {
    if (reverse_sign(std::popcount(mask)) < 0) result[mask] = -result[mask];
  }
  return result;
}

Multivector grade_project(const Multivector& a, int g) {
  if (g < 0 || g > a.dim()) {
    throw std::out_of_range("grade_project: grade " + std::to_string(g) + " outside [0, " +
                            std::to_string(a.dim()) + "]");
  }
  Multivector result(a.dim());
  for (BladeMask mask = 0; mask < a.size(); ++mask) {
    if (std::popcount(mask) == g) result[mask] = a[mask];
  }
  return result;
}

double mv_norm(const Multivector& a) {
  double sum = 0.0;
  for (double c : a.coeffs()) sum += c * c;
  return std::sqrt(sum);
}

double versor_norm_squared(const Multivector& a) {
  // <a reverse(a)>_0 = sum over blades of sign(m,m) * reverse_sign(g) * a_m^2, and
  // sign(m,m) * reverse_sign(g) == +1 in a positive-definite signature.
  double sum = 0.0;
  for (double c : a.coeffs()) sum += c * c;
  return sum;
}

Rotor::Rotor(int dim) : value_(Multivector::scalar(dim, 1.0)) {}

Rotor Rotor::from_multivector(Multivector value) {
  for (BladeMask mask = 0; mask < value.size(); ++mask) {
    if ((std::popcount(mask) & 1) && value[mask] != 0.0) {
      throw std::invalid_argument("Rotor: odd-grade coefficient is nonzero");
    }
  }
  const double norm2 = versor_norm_squared(value);
  if (!(std::abs(norm2 - 1.0) <= kUnitTolerance)) {
    throw std::invalid_argument("Rotor: not a unit versor (<R~R>_0 = " + std::to_string(norm2) +
                                ")");
  }
  return Rotor(std::move(value));
}

Rotor rotor_exp(const Multivector& bivector, double half_angle) {
  for (BladeMask mask = 0; mask < bivector.size(); ++mask) {
    if (std::popcount(mask) != 2 && std::abs(bivector[mask]) > kZeroTolerance) {
      throw std::invalid_argument("rotor_exp: argument is not a pure bivector");
    }
  }
  const Multivector b = grade_project(bivector, 2);
  const double norm2 = versor_norm_squared(b);
  if (!(std::abs(norm2 - 1.0) <= kUnitTolerance)) {
    throw std::invalid_argument("rotor_exp: bivector is not unit (|B|^2 = " +
                                std::to_string(norm2) + ")");
  }
  // The closed form needs B^2 = -1, i.e. B is a blade. Only possible to violate for n >= 4.
  if (b.dim() >= 4 && mv_norm(grade_project(b * b, 4)) > kUnitTolerance) {
    throw std::invalid_argument("rotor_exp: bivector is not simple (B^2 has a grade-4 part)");
  }
  Multivector value = b * std::sin(half_angle);
  value[0] = std::cos(half_angle);
  return Rotor(std::move(value));
}

Rotor compose(const Rotor& outer, const Rotor& inner) {
  return Rotor(outer.value() * inner.value());
}

Rotor inverse(const Rotor& r) { return Rotor::from_multivector(reverse(r.value())); }

Multivector sandwich(const Rotor& r, const Multivector& a) {
  require_same_dim(r.value(), a, "sandwich");
  return r.value() * a * reverse(r.value());
}

std::vector<double> to_cl3_layout(const Multivector& a) {
  if (a.dim() != 3) throw std::invalid_argument("to_cl3_layout: expected a Cl(3,0) multivector");
  std::vector<double> slots(a.coeffs().begin(), a.coeffs().end());
  slots[kE31Slot] = -slots[kE31Slot];
  return slots;
}

Multivector from_cl3_layout(std::span<const double> slots) {
  if (slots.size() != kCl3Slots) {
    throw std::invalid_argument("from_cl3_layout: expected 8 coefficients");
  }
  Multivector m(3, std::vector<double>(slots.begin(), slots.end()));
  m[kE31Slot] = -m[kE31Slot];
  return m;
}

}  // namespace cliffrope::ga
