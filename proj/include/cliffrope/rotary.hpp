#pragma once

// Rotary positional encodings over a 2D position grid: 1D RoPE, Mixed,
// Spherical, QuatRo and CARE.
//
// Every method rotates fixed-width sub-vectors of a head vector. Band i of a
// head uses angular speed theta_i from a FrequencySchedule; a token at
// position (p_x, p_y) is rotated by angle_x = theta_i * scale_x * p_x about
// axis_x and angle_y = theta_i * scale_y * p_y about axis_y. Rotors always use
// the half-angle form exp((angle / 2) * u).
//
//   method     width  rotation
//   Rope1D     2      planar rotation by angle_x
//   Mixed      3      one rotation by angle_x + angle_y about axis_x
//   Spherical  3      Ryz(angle_x) * Rxy(angle_y), fixed principal axes
//   QuatRo     3      r_x r_y v r_y^-1 r_x^-1 with learnable axes
//   Care       8      R_y R_x m R_x^-1 R_y^-1 on a full Cl(3,0) multivector
//
// Dimensions past the last full sub-vector are passed through unchanged.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cliffrope/cl3_fast.hpp"
#include "cliffrope/quat.hpp"

namespace cliffrope::rotary {

using Vec2 = std::array<double, 2>;
using Vec3 = quat::Vec3;

enum class Method { Rope1D, Mixed, Spherical, QuatRo, Care };

inline constexpr std::array<Method, 5> kAllMethods = {Method::Rope1D, Method::Mixed,
                                                      Method::Spherical, Method::QuatRo,
                                                      Method::Care};

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);
std::size_t subvector_width(Method method);

// Which rotor is applied last (outermost) in the two-rotor sandwich.
enum class RotorOrder { XOuter, YOuter };

// Default order per method: QuatRo conjugates with r_x outermost, CARE with R_y outermost.
RotorOrder default_order(Method method);

enum class Coordinate { AngleX, AngleY };

enum class Direction { Forward, Inverse };

struct Position2D {
  double x = 0.0;
  double y = 0.0;

  constexpr Position2D operator+(const Position2D& o) const { return {x + o.x, y + o.y}; }
  constexpr bool operator==(const Position2D&) const = default;
};

// Row-major grid: token t = row * width + col sits at (origin.x + col, origin.y + row).
std::vector<Position2D> grid_positions(std::size_t height, std::size_t width,
                                       Position2D origin = {});

// theta_i = base^(-2i / d_eff) with d_eff = 2 * num_bands.
class FrequencySchedule {
 public:
  // Throws std::invalid_argument unless num_bands >= 1 and base > 1.
  FrequencySchedule(std::size_t num_bands, double base = 10000.0);

  double base() const { return base_; }
  std::size_t num_bands() const { return angles_.size(); }
  double angle(std::size_t band) const { return angles_.at(band); }
  std::span<const double> angles() const { return angles_; }

 private:
  double base_;
  std::vector<double> angles_;
};

inline constexpr double kMinAxisNorm = 1e-8;

// Unit copy of a raw axis. Throws std::invalid_argument if its norm is below kMinAxisNorm.
Vec3 normalized_axis(const Vec3& raw);

// Raw (unnormalized) rotation axes per band and coordinate. Either one pair
// shared by every band or one pair per band.
class AxisParams {
 public:
  // x = i, y = k: the principal-axis configuration that reproduces Spherical RoPE.
  AxisParams();
  AxisParams(std::vector<Vec3> x, std::vector<Vec3> y);
  static AxisParams shared(const Vec3& x, const Vec3& y);

  bool is_shared() const { return x_.size() == 1; }
  std::size_t size() const { return x_.size(); }
  const Vec3& raw_x(std::size_t band) const { return x_[is_shared() ? 0 : band]; }
  const Vec3& raw_y(std::size_t band) const { return y_[is_shared() ? 0 : band]; }

  // Throws std::invalid_argument if per-band entries don't cover num_bands or any axis is degenerate.
  void validate(std::size_t num_bands) const;

 private:
  std::vector<Vec3> x_;
  std::vector<Vec3> y_;
};

// Everything one band needs to rotate one sub-vector. Speeds are radians per
// grid unit; axes are raw and get normalized on use.
struct Band {
  double speed_x = 1.0;
  double speed_y = 1.0;
  Vec3 axis_x{1.0, 0.0, 0.0};
  Vec3 axis_y{0.0, 0.0, 1.0};
};

struct Angles {
  double x = 0.0;
  double y = 0.0;
};

Angles band_angles(Method method, const Band& band, Position2D p);

// --- Per-method rotations -------------------------------------------------

Vec2 rope1d_rotate(const Vec2& v, double p, double theta);

// Rxy(theta * p.y) first, then Ryz(theta * p.x).
Vec3 spherical_rotate(const Vec3& v, Position2D p, double theta);
Vec3 spherical_rotate_angles(const Vec3& v, Angles angles);

Vec3 quatro_rotate(const Vec3& v, Position2D p, const Band& band,
                   RotorOrder order = RotorOrder::XOuter);
Vec3 quatro_rotate_angles(const Vec3& v, Angles angles, const Vec3& axis_x, const Vec3& axis_y,
                          RotorOrder order = RotorOrder::XOuter);

// Rotation about band.axis_x by speed_x * p.x + speed_y * p.y.
Vec3 mixed_rotate(const Vec3& v, Position2D p, const Band& band);
Vec3 mixed_rotate_angles(const Vec3& v, Angles angles, const Vec3& axis);

cl3::MV8 care_rotate(const cl3::MV8& m, Position2D p, const Band& band,
                     RotorOrder order = RotorOrder::YOuter);
cl3::MV8 care_rotate_angles(const cl3::MV8& m, Angles angles, const Vec3& axis_x,
                            const Vec3& axis_y, RotorOrder order = RotorOrder::YOuter);

// Rotor for a rotation by `angle` about a raw axis, i.e. exp((angle / 2) * u).
quat::Quaternion axis_rotor(const Vec3& raw_axis, double angle);
// Same rotor in Cl(3,0) via i -> e12, j -> e23, k -> e13.
cl3::MV8 care_rotor(const Vec3& raw_axis, double angle);

// Grade-1 part of an MV8 as the 3-vector QuatRo would rotate: the pure
// quaternion matching the dual bivector v * e123, so e1 -> j, e2 -> -k, e3 -> i.
Vec3 care_vector_to_quatro(const cl3::MV8& m);
cl3::MV8 quatro_to_care_vector(const Vec3& v);

// --- Block application ----------------------------------------------------

struct EncodingMethod {
  Method tag = Method::QuatRo;
  FrequencySchedule schedule{1};
  AxisParams axes;
  double scale_x = 1.0;
  double scale_y = 1.0;

  std::size_t width() const { return subvector_width(tag); }
  Band band(std::size_t index) const;
};

// Schedule sized to head_dim / width bands. Throws std::invalid_argument if
// head_dim is smaller than the method's width or the axes don't validate.
EncodingMethod make_encoding(Method tag, std::size_t head_dim, AxisParams axes = {},
                             double base = 10000.0, double scale_x = 1.0, double scale_y = 1.0);

// batch x tokens x head_dim, row-major, with one position per token.
class TokenBlock {
 public:
  TokenBlock() = default;
  TokenBlock(std::size_t batch, std::size_t tokens, std::size_t head_dim,
             std::vector<Position2D> positions);
  TokenBlock(std::size_t batch, std::size_t tokens, std::size_t head_dim,
             std::vector<Position2D> positions, std::vector<double> data);

  std::size_t batch() const { return batch_; }
  std::size_t tokens() const { return tokens_; }
  std::size_t head_dim() const { return head_dim_; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  std::span<const Position2D> positions() const { return positions_; }
  std::vector<Position2D>& mutable_positions() { return positions_; }

  std::span<const double> row(std::size_t b, std::size_t t) const {
    return std::span<const double>(data_).subspan((b * tokens_ + t) * head_dim_, head_dim_);
  }
  std::span<double> row(std::size_t b, std::size_t t) {
    return std::span<double>(data_).subspan((b * tokens_ + t) * head_dim_, head_dim_);
  }

 private:
  std::size_t batch_ = 0;
  std::size_t tokens_ = 0;
  std::size_t head_dim_ = 0;
  std::vector<Position2D> positions_;
  std::vector<double> data_;
};

// Rotates one sub-vector of the method's width in place.
void rotate_subvector(Method method, const Band& band, Angles angles, std::span<double> sub,
                      Direction direction = Direction::Forward);

TokenBlock apply_encoding(const TokenBlock& block, const EncodingMethod& method,
                          Direction direction = Direction::Forward);

// d(output)/d(angle) for one sub-vector, where output is the forward rotation
// at `angles`. Uses the commutator form 1/2 (B y - y B) on the rotor that the
// coordinate controls, carried through any outer rotor.
std::vector<double> rotation_gradient(Method method, const Band& band, Angles angles,
                                      std::span<const double> sub, Coordinate coordinate);
std::vector<double> rotation_gradient(Method method, std::span<const double> sub, Position2D p,
                                      const Band& band, Coordinate coordinate);

}  // namespace cliffrope::rotary
