#include "cliffrope/rotary.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cliffrope::rotary {
namespace {

using cl3::MV8;
using quat::Quaternion;

RotorOrder swapped(RotorOrder order) {
  return order == RotorOrder::XOuter ? RotorOrder::YOuter : RotorOrder::XOuter;
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 rotate_quat(const Quaternion& r, const Vec3& v) {
  return quat::quat_sandwich(r, quat::PureQuaternion::from_vec3(v)).as_vec3();
}

// Rotation by +a in the (y, z) plane: y -> z.
Vec3 rotate_yz(const Vec3& v, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {v[0], c * v[1] - s * v[2], s * v[1] + c * v[2]};
}

// Rotation by +a in the (x, y) plane: x -> y.
Vec3 rotate_xy(const Vec3& v, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]};
}

MV8 half_commutator(const MV8& bivector, const MV8& y) {
  const MV8 by = cl3::mv8_product(bivector, y);
  const MV8 yb = cl3::mv8_product(y, bivector);
  MV8 out;
  for (std::size_t k = 0; k < 8; ++k) out[k] = 0.5 * (by[k] - yb[k]);
  // Commuting with a bivector maps grade g to grade g; scalars and e123 commute with it.
  out[MV8::kScalar] = 0.0;
  out[MV8::kE123] = 0.0;
  return out;
}

MV8 unit_bivector(const Vec3& raw_axis) {
  const Vec3 u = normalized_axis(raw_axis);
  return cl3::mv8_bivector_from_axis(u[0], u[1], u[2]);
}

Vec3 load3(std::span<const double> sub) { return {sub[0], sub[1], sub[2]}; }

void store3(const Vec3& v, std::span<double> sub) {
  sub[0] = v[0];
  sub[1] = v[1];
  sub[2] = v[2];
}

MV8 load8(std::span<const double> sub) {
  MV8 m;
  for (std::size_t k = 0; k < 8; ++k) m[k] = sub[k];
  return m;
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::Rope1D: return "rope1d";
    case Method::Mixed: return "mixed";
    case Method::Spherical: return "spherical";
    case Method::QuatRo: return "quatro";
    case Method::Care: return "care";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

std::size_t subvector_width(Method method) {
  switch (method) {
    case Method::Rope1D: return 2;
    case Method::Care: return 8;
    default: return 3;
  }
}

RotorOrder default_order(Method method) {
  return method == Method::Care ? RotorOrder::YOuter : RotorOrder::XOuter;
}

std::vector<Position2D> grid_positions(std::size_t height, std::size_t width, Position2D origin) {
  std::vector<Position2D> out;
  out.reserve(height * width);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      out.push_back({origin.x + static_cast<double>(c), origin.y + static_cast<double>(r)});
    }
  }
  return out;
}

FrequencySchedule::FrequencySchedule(std::size_t num_bands, double base) : base_(base) {
  if (num_bands == 0) throw std::invalid_argument("FrequencySchedule: need at least one band");
  if (!(base > 1.0) || !std::isfinite(base)) {
    throw std::invalid_argument("FrequencySchedule: base must be finite and > 1");
  }
  const double d_eff = 2.0 * static_cast<double>(num_bands);
  angles_.resize(num_bands);
  for (std::size_t i = 0; i < num_bands; ++i) {
    angles_[i] = std::pow(base, -2.0 * static_cast<double>(i) / d_eff);
  }
}

Vec3 normalized_axis(const Vec3& raw) {
  const double n = std::sqrt(dot(raw, raw));
  if (!(n >= kMinAxisNorm) || !std::isfinite(n)) {
    throw std::invalid_argument("rotation axis is degenerate (norm " + std::to_string(n) + ")");
  }
  return {raw[0] / n, raw[1] / n, raw[2] / n};
}

AxisParams::AxisParams() : x_{{1.0, 0.0, 0.0}}, y_{{0.0, 0.0, 1.0}} {}

AxisParams::AxisParams(std::vector<Vec3> x, std::vector<Vec3> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.empty() || x_.size() != y_.size()) {
    throw std::invalid_argument("AxisParams: x and y axis lists must be non-empty and equal length");
  }
}

AxisParams AxisParams::shared(const Vec3& x, const Vec3& y) { return AxisParams({x}, {y}); }

void AxisParams::validate(std::size_t num_bands) const {
  if (!is_shared() && x_.size() < num_bands) {
    throw std::invalid_argument("AxisParams: " + std::to_string(x_.size()) +
                                " per-band axes for " + std::to_string(num_bands) + " bands");
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    normalized_axis(x_[i]);
    normalized_axis(y_[i]);
  }
}

Angles band_angles(Method method, const Band& band, Position2D p) {
  if (method == Method::Rope1D) return {band.speed_x * p.x, 0.0};
  return {band.speed_x * p.x, band.speed_y * p.y};
}

Vec2 rope1d_rotate(const Vec2& v, double p, double theta) {
  const double a = theta * p;
  const double c = std::cos(a), s = std::sin(a);
  return {c * v[0] - s * v[1], s * v[0] + c * v[1]};
}

Vec3 spherical_rotate_angles(const Vec3& v, Angles angles) {
  return rotate_yz(rotate_xy(v, angles.y), angles.x);
}

Vec3 spherical_rotate(const Vec3& v, Position2D p, double theta) {
  return spherical_rotate_angles(v, {theta * p.x, theta * p.y});
}

Quaternion axis_rotor(const Vec3& raw_axis, double angle) {
  return quat::quat_rotor(quat::PureQuaternion::from_vec3(normalized_axis(raw_axis)), 0.5 * angle);
}

MV8 care_rotor(const Vec3& raw_axis, double angle) {
  const Vec3 u = normalized_axis(raw_axis);
  const double s = std::sin(0.5 * angle);
  MV8 r = cl3::mv8_bivector_from_axis(s * u[0], s * u[1], s * u[2]);
  r[MV8::kScalar] = std::cos(0.5 * angle);
  return r;
}

Vec3 quatro_rotate_angles(const Vec3& v, Angles angles, const Vec3& axis_x, const Vec3& axis_y,
                          RotorOrder order) {
  const Quaternion rx = axis_rotor(axis_x, angles.x);
  const Quaternion ry = axis_rotor(axis_y, angles.y);
  if (order == RotorOrder::XOuter) return rotate_quat(rx, rotate_quat(ry, v));
  return rotate_quat(ry, rotate_quat(rx, v));
}

Vec3 quatro_rotate(const Vec3& v, Position2D p, const Band& band, RotorOrder order) {
  return quatro_rotate_angles(v, band_angles(Method::QuatRo, band, p), band.axis_x, band.axis_y,
                              order);
}

Vec3 mixed_rotate_angles(const Vec3& v, Angles angles, const Vec3& axis) {
  // Rodrigues: v cos a + (u x v) sin a + u (u . v)(1 - cos a).
  const Vec3 u = normalized_axis(axis);
  const double a = angles.x + angles.y;
  const double c = std::cos(a), s = std::sin(a);
  const Vec3 uxv = cross(u, v);
  const double k = dot(u, v) * (1.0 - c);
  return {v[0] * c + uxv[0] * s + u[0] * k, v[1] * c + uxv[1] * s + u[1] * k,
          v[2] * c + uxv[2] * s + u[2] * k};
}

Vec3 mixed_rotate(const Vec3& v, Position2D p, const Band& band) {
  return mixed_rotate_angles(v, band_angles(Method::Mixed, band, p), band.axis_x);
}

MV8 care_rotate_angles(const MV8& m, Angles angles, const Vec3& axis_x, const Vec3& axis_y,
                       RotorOrder order) {
  const MV8 rx = care_rotor(axis_x, angles.x);
  const MV8 ry = care_rotor(axis_y, angles.y);
  if (order == RotorOrder::YOuter) {
    return cl3::mv8_rotor_sandwich(ry, cl3::mv8_rotor_sandwich(rx, m));
  }
  return cl3::mv8_rotor_sandwich(rx, cl3::mv8_rotor_sandwich(ry, m));
}

MV8 care_rotate(const MV8& m, Position2D p, const Band& band, RotorOrder order) {
  return care_rotate_angles(m, band_angles(Method::Care, band, p), band.axis_x, band.axis_y, order);
}

Vec3 care_vector_to_quatro(const MV8& m) { return {m[MV8::kE3], m[MV8::kE1], -m[MV8::kE2]}; }

MV8 quatro_to_care_vector(const Vec3& v) {
  MV8 m;
  m[MV8::kE1] = v[1];
  m[MV8::kE2] = -v[2];
  m[MV8::kE3] = v[0];
  return m;
}

Band EncodingMethod::band(std::size_t index) const {
  const double theta = schedule.angle(index);
  return {theta * scale_x, theta * scale_y, axes.raw_x(index), axes.raw_y(index)};
}

EncodingMethod make_encoding(Method tag, std::size_t head_dim, AxisParams axes, double base,
                             double scale_x, double scale_y) {
  const std::size_t width = subvector_width(tag);
  if (head_dim < width) {
    throw std::invalid_argument("head_dim " + std::to_string(head_dim) + " is smaller than the " +
                                std::string(method_name(tag)) + " sub-vector width " +
                                std::to_string(width));
  }
  if (!std::isfinite(scale_x) || !std::isfinite(scale_y)) {
    throw std::invalid_argument("coordinate scales must be finite");
  }
  FrequencySchedule schedule(head_dim / width, base);
  axes.validate(schedule.num_bands());
  return EncodingMethod{tag, std::move(schedule), std::move(axes), scale_x, scale_y};
}

TokenBlock::TokenBlock(std::size_t batch, std::size_t tokens, std::size_t head_dim,
                       std::vector<Position2D> positions)
    : TokenBlock(batch, tokens, head_dim, std::move(positions),
                 std::vector<double>(batch * tokens * head_dim, 0.0)) {}

TokenBlock::TokenBlock(std::size_t batch, std::size_t tokens, std::size_t head_dim,
                       std::vector<Position2D> positions, std::vector<double> data)
    : batch_(batch),
      tokens_(tokens),
      head_dim_(head_dim),
      positions_(std::move(positions)),
      data_(std::move(data)) {
  if (positions_.size() != tokens_) {
    throw std::invalid_argument("TokenBlock: " + std::to_string(positions_.size()) +
                                " positions for " + std::to_string(tokens_) + " tokens");
  }
  if (data_.size() != batch_ * tokens_ * head_dim_) {
    throw std::invalid_argument("TokenBlock: data size does not match batch x tokens x head_dim");
  }
  for (const auto& p : positions_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("TokenBlock: non-finite position");
    }
  }
}

void rotate_subvector(Method method, const Band& band, Angles angles, std::span<double> sub,
                      Direction direction) {
  if (sub.size() != subvector_width(method)) {
    throw std::invalid_argument("rotate_subvector: sub-vector width mismatch");
  }
  const bool inverse = direction == Direction::Inverse;
  const Angles a = inverse ? Angles{-angles.x, -angles.y} : angles;
  switch (method) {
    case Method::Rope1D: {
      const Vec2 out = rope1d_rotate({sub[0], sub[1]}, a.x, 1.0);
      sub[0] = out[0];
      sub[1] = out[1];
      return;
    }
    case Method::Mixed:
      store3(mixed_rotate_angles(load3(sub), a, band.axis_x), sub);
      return;
    case Method::Spherical:
      if (inverse) {
        store3(rotate_xy(rotate_yz(load3(sub), a.x), a.y), sub);
      } else {
        store3(spherical_rotate_angles(load3(sub), a), sub);
      }
      return;
    case Method::QuatRo: {
      const RotorOrder order = inverse ? swapped(default_order(method)) : default_order(method);
      store3(quatro_rotate_angles(load3(sub), a, band.axis_x, band.axis_y, order), sub);
      return;
    }
    case Method::Care: {
      const RotorOrder order = inverse ? swapped(default_order(method)) : default_order(method);
      const MV8 out = care_rotate_angles(load8(sub), a, band.axis_x, band.axis_y, order);
      std::copy(out.c.begin(), out.c.end(), sub.begin());
      return;
    }
  }
}

TokenBlock apply_encoding(const TokenBlock& block, const EncodingMethod& method,
                          Direction direction) {
  const std::size_t width = method.width();
  if (block.head_dim() < width) {
    throw std::invalid_argument("apply_encoding: head_dim " + std::to_string(block.head_dim()) +
                                " is smaller than sub-vector width " + std::to_string(width));
  }
  const std::size_t num_bands = block.head_dim() / width;
  if (num_bands > method.schedule.num_bands()) {
    throw std::invalid_argument("apply_encoding: schedule has fewer bands than the head needs");
  }
  TokenBlock out = block;
  for (std::size_t band_index = 0; band_index < num_bands; ++band_index) {
    const Band band = method.band(band_index);
    for (std::size_t t = 0; t < block.tokens(); ++t) {
      const Angles angles = band_angles(method.tag, band, block.positions()[t]);
      for (std::size_t b = 0; b < block.batch(); ++b) {
        rotate_subvector(method.tag, band, angles,
                         out.row(b, t).subspan(band_index * width, width), direction);
      }
    }
  }
  return out;
}

std::vector<double> rotation_gradient(Method method, const Band& band, Angles angles,
                                      std::span<const double> sub, Coordinate coordinate) {
  if (sub.size() != subvector_width(method)) {
    throw std::invalid_argument("rotation_gradient: sub-vector width mismatch");
  }
  const bool wrt_x = coordinate == Coordinate::AngleX;
  switch (method) {
    case Method::Rope1D: {
      if (!wrt_x) return {0.0, 0.0};
      const double c = std::cos(angles.x), s = std::sin(angles.x);
      return {-s * sub[0] - c * sub[1], c * sub[0] - s * sub[1]};
    }
    case Method::Mixed: {
      // Both coordinates drive the same angle; the derivative is u x (R v).
      const Vec3 u = normalized_axis(band.axis_x);
      const Vec3 g = cross(u, mixed_rotate_angles(load3(sub), angles, band.axis_x));
      return {g.begin(), g.end()};
    }
    case Method::Spherical: {
      const Vec3 inner = rotate_xy(load3(sub), angles.y);
      Vec3 g;
      if (wrt_x) {
        // d/da Ryz(a) w = Ryz(a + pi/2) w restricted to the (y, z) plane.
        const Vec3 w = rotate_yz(inner, angles.x);
        g = {0.0, -w[2], w[1]};
      } else {
        g = rotate_yz({-inner[1], inner[0], 0.0}, angles.x);
      }
      return {g.begin(), g.end()};
    }
    case Method::QuatRo: {
      // For a pure unit quaternion u, 1/2 (u y - y u) = u x y.
      const Quaternion rx = axis_rotor(band.axis_x, angles.x);
      const Quaternion ry = axis_rotor(band.axis_y, angles.y);
      const Vec3 ux = normalized_axis(band.axis_x);
      const Vec3 uy = normalized_axis(band.axis_y);
      const Vec3 v = load3(sub);
      Vec3 g;
      // XOuter: out = rx (ry v ry~) rx~.
      if (wrt_x) {
        g = cross(ux, rotate_quat(rx, rotate_quat(ry, v)));
      } else {
        g = rotate_quat(rx, cross(uy, rotate_quat(ry, v)));
      }
      return {g.begin(), g.end()};
    }
    case Method::Care: {
      const MV8 rx = care_rotor(band.axis_x, angles.x);
      const MV8 ry = care_rotor(band.axis_y, angles.y);
      const MV8 m = load8(sub);
      MV8 g;
      // YOuter: out = Ry (Rx m Rx~) Ry~.
      if (wrt_x) {
        const MV8 inner = cl3::mv8_rotor_sandwich(rx, m);
        g = cl3::mv8_rotor_sandwich(ry, half_commutator(unit_bivector(band.axis_x), inner));
      } else {
        const MV8 out = cl3::mv8_rotor_sandwich(ry, cl3::mv8_rotor_sandwich(rx, m));
        g = half_commutator(unit_bivector(band.axis_y), out);
      }
      return {g.c.begin(), g.c.end()};
    }
  }
  return {};
}

std::vector<double> rotation_gradient(Method method, std::span<const double> sub, Position2D p,
                                      const Band& band, Coordinate coordinate) {
  return rotation_gradient(method, band, band_angles(method, band, p), sub, coordinate);
}

}  // namespace cliffrope::rotary
