#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cliffrope/rotary.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cliffrope::rotary;
using cliffrope::cl3::MV8;
using cliffrope::quat::Mat3;
using testutil::max_abs_diff;

namespace {

// Spherical RoPE as the literal product of the two 3x3 matrices.
Mat3 yz_matrix(double a) {
  return {{{1, 0, 0}, {0, std::cos(a), -std::sin(a)}, {0, std::sin(a), std::cos(a)}}};
}
Mat3 xy_matrix(double a) {
  return {{{std::cos(a), -std::sin(a), 0}, {std::sin(a), std::cos(a), 0}, {0, 0, 1}}};
}

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Position2D random_grid_position(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coord(0, 13);
  return {static_cast<double>(coord(rng)), static_cast<double>(coord(rng))};
}

Band random_band(std::mt19937_64& rng) {
  const FrequencySchedule schedule(21);
  std::uniform_int_distribution<std::size_t> pick(0, 20);
  const double theta = schedule.angle(pick(rng));
  return {theta, theta, testutil::random_vec3(rng), testutil::random_vec3(rng)};
}

double grade_norm(const MV8& m, std::initializer_list<std::size_t> slots) {
  double s = 0.0;
  for (auto k : slots) s += m[k] * m[k];
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("frequency schedule") {
  const FrequencySchedule s(32);
  CHECK(s.angle(0) == 1.0);
  for (std::size_t i = 1; i < s.num_bands(); ++i) {
    CHECK(s.angle(i) < s.angle(i - 1));
    CHECK(s.angle(i) > 0.0);
  }
  CHECK(s.angle(16) == doctest::Approx(std::pow(10000.0, -0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(FrequencySchedule(0), std::invalid_argument);
  CHECK_THROWS_AS(FrequencySchedule(4, 1.0), std::invalid_argument);
}

TEST_CASE("axis params") {
  CHECK_THROWS_AS(normalized_axis({0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(normalized_axis({1e-9, 0, 0}), std::invalid_argument);
  CHECK(max_abs_diff(normalized_axis({0, 3, 4}), Vec3{0, 0.6, 0.8}) <= 1e-15);
  const AxisParams per_band({{1, 0, 0}, {0, 1, 0}}, {{0, 0, 1}, {1, 1, 0}});
  CHECK_NOTHROW(per_band.validate(2));
  CHECK_THROWS_AS(per_band.validate(3), std::invalid_argument);
  CHECK_THROWS_AS(AxisParams({{1, 0, 0}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(AxisParams::shared({0, 0, 0}, {1, 0, 0}).validate(1), std::invalid_argument);
  CHECK(AxisParams::shared({1, 2, 3}, {4, 5, 6}).raw_y(17) == Vec3{4, 5, 6});
}

TEST_CASE("rope1d rotation") {
  CHECK(rope1d_rotate({1, 0}, 0.0, 0.5) == Vec2{1, 0});
  CHECK(max_abs_diff(rope1d_rotate({1, 0}, std::numbers::pi / 2, 1.0), Vec2{0, 1}) <= 1e-15);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vec2 v{testutil::normal(rng), testutil::normal(rng)};
    const Vec2 out = rope1d_rotate(v, testutil::uniform(rng, -20, 20), 0.3);
    REQUIRE(std::hypot(out[0], out[1]) == doctest::Approx(std::hypot(v[0], v[1])).epsilon(1e-14));
  }
}

TEST_CASE("spherical rotation matches the two-matrix product") {
  CHECK(spherical_rotate({0.2, -1, 3}, {0, 0}, 0.7) == Vec3{0.2, -1, 3});
  CHECK(max_abs_diff(spherical_rotate({1, 0, 0}, {0, std::numbers::pi / 2}, 1.0), Vec3{0, 1, 0}) <=
        1e-15);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Vec3 v = testutil::random_vec3(rng);
    const Position2D p{testutil::uniform(rng, -10, 10), testutil::uniform(rng, -10, 10)};
    const double theta = testutil::uniform(rng, 0, 1);
    const Mat3 m = cliffrope::quat::operator*(yz_matrix(theta * p.x), xy_matrix(theta * p.y));
    REQUIRE(max_abs_diff(spherical_rotate(v, p, theta), cliffrope::quat::operator*(m, v)) <= 1e-13);
  }
}

TEST_CASE("spherical matrices do not commute") {
  const Vec3 v{1, 0, 0};
  const double a = std::numbers::pi / 2;
  const Vec3 written = cliffrope::quat::operator*(
      cliffrope::quat::operator*(yz_matrix(a), xy_matrix(a)), v);
  const Vec3 swapped = cliffrope::quat::operator*(
      cliffrope::quat::operator*(xy_matrix(a), yz_matrix(a)), v);
  CHECK(max_abs_diff(spherical_rotate(v, {a, a}, 1.0), written) <= 1e-15);
  Vec3 d{written[0] - swapped[0], written[1] - swapped[1], written[2] - swapped[2]};
  CHECK(norm3(d) > 0.5);
}

TEST_CASE("quatro reductions") {
  std::mt19937_64 rng(7);
  CHECK(quatro_rotate({1, 2, 3}, {0, 0}, random_band(rng)) == Vec3{1, 2, 3});
  double worst_orthogonal = 0.0, worst_parallel = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 v = testutil::random_vec3(rng);
    const Position2D p = random_grid_position(rng);
    Band band = random_band(rng);
    const double theta = band.speed_x;

    band.axis_x = {1, 0, 0};
    band.axis_y = {0, 0, 1};
    worst_orthogonal = std::max(worst_orthogonal,
                                max_abs_diff(quatro_rotate(v, p, band), spherical_rotate(v, p, theta)));

    band.axis_y = band.axis_x = testutil::random_vec3(rng);
    const auto single = axis_rotor(band.axis_x, theta * (p.x + p.y));
    const Vec3 expected = cliffrope::quat::operator*(
        cliffrope::quat::quat_to_rotation_matrix(single), v);
    worst_parallel = std::max(worst_parallel, max_abs_diff(quatro_rotate(v, p, band), expected));
    REQUIRE(std::abs(norm3(quatro_rotate(v, p, random_band(rng))) - norm3(v)) <= 1e-10);
  }
  CHECK(worst_orthogonal <= 1e-10);
  CHECK(worst_parallel <= 1e-12);

  Band degenerate;
  degenerate.axis_y = {0, 0, 0};
  CHECK_THROWS_AS(quatro_rotate({1, 0, 0}, {1, 1}, degenerate), std::invalid_argument);
}

TEST_CASE("mixed rotation") {
  std::mt19937_64 rng(9);
  Band band = random_band(rng);
  const Vec3 v = testutil::random_vec3(rng);
  CHECK(max_abs_diff(mixed_rotate(v, {0, 0}, band), v) == 0.0);
  CHECK(max_abs_diff(mixed_rotate(v, {2, 5}, band), mixed_rotate(v, {2 + 3.5, 5 - 3.5}, band)) <=
        1e-14);
  for (int i = 0; i < 1000; ++i) {
    band = random_band(rng);
    band.axis_y = band.axis_x;
    const Vec3 w = testutil::random_vec3(rng);
    const Position2D p{testutil::uniform(rng, -14, 14), testutil::uniform(rng, -14, 14)};
    REQUIRE(max_abs_diff(mixed_rotate(w, p, band), quatro_rotate(w, p, band)) <= 1e-12);
  }
  band.axis_x = {0, 0, 0};
  CHECK_THROWS_AS(mixed_rotate(v, {1, 1}, band), std::invalid_argument);
}

TEST_CASE("care rotation") {
  std::mt19937_64 rng(13);
  const MV8 m = testutil::random_mv8(rng);
  CHECK(care_rotate(m, {0, 0}, random_band(rng)) == m);

  MV8 invariant = MV8::scalar(1.0);
  invariant[MV8::kE123] = 1.0;
  for (int i = 0; i < 100; ++i) {
    const Position2D p{testutil::uniform(rng, -14, 14), testutil::uniform(rng, -14, 14)};
    REQUIRE(care_rotate(invariant, p, random_band(rng)) == invariant);
  }

  double worst_vector = 0.0, worst_mixed = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 v = testutil::random_vec3(rng);
    const Position2D p = random_grid_position(rng);
    Band band = random_band(rng);
    const MV8 rotated = care_rotate(quatro_to_care_vector(v), p, band);
    // CARE puts R_y outermost, so compare against QuatRo with the same order.
    worst_vector = std::max(worst_vector, max_abs_diff(care_vector_to_quatro(rotated),
                                                       quatro_rotate(v, p, band, RotorOrder::YOuter)));
    REQUIRE(grade_norm(rotated, {0, 3, 5, 6, 7}) <= 1e-15);

    band.axis_y = band.axis_x;
    const MV8 parallel = care_rotate(quatro_to_care_vector(v), p, band);
    worst_mixed = std::max(worst_mixed, max_abs_diff(care_vector_to_quatro(parallel), mixed_rotate(v, p, band)));

    const MV8 full = testutil::random_mv8(rng);
    const MV8 out = care_rotate(full, p, random_band(rng));
    REQUIRE(std::abs(grade_norm(out, {1, 2, 4}) - grade_norm(full, {1, 2, 4})) <= 1e-10);
    REQUIRE(std::abs(grade_norm(out, {3, 5, 6}) - grade_norm(full, {3, 5, 6})) <= 1e-10);
  }
  CHECK(worst_vector <= 1e-10);
  CHECK(worst_mixed <= 1e-10);
}

TEST_CASE("vector correspondence is the dual-bivector map") {
  // v -> v e123 is a bivector; read it back as a quaternion.
  std::mt19937_64 rng(17);
  const Vec3 v = testutil::random_vec3(rng);
  const MV8 mv = quatro_to_care_vector(v);
  const MV8 dual = cliffrope::cl3::mv8_product(mv, MV8::unit(MV8::kE123));
  const auto q = cliffrope::quat::even_cl3_to_quat(cliffrope::cl3::mv8_to_multivector(dual));
  CHECK(max_abs_diff(Vec3{q.x, q.y, q.z}, v) <= 1e-15);
  CHECK(care_vector_to_quatro(mv) == v);
}

TEST_CASE("make_encoding and block shapes") {
  CHECK(make_encoding(Method::Care, 64).schedule.num_bands() == 8);
  CHECK(make_encoding(Method::QuatRo, 64).schedule.num_bands() == 21);
  CHECK(make_encoding(Method::Rope1D, 64).schedule.num_bands() == 32);
  CHECK_THROWS_AS(make_encoding(Method::Care, 7), std::invalid_argument);
  CHECK_THROWS_AS(make_encoding(Method::QuatRo, 64, AxisParams::shared({0, 0, 0}, {1, 0, 0})),
                  std::invalid_argument);
  CHECK(parse_method("care") == Method::Care);
  CHECK_FALSE(parse_method("axial").has_value());
  CHECK_THROWS_AS(TokenBlock(1, 2, 3, {{0, 0}}), std::invalid_argument);
}

TEST_CASE("apply_encoding") {
  std::mt19937_64 rng(19);
  auto positions = grid_positions(14, 14);
  CHECK(positions[15] == Position2D{1, 1});
  CHECK(positions[13] == Position2D{13, 0});
  std::vector<double> data(2 * 196 * 64);
  for (double& d : data) d = testutil::normal(rng);
  const TokenBlock block(2, 196, 64, positions, data);
  const TokenBlock at_origin(2, 196, 64, std::vector<Position2D>(196), data);

  const AxisParams axes = AxisParams::shared({1, 2, 0.5}, {-0.3, 1, 2});
  for (Method tag : kAllMethods) {
    CAPTURE(method_name(tag));
    const auto method = make_encoding(tag, 64, axes);
    const auto unchanged = apply_encoding(at_origin, method);
    CHECK(max_abs_diff(unchanged.data(), at_origin.data()) == 0.0);

    const auto encoded = apply_encoding(block, method);
    const auto recovered = apply_encoding(encoded, method, Direction::Inverse);
    CHECK(max_abs_diff(recovered.data(), block.data()) <= 1e-10);

    const std::size_t width = method.width();
    const std::size_t used = (64 / width) * width;
    double worst_norm = 0.0, worst_tail = 0.0;
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t t = 0; t < 196; ++t) {
        const auto in = block.row(b, t), out = encoded.row(b, t);
        for (std::size_t s = 0; s + width <= 64; s += width) {
          const double ni = std::sqrt(dot(in.subspan(s, width), in.subspan(s, width)));
          const double no = std::sqrt(dot(out.subspan(s, width), out.subspan(s, width)));
          worst_norm = std::max(worst_norm, std::abs(ni - no));
        }
        worst_tail = std::max(worst_tail, max_abs_diff(in.subspan(used), out.subspan(used)));
      }
    }
    CHECK(worst_norm <= 1e-10);
    CHECK(worst_tail == 0.0);
  }

  const auto care = apply_encoding(block, make_encoding(Method::Care, 64, axes));
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t t = 0; t < 196; ++t) {
      for (std::size_t s = 0; s < 64; s += 8) {
        REQUIRE(care.row(b, t)[s] == block.row(b, t)[s]);
        REQUIRE(care.row(b, t)[s + 7] == block.row(b, t)[s + 7]);
      }
    }
  }

  const TokenBlock narrow(1, 1, 2, {{1, 1}});
  CHECK_THROWS_AS(apply_encoding(narrow, make_encoding(Method::QuatRo, 3)), std::invalid_argument);
}

TEST_CASE("relative property holds for Mixed and 1D RoPE, fails for Spherical and QuatRo") {
  std::mt19937_64 rng(43);
  const AxisParams axes = AxisParams::shared({1, 2, 0.5}, {-0.3, 1, 2});
  const auto shift_gap = [&](Method tag) {
    const auto method = make_encoding(tag, 24, axes);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> q(24), k(24);
      for (double& x : q) x = testutil::normal(rng);
      for (double& x : k) x = testutil::normal(rng);
      const Position2D pq = random_grid_position(rng), pk = random_grid_position(rng);
      const Position2D shift{testutil::uniform(rng, -10, 10), testutil::uniform(rng, -10, 10)};
      const auto enc = [&](const std::vector<double>& x, Position2D p) {
        return apply_encoding(TokenBlock(1, 1, 24, {p}, x), method);
      };
      const double base = dot(enc(q, pq).data(), enc(k, pk).data());
      const double moved = dot(enc(q, pq + shift).data(), enc(k, pk + shift).data());
      worst = std::max(worst, std::abs(base - moved));
    }
    return worst;
  };
  CHECK(shift_gap(Method::Mixed) <= 1e-8);
  CHECK(shift_gap(Method::Rope1D) <= 1e-8);
  CHECK(shift_gap(Method::Spherical) > 1e-3);
  CHECK(shift_gap(Method::QuatRo) > 1e-3);
  CHECK(shift_gap(Method::Care) > 1e-3);
}

TEST_CASE("rotation gradient") {
  // d/dtheta (cos theta e1 - sin theta e2) at 0 is -e2.
  Band band;
  band.axis_x = {1, 0, 0};  // i -> e12
  const MV8 e1 = MV8::unit(MV8::kE1);
  const auto g = rotation_gradient(Method::Care, band, {0, 0}, e1.c, Coordinate::AngleX);
  CHECK(max_abs_diff(std::span<const double>(g), MV8::unit(MV8::kE2, -1.0).c) <= 1e-15);

  std::mt19937_64 rng(47);
  const double h = 1e-5;
  double worst = 0.0;
  for (Method tag : kAllMethods) {
    for (int trial = 0; trial < 200; ++trial) {
      const Band b = random_band(rng);
      const Angles angles{testutil::uniform(rng, -5, 5), testutil::uniform(rng, -5, 5)};
      std::vector<double> v(subvector_width(tag));
      for (double& x : v) x = testutil::normal(rng);
      for (Coordinate c : {Coordinate::AngleX, Coordinate::AngleY}) {
        const double dx = c == Coordinate::AngleX ? h : 0.0, dy = h - dx;
        auto plus = v, minus = v;
        rotate_subvector(tag, b, {angles.x + dx, angles.y + dy}, plus);
        rotate_subvector(tag, b, {angles.x - dx, angles.y - dy}, minus);
        const auto analytic = rotation_gradient(tag, b, angles, v, c);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
          const double fd = (plus[k] - minus[k]) / (2 * h);
          num += (analytic[k] - fd) * (analytic[k] - fd);
          den = std::max(den, std::abs(analytic[k]));
        }
        if (tag == Method::Rope1D && c == Coordinate::AngleY) {
          REQUIRE(std::sqrt(num) == 0.0);
          continue;
        }
        worst = std::max(worst, std::sqrt(num) / std::max(den, 1e-3));
        if (tag == Method::Care) {
          REQUIRE(analytic[0] == 0.0);
          REQUIRE(analytic[7] == 0.0);
        }
      }
    }
  }
  CHECK(worst <= 1e-6);
}
