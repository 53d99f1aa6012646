#include "cliffrope/checks.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "cliffrope/ga_core.hpp"
#include "cliffrope/harness.hpp"
#include "cliffrope/quat.hpp"
#include "cliffrope/rotary.hpp"

namespace cliffrope::checks {
namespace {

using ga::Multivector;

class Random {
 public:
  explicit Random(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Multivector multivector(int dim) {
    Multivector m(dim);
    for (double& c : m.coeffs()) c = normal();
    return m;
  }
  Multivector vector(int dim) { return ga::grade_project(multivector(dim), 1); }
  Multivector unit_bivector(int dim) {
    Multivector b = ga::grade_project(vector(dim) * vector(dim), 2);
    return b * (1.0 / ga::mv_norm(b));
  }
  ga::Rotor rotor(int dim) { return ga::rotor_exp(unit_bivector(dim), uniform(-M_PI, M_PI)); }
  quat::Quaternion unit_quaternion() {
    const quat::Quaternion q{normal(), normal(), normal(), normal()};
    return q * (1.0 / q.norm());
  }
  quat::Vec3 vec3() { return {normal(), normal(), normal()}; }
  cl3::MV8 mv8() {
    cl3::MV8 m;
    for (double& c : m.c) c = normal();
    return m;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_diff(const Multivector& a, const Multivector& b) { return max_diff(a.coeffs(), b.coeffs()); }

PropertyResult at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

PropertyResult above(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value > threshold};
}

SuiteResult blade_sign_law() {
  double support_errors = 0.0, square_errors = 0.0;
  for (int dim = 1; dim <= 5; ++dim) {
    const auto n = ga::BladeMask{1} << dim;
    for (ga::BladeMask a = 0; a < n; ++a) {
      for (ga::BladeMask b = 0; b < n; ++b) {
        const auto prod = Multivector::blade(dim, a) * Multivector::blade(dim, b);
        for (ga::BladeMask k = 0; k < n; ++k) {
          const bool expected = k == (a ^ b);
          if (expected != (prod[k] != 0.0) || (expected && std::abs(prod[k]) != 1.0)) {
            support_errors += 1.0;
          }
        }
      }
      const auto square = Multivector::blade(dim, a) * Multivector::blade(dim, a);
      if (square[0] != ga::reverse_sign(std::popcount(a))) square_errors += 1.0;
    }
  }
  return {"ga_core.blade-sign-law",
          {at_most("xor-support", support_errors, 0.0), at_most("square-sign", square_errors, 0.0)}};
}

SuiteResult associativity(Random& rnd) {
  double worst = 0.0;
  for (int dim = 1; dim <= 5; ++dim) {
    for (int i = 0; i < 40; ++i) {
      const auto a = rnd.multivector(dim), b = rnd.multivector(dim), c = rnd.multivector(dim);
      worst = std::max(worst, max_diff((a * b) * c, a * (b * c)));
    }
  }
  return {"ga_core.associativity", {at_most("triple-products", worst, 1e-12)}};
}

SuiteResult rotors(Random& rnd) {
  double series = 0.0, additivity = 0.0, composition = 0.0, grades = 0.0, norms = 0.0,
         central = 0.0;
  for (int dim = 2; dim <= 5; ++dim) {
    for (int i = 0; i < 25; ++i) {
      const auto b = rnd.unit_bivector(dim);
      const double t = rnd.uniform(-M_PI, M_PI);
      Multivector sum = Multivector::scalar(dim, 1.0), term = sum;
      for (int k = 1; k <= 30; ++k) {
        term = term * b * (t / k);
        sum += term;
      }
      series = std::max(series, max_diff(ga::rotor_exp(b, t).value(), sum));

      const double s = rnd.uniform(-2, 2);
      additivity = std::max(additivity, max_diff(ga::rotor_exp(b, s).value() * ga::rotor_exp(b, t).value(),
                                                 ga::rotor_exp(b, s + t).value()));

      const auto r1 = rnd.rotor(dim), r2 = rnd.rotor(dim);
      const auto a = rnd.multivector(dim);
      composition = std::max(composition, max_diff(ga::sandwich(ga::compose(r1, r2), a),
                                                   ga::sandwich(r1, ga::sandwich(r2, a))));
      const auto out = ga::sandwich(r1, a);
      for (int g = 0; g <= dim; ++g) {
        grades = std::max(grades, max_diff(ga::grade_project(out, g),
                                           ga::sandwich(r1, ga::grade_project(a, g))));
      }
      const auto v = ga::grade_project(a, 1);
      norms = std::max(norms, std::abs(ga::mv_norm(ga::sandwich(r1, v)) - ga::mv_norm(v)));
    }
  }
  const auto e123 = Multivector::blade(3, 0b111);
  for (int i = 0; i < 50; ++i) {
    const auto r = rnd.rotor(3);
    central = std::max(central, max_diff(ga::sandwich(r, e123), e123));
    central = std::max(central, max_diff(ga::sandwich(r, Multivector::scalar(3, 1.0)),
                                         Multivector::scalar(3, 1.0)));
  }
  return {"ga_core.rotor",
          {at_most("exp-vs-power-series", series, 1e-12),
           at_most("same-plane-additivity", additivity, 1e-12),
           at_most("sandwich-composition", composition, 1e-12),
           at_most("sandwich-preserves-grade", grades, 1e-12),
           at_most("grade1-norm-preserved", norms, 1e-12),
           at_most("cl3-scalar-pseudoscalar-fixed", central, 1e-12)}};
}

SuiteResult isomorphism(Random& rnd) {
  const quat::Quaternion basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  double mismatches = 0.0;
  for (const auto& p : basis) {
    for (const auto& q : basis) {
      if (!(quat::quat_to_even_cl3(p * q) == quat::quat_to_even_cl3(p) * quat::quat_to_even_cl3(q))) {
        mismatches += 1.0;
      }
    }
  }
  double worst = 0.0, round_trip = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const quat::Quaternion p{rnd.normal(), rnd.normal(), rnd.normal(), rnd.normal()};
    const quat::Quaternion q{rnd.normal(), rnd.normal(), rnd.normal(), rnd.normal()};
    worst = std::max(worst, max_diff(quat::quat_to_even_cl3(p * q),
                                     quat::quat_to_even_cl3(p) * quat::quat_to_even_cl3(q)));
    if (!(quat::even_cl3_to_quat(quat::quat_to_even_cl3(q)) == q)) round_trip += 1.0;
  }
  return {"quat.isomorphism",
          {at_most("basis-table-exact", mismatches, 0.0), at_most("random-homomorphism", worst, 1e-12),
           at_most("round-trip-exact", round_trip, 0.0)}};
}

SuiteResult quaternion_rotation(Random& rnd) {
  double matrix = 0.0, norm = 0.0, composition = 0.0, cover = 0.0, det = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto r1 = rnd.unit_quaternion(), r2 = rnd.unit_quaternion();
    const auto v = quat::PureQuaternion::from_vec3(rnd.vec3());
    const auto out = quat::quat_sandwich(r1, v);
    const auto m = quat::quat_to_rotation_matrix(r1);
    matrix = std::max(matrix, max_diff(quat::operator*(m, v.as_vec3()), out.as_vec3()));
    det = std::max(det, std::abs(quat::determinant(m) - 1.0));
    norm = std::max(norm, std::abs(out.norm() - v.norm()));
    composition = std::max(composition, max_diff(quat::quat_sandwich(r1 * r2, v).as_vec3(),
                                                 quat::quat_sandwich(r1, quat::quat_sandwich(r2, v)).as_vec3()));
    cover = std::max(cover, max_diff(quat::quat_sandwich(-r1, v).as_vec3(), out.as_vec3()));
  }
  return {"quat.rotation",
          {at_most("matrix-oracle", matrix, 1e-12), at_most("determinant-one", det, 1e-12),
           at_most("norm-preserved", norm, 1e-12), at_most("composition", composition, 1e-12),
           at_most("double-cover", cover, 1e-15)}};
}

SuiteResult oracle_equivalence(Random& rnd, const CheckOptions& options) {
  double basis = 0.0, product = 0.0, sandwich = 0.0, passthrough = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      cl3::MV8 a, b;
      a[i] = 1.0;
      b[j] = 1.0;
      const auto expected = cl3::mv8_from_multivector(cl3::mv8_to_multivector(a) * cl3::mv8_to_multivector(b));
      basis = std::max(basis, max_diff(options.mv8_product(a, b).c, expected.c));
    }
  }
  for (int i = 0; i < 10000; ++i) {
    const auto a = rnd.mv8(), b = rnd.mv8();
    const auto generic = cl3::mv8_from_multivector(cl3::mv8_to_multivector(a) * cl3::mv8_to_multivector(b));
    product = std::max(product, max_diff(options.mv8_product(a, b).c, generic.c));

    const auto rotor = rnd.rotor(3);
    const auto r8 = cl3::mv8_from_multivector(rotor.value());
    const auto expected = cl3::mv8_from_multivector(ga::sandwich(rotor, cl3::mv8_to_multivector(a)));
    const auto fused = cl3::mv8_rotor_sandwich(r8, a);
    sandwich = std::max(sandwich, max_diff(fused.c, expected.c));
    passthrough = std::max({passthrough, std::abs(fused[0] - a[0]), std::abs(fused[7] - a[7])});
  }
  return {"cl3_fast.oracle-equivalence",
          {at_most("mv8-product-basis-table", basis, 0.0),
           at_most("mv8-product-vs-ga-core", product, 1e-13),
           at_most("mv8-sandwich-vs-ga-core", sandwich, 1e-13),
           at_most("scalar-pseudoscalar-passthrough", passthrough, 1e-15)}};
}

SuiteResult reductions(std::uint64_t seed) {
  harness::SampleSetup setup;
  setup.seed = seed;
  SuiteResult suite{"rotary.reductions", {}};
  for (const auto& r : harness::evaluate_reductions(setup)) {
    suite.properties.push_back(at_most(r.name, r.max_abs_dev, 1e-10));
  }
  return suite;
}

SuiteResult encoding_invariants(Random& rnd) {
  const auto positions = rotary::grid_positions(14, 14);
  std::vector<double> data(2 * positions.size() * 64);
  for (double& d : data) d = rnd.normal();
  const rotary::TokenBlock block(2, positions.size(), 64, positions, data);
  const rotary::AxisParams axes(std::vector<rotary::Vec3>{rnd.vec3()}, std::vector<rotary::Vec3>{rnd.vec3()});

  double norm = 0.0, inverse = 0.0, channels = 0.0;
  for (rotary::Method tag : rotary::kAllMethods) {
    const auto method = rotary::make_encoding(tag, 64, axes);
    const auto encoded = rotary::apply_encoding(block, method);
    const auto recovered = rotary::apply_encoding(encoded, method, rotary::Direction::Inverse);
    inverse = std::max(inverse, max_diff(recovered.data(), block.data()));
    const std::size_t width = method.width();
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t t = 0; t < positions.size(); ++t) {
        const auto in = block.row(b, t), out = encoded.row(b, t);
        for (std::size_t s = 0; s + width <= 64; s += width) {
          double ni = 0.0, no = 0.0;
          for (std::size_t k = s; k < s + width; ++k) {
            ni += in[k] * in[k];
            no += out[k] * out[k];
          }
          norm = std::max(norm, std::abs(std::sqrt(ni) - std::sqrt(no)));
          if (tag == rotary::Method::Care) {
            channels = std::max({channels, std::abs(in[s] - out[s]), std::abs(in[s + 7] - out[s + 7])});
          }
        }
      }
    }
  }
  return {"rotary.invariants",
          {at_most("subvector-norm-preserved", norm, 1e-10),
           at_most("inverse-round-trip", inverse, 1e-10),
           at_most("care-invariant-channels", channels, 1e-15)}};
}

SuiteResult gradients(std::uint64_t seed) {
  harness::SampleSetup setup;
  setup.seed = seed;
  setup.samples = 200;
  double rel = 0.0, invariant = 0.0;
  for (const auto& g : harness::evaluate_gradients(setup, {1e-5})) {
    rel = std::max(rel, g.max_rel_err);
    invariant = std::max(invariant, g.max_invariant_abs);
  }
  return {"rotary.gradients",
          {at_most("analytic-vs-central-difference", rel, 1e-6),
           at_most("care-invariant-slot-gradient", invariant, 1e-10)}};
}

SuiteResult equivariance(Random& rnd, std::uint64_t seed) {
  const auto positions = rotary::grid_positions(6, 6);
  const auto block = [&] {
    std::vector<double> data(positions.size() * 24);
    for (double& d : data) d = rnd.normal();
    return rotary::TokenBlock(1, positions.size(), 24, positions, data);
  };
  const auto q = block(), k = block();
  const rotary::AxisParams axes(std::vector<rotary::Vec3>{rnd.vec3()}, std::vector<rotary::Vec3>{rnd.vec3()});
  double mixed = 0.0, rope = 0.0, zero_shift = 0.0;
  for (int i = 0; i < 20; ++i) {
    const rotary::Position2D shift{rnd.uniform(-20, 20), rnd.uniform(-20, 20)};
    mixed = std::max(mixed, harness::shift_invariance_gap(rotary::make_encoding(rotary::Method::Mixed, 24, axes), q, k, shift));
    rope = std::max(rope, harness::shift_invariance_gap(rotary::make_encoding(rotary::Method::Rope1D, 24, axes), q, k, shift));
  }
  for (rotary::Method tag : rotary::kAllMethods) {
    zero_shift = std::max(zero_shift, harness::shift_invariance_gap(rotary::make_encoding(tag, 24, axes), q, k, {0, 0}));
  }
  const double spherical = harness::search_shift_witness(rotary::Method::Spherical, seed, 1e-3).recorded_gap;
  const double quatro = harness::search_shift_witness(rotary::Method::QuatRo, seed, 1e-3).recorded_gap;
  return {"harness.equivariance",
          {at_most("mixed-shift-gap", mixed, 1e-8), at_most("rope1d-shift-gap", rope, 1e-8),
           at_most("zero-shift-gap", zero_shift, 1e-15),
           above("spherical-witness-gap", spherical, 1e-3),
           above("quatro-witness-gap", quatro, 1e-3)}};
}

}  // namespace

bool SuiteResult::pass() const {
  for (const auto& p : properties) {
    if (!p.pass) return false;
  }
  return true;
}

std::vector<SuiteResult> run_all_suites(std::uint64_t seed, const CheckOptions& options) {
  Random rnd(seed);
  std::vector<SuiteResult> suites;
  suites.push_back(blade_sign_law());
  suites.push_back(associativity(rnd));
  suites.push_back(rotors(rnd));
  suites.push_back(isomorphism(rnd));
  suites.push_back(quaternion_rotation(rnd));
  suites.push_back(oracle_equivalence(rnd, options));
  suites.push_back(reductions(seed));
  suites.push_back(encoding_invariants(rnd));
  suites.push_back(gradients(seed));
  suites.push_back(equivariance(rnd, seed));
  return suites;
}

void print_suites(std::ostream& out, const std::vector<SuiteResult>& suites) {
  char buffer[256];
  std::size_t failed = 0;
  for (const auto& suite : suites) {
    if (suite.pass()) {
      out << "PASS " << suite.name << " (" << suite.properties.size() << " properties)\n";
      continue;
    }
    ++failed;
    out << "FAIL " << suite.name << '\n';
    for (const auto& p : suite.properties) {
      if (p.pass) continue;
      std::snprintf(buffer, sizeof buffer, "  %s: %s = %.3e (limit %.3e)\n", suite.name.c_str(),
                    p.name.c_str(), p.value, p.threshold);
      out << buffer;
    }
  }
  out << suites.size() << " suites, " << failed << " failed\n";
}

}  // namespace cliffrope::checks
