#include "cliffrope/harness.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace cliffrope::harness {

using rotary::Position2D;
using rotary::TokenBlock;

AttentionScores score_matrix(const TokenBlock& q, const TokenBlock& k,
                             const rotary::EncodingMethod& method) {
  if (q.batch() != k.batch() || q.tokens() != k.tokens() || q.head_dim() != k.head_dim()) {
    throw std::invalid_argument("score_matrix: query and key blocks differ in shape");
  }
  for (std::size_t t = 0; t < q.tokens(); ++t) {
    if (!(q.positions()[t] == k.positions()[t])) {
      throw std::invalid_argument("score_matrix: query and key positions differ");
    }
  }
  const TokenBlock qe = rotary::apply_encoding(q, method);
  const TokenBlock ke = rotary::apply_encoding(k, method);
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.head_dim()));

  AttentionScores out{q.batch(), q.tokens(), {}};
  out.scores.resize(q.batch() * q.tokens() * q.tokens());
  for (std::size_t b = 0; b < q.batch(); ++b) {
    for (std::size_t i = 0; i < q.tokens(); ++i) {
      const auto qi = qe.row(b, i);
      for (std::size_t j = 0; j < q.tokens(); ++j) {
        const auto kj = ke.row(b, j);
        double s = 0.0;
        for (std::size_t d = 0; d < qi.size(); ++d) s += qi[d] * kj[d];
        out.scores[(b * q.tokens() + i) * q.tokens() + j] = s * scale;
      }
    }
  }
  return out;
}

double max_abs_diff(const AttentionScores& a, const AttentionScores& b) {
  if (a.scores.size() != b.scores.size()) {
    throw std::invalid_argument("max_abs_diff: score matrices differ in shape");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.scores.size(); ++i) {
    worst = std::max(worst, std::abs(a.scores[i] - b.scores[i]));
  }
  return worst;
}

TokenBlock shifted(const TokenBlock& block, Position2D shift) {
  TokenBlock out = block;
  for (auto& p : out.mutable_positions()) p = p + shift;
  return out;
}

double shift_invariance_gap(const rotary::EncodingMethod& method, const TokenBlock& q,
                            const TokenBlock& k, Position2D shift) {
  return max_abs_diff(score_matrix(q, k, method),
                      score_matrix(shifted(q, shift), shifted(k, shift), method));
}

double commutator_norm(rotary::Method method, Position2D a, Position2D b, const rotary::Band& band,
                       std::size_t directions) {
  const std::size_t width = rotary::subvector_width(method);
  const rotary::Angles angles_a = rotary::band_angles(method, band, a);
  const rotary::Angles angles_b = rotary::band_angles(method, band, b);
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> normal;
  std::vector<double> v(width), ab(width), ba(width);
  double worst = 0.0;
  for (std::size_t n = 0; n < directions; ++n) {
    double norm2 = 0.0;
    for (double& x : v) {
      x = normal(rng);
      norm2 += x * x;
    }
    for (double& x : v) x /= std::sqrt(norm2);
    ab = v;
    rotary::rotate_subvector(method, band, angles_b, ab);
    rotary::rotate_subvector(method, band, angles_a, ab);
    ba = v;
    rotary::rotate_subvector(method, band, angles_a, ba);
    rotary::rotate_subvector(method, band, angles_b, ba);
    double d2 = 0.0;
    for (std::size_t i = 0; i < width; ++i) d2 += (ab[i] - ba[i]) * (ab[i] - ba[i]);
    worst = std::max(worst, std::sqrt(d2));
  }
  return worst;
}

rotary::EncodingMethod ShiftWitness::encoding() const {
  return rotary::make_encoding(method, head_dim, rotary::AxisParams::shared(axis_x, axis_y), base);
}

TokenBlock ShiftWitness::q_block() const {
  return TokenBlock(1, positions.size(), head_dim, positions, q);
}

TokenBlock ShiftWitness::k_block() const {
  return TokenBlock(1, positions.size(), head_dim, positions, k);
}

double ShiftWitness::gap() const {
  return shift_invariance_gap(encoding(), q_block(), k_block(), shift);
}

ShiftWitness search_shift_witness(rotary::Method method, std::uint64_t seed, double min_gap,
                                  int attempts) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> grid(0, 13);
  std::uniform_int_distribution<int> offset(-7, 7);
  const auto round6 = [](double x) { return std::round(x * 1e6) / 1e6; };

  ShiftWitness w;
  w.method = method;
  w.head_dim = rotary::subvector_width(method);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (method == rotary::Method::QuatRo || method == rotary::Method::Care) {
      w.axis_x = {round6(normal(rng)), round6(normal(rng)), round6(normal(rng))};
      w.axis_y = {round6(normal(rng)), round6(normal(rng)), round6(normal(rng))};
    }
    w.positions = {{double(grid(rng)), double(grid(rng))}, {double(grid(rng)), double(grid(rng))}};
    w.q.assign(2 * w.head_dim, 0.0);
    w.k.assign(2 * w.head_dim, 0.0);
    for (double& x : w.q) x = round6(normal(rng));
    for (double& x : w.k) x = round6(normal(rng));
    w.shift = {double(offset(rng)), double(offset(rng))};
    w.recorded_gap = w.gap();
    if (w.recorded_gap > min_gap) return w;
  }
  throw std::runtime_error("search_shift_witness: no witness found for " +
                           std::string(rotary::method_name(method)));
}

namespace {

struct Sampler {
  explicit Sampler(const SampleSetup& setup)
      : rng(setup.seed),
        schedule(std::max<std::size_t>(1, setup.head_dim / 3), setup.base),
        grid_x(0, static_cast<int>(setup.grid_w) - 1),
        grid_y(0, static_cast<int>(setup.grid_h) - 1),
        band_index(0, schedule.num_bands() - 1),
        scale_x(setup.scale_x),
        scale_y(setup.scale_y) {}

  double normal() { return normal_dist(rng); }
  rotary::Vec3 vec3() { return {normal(), normal(), normal()}; }
  Position2D position() { return {double(grid_x(rng)), double(grid_y(rng))}; }
  rotary::Band band() {
    const double theta = schedule.angle(band_index(rng));
    return {theta * scale_x, theta * scale_y, vec3(), vec3()};
  }

  std::mt19937_64 rng;
  rotary::FrequencySchedule schedule;
  std::normal_distribution<double> normal_dist;
  std::uniform_int_distribution<int> grid_x;
  std::uniform_int_distribution<int> grid_y;
  std::uniform_int_distribution<std::size_t> band_index;
  double scale_x;
  double scale_y;
};

double max_diff(const rotary::Vec3& a, const rotary::Vec3& b) {
  return std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2])});
}

// Deviation of a CARE result from a grade-1 expectation, counting any leakage into other slots.
double care_vector_dev(const cl3::MV8& m, const rotary::Vec3& expected) {
  double dev = max_diff(rotary::care_vector_to_quatro(m), expected);
  for (std::size_t k : {0, 3, 5, 6, 7}) dev = std::max(dev, std::abs(m[k]));
  return dev;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<ReductionResult> evaluate_reductions(const SampleSetup& setup) {
  using rotary::Method;
  Sampler sampler(setup);
  std::vector<ReductionResult> out = {{"quatro_orthogonal_eq_spherical", 0.0},
                                      {"quatro_parallel_eq_mixed", 0.0},
                                      {"care_grade1_eq_quatro", 0.0},
                                      {"care_parallel_eq_mixed", 0.0}};
  for (std::size_t n = 0; n < setup.samples; ++n) {
    const rotary::Vec3 v = sampler.vec3();
    const Position2D p = sampler.position();
    rotary::Band band = sampler.band();
    const rotary::Angles angles = rotary::band_angles(Method::QuatRo, band, p);

    rotary::Band principal = band;
    principal.axis_x = {1.0, 0.0, 0.0};
    principal.axis_y = {0.0, 0.0, 1.0};
    out[0].max_abs_dev = std::max(out[0].max_abs_dev,
                                  max_diff(rotary::quatro_rotate(v, p, principal),
                                           rotary::spherical_rotate_angles(v, angles)));

    rotary::Band parallel = band;
    parallel.axis_y = parallel.axis_x;
    const rotary::Vec3 mixed = rotary::mixed_rotate(v, p, parallel);
    out[1].max_abs_dev =
        std::max(out[1].max_abs_dev, max_diff(rotary::quatro_rotate(v, p, parallel), mixed));

    const cl3::MV8 vector = rotary::quatro_to_care_vector(v);
    const cl3::MV8 care = rotary::care_rotate(vector, p, band);
    out[2].max_abs_dev =
        std::max(out[2].max_abs_dev,
                 care_vector_dev(care, rotary::quatro_rotate(v, p, band, rotary::RotorOrder::YOuter)));

    out[3].max_abs_dev = std::max(out[3].max_abs_dev,
                                  care_vector_dev(rotary::care_rotate(vector, p, parallel), mixed));
  }
  return out;
}

std::vector<GradientResult> evaluate_gradients(const SampleSetup& setup,
                                               const std::vector<double>& steps) {
  for (double h : steps) {
    if (!(h > 0.0)) throw std::invalid_argument("evaluate_gradients: steps must be positive");
  }
  std::vector<GradientResult> out;
  for (rotary::Method method : rotary::kAllMethods) {
    for (rotary::Coordinate coordinate : {rotary::Coordinate::AngleX, rotary::Coordinate::AngleY}) {
      for (double h : steps) {
        // Same samples for every step so the error curve is comparable.
        Sampler sampler(setup);
        GradientResult result{method, coordinate, h, setup.samples, 0.0, 0.0};
        const std::size_t width = rotary::subvector_width(method);
        std::vector<double> v(width), plus(width), minus(width), numeric(width), diff(width);
        for (std::size_t n = 0; n < setup.samples; ++n) {
          for (double& x : v) x = sampler.normal();
          const rotary::Band band = sampler.band();
          const rotary::Angles angles = rotary::band_angles(method, band, sampler.position());
          const double dx = coordinate == rotary::Coordinate::AngleX ? h : 0.0;
          const double dy = h - dx;
          plus = v;
          minus = v;
          rotary::rotate_subvector(method, band, {angles.x + dx, angles.y + dy}, plus);
          rotary::rotate_subvector(method, band, {angles.x - dx, angles.y - dy}, minus);
          const auto analytic = rotary::rotation_gradient(method, band, angles, v, coordinate);
          for (std::size_t k = 0; k < width; ++k) {
            numeric[k] = (plus[k] - minus[k]) / (2.0 * h);
            diff[k] = analytic[k] - numeric[k];
          }
          const double scale = std::max(norm(analytic), norm(numeric));
          if (scale > 0.0) result.max_rel_err = std::max(result.max_rel_err, norm(diff) / scale);
          if (method == rotary::Method::Care) {
            for (std::size_t k : {0, 7}) {
              result.max_invariant_abs = std::max(
                  {result.max_invariant_abs, std::abs(analytic[k]), std::abs(numeric[k])});
            }
          }
        }
        out.push_back(result);
      }
    }
  }
  return out;
}

std::string witnesses_to_json(const std::vector<ShiftWitness>& witnesses) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& w : witnesses) {
    nlohmann::json positions = nlohmann::json::array();
    for (const auto& p : w.positions) positions.push_back({p.x, p.y});
    out.push_back({
        {"method", rotary::method_name(w.method)},
        {"head_dim", w.head_dim},
        {"base", w.base},
        {"axis_x", w.axis_x},
        {"axis_y", w.axis_y},
        {"positions", positions},
        {"q", w.q},
        {"k", w.k},
        {"shift", {w.shift.x, w.shift.y}},
        {"recorded_gap", w.recorded_gap},
    });
  }
  return out.dump(2) + "\n";
}

std::vector<ShiftWitness> witnesses_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  std::vector<ShiftWitness> out;
  for (const auto& item : doc) {
    ShiftWitness w;
    const auto name = item.at("method").get<std::string>();
    const auto method = rotary::parse_method(name);
    if (!method) throw std::invalid_argument("witness: unknown method '" + name + "'");
    w.method = *method;
    w.head_dim = item.at("head_dim").get<std::size_t>();
    w.base = item.at("base").get<double>();
    w.axis_x = item.at("axis_x").get<rotary::Vec3>();
    w.axis_y = item.at("axis_y").get<rotary::Vec3>();
    for (const auto& p : item.at("positions")) {
      w.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    w.q = item.at("q").get<std::vector<double>>();
    w.k = item.at("k").get<std::vector<double>>();
    w.shift = {item.at("shift").at(0).get<double>(), item.at("shift").at(1).get<double>()};
    w.recorded_gap = item.at("recorded_gap").get<double>();
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace cliffrope::harness
