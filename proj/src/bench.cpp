#include "cliffrope/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cliffrope/ga_core.hpp"
#include "cliffrope/quat.hpp"
#include "cliffrope/rotary.hpp"

namespace cliffrope::bench {
namespace {

using rotary::Angles;
using rotary::Method;

// Inputs shared by every kernel: one random head per (batch, token) and
// per-band random axes.
struct Inputs {
  std::size_t batch = 0;
  std::size_t tokens = 0;
  std::size_t head_dim = 0;
  std::vector<double> data;
  std::vector<rotary::Position2D> positions;
  std::vector<rotary::Vec3> axes_x;
  std::vector<rotary::Vec3> axes_y;
  double base = 10000.0;
};

struct Kernel {
  Method method;
  std::function<void(const Inputs&, const rotary::EncodingMethod&, std::vector<double>&)> run;
};

// Applies `rotate(band, angles, sub)` to every sub-vector of every head.
template <typename Rotate>
void for_each_subvector(const Inputs& in, const rotary::EncodingMethod& method,
                        std::vector<double>& out, Rotate&& rotate) {
  std::copy(in.data.begin(), in.data.end(), out.begin());
  const std::size_t width = method.width();
  const std::size_t bands = in.head_dim / width;
  for (std::size_t t = 0; t < in.tokens; ++t) {
    for (std::size_t i = 0; i < bands; ++i) {
      const rotary::Band band = method.band(i);
      const Angles angles = rotary::band_angles(method.tag, band, in.positions[t]);
      for (std::size_t b = 0; b < in.batch; ++b) {
        double* sub = out.data() + (b * in.tokens + t) * in.head_dim + i * width;
        rotate(band, angles, std::span<double>(sub, width));
      }
    }
  }
}

void run_planar(const Inputs& in, const rotary::EncodingMethod& method, std::vector<double>& out) {
  for_each_subvector(in, method, out, [](const rotary::Band&, Angles a, std::span<double> sub) {
    const rotary::Vec2 v = rotary::rope1d_rotate({sub[0], sub[1]}, a.x, 1.0);
    sub[0] = v[0];
    sub[1] = v[1];
  });
}

void run_method(const Inputs& in, const rotary::EncodingMethod& method, std::vector<double>& out) {
  for_each_subvector(in, method, out, [&](const rotary::Band& band, Angles a, std::span<double> sub) {
    rotary::rotate_subvector(method.tag, band, a, sub);
  });
}

ga::Multivector generic_bivector(const rotary::Vec3& raw_axis) {
  const rotary::Vec3 u = rotary::normalized_axis(raw_axis);
  return quat::quat_to_even_cl3({0.0, u[0], u[1], u[2]});
}

void run_care_generic(const Inputs& in, const rotary::EncodingMethod& method,
                      std::vector<double>& out) {
  for_each_subvector(in, method, out, [](const rotary::Band& band, Angles a, std::span<double> sub) {
    const ga::Rotor rx = ga::rotor_exp(generic_bivector(band.axis_x), 0.5 * a.x);
    const ga::Rotor ry = ga::rotor_exp(generic_bivector(band.axis_y), 0.5 * a.y);
    const ga::Multivector m = ga::from_cl3_layout(sub);
    const auto rotated = ga::to_cl3_layout(ga::sandwich(ry, ga::sandwich(rx, m)));
    std::copy(rotated.begin(), rotated.end(), sub.begin());
  });
}

const std::vector<std::pair<std::string, Kernel>>& kernel_table() {
  static const std::vector<std::pair<std::string, Kernel>> table = {
      {"rope1d", {Method::Rope1D, run_planar}},
      {"quatro", {Method::QuatRo, run_method}},
      {"care_generic", {Method::Care, run_care_generic}},
      {"care_fast", {Method::Care, run_method}},
      {"spherical", {Method::Spherical, run_method}},
      {"mixed", {Method::Mixed, run_method}},
  };
  return table;
}

const Kernel& lookup(const std::string& name) {
  for (const auto& [key, kernel] : kernel_table()) {
    if (key == name) return kernel;
  }
  throw std::invalid_argument("unknown bench kernel '" + name + "'");
}

Inputs make_inputs(const Workload& w) {
  Inputs in;
  in.batch = w.batch;
  in.tokens = w.tokens();
  in.head_dim = w.head_dim;
  in.base = w.base;
  in.positions = rotary::grid_positions(w.grid_h, w.grid_w);
  std::mt19937_64 rng(w.seed);
  std::normal_distribution<double> normal;
  in.data.resize(in.batch * in.tokens * in.head_dim);
  for (double& d : in.data) d = normal(rng);
  // Enough per-band axes for the narrowest method.
  const std::size_t bands = std::max<std::size_t>(1, w.head_dim / 2);
  for (std::size_t i = 0; i < bands; ++i) {
    in.axes_x.push_back({normal(rng), normal(rng), normal(rng)});
    in.axes_y.push_back({normal(rng), normal(rng), normal(rng)});
  }
  return in;
}

}  // namespace

const std::vector<std::string>& default_kernels() {
  static const std::vector<std::string> names = {"rope1d", "quatro", "care_generic", "care_fast"};
  return names;
}

const std::vector<std::string>& known_kernels() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& entry : kernel_table()) out.push_back(entry.first);
    return out;
  }();
  return names;
}

const KernelResult* BenchReport::find(const std::string& kernel) const {
  for (const auto& row : rows) {
    if (row.kernel == kernel) return &row;
  }
  return nullptr;
}

void BenchReport::write_csv(std::ostream& out) const {
  out << "kernel,batch,tokens,head_dim,reps,min_ns,median_ns,mean_ns,rot_per_sec,checksum\n";
  std::ostringstream line;
  for (const auto& r : rows) {
    line.str("");
    line << r.kernel << ',' << r.batch << ',' << r.tokens << ',' << r.head_dim << ',' << r.reps
         << ',' << std::fixed << std::setprecision(3) << r.min_ns << ',' << r.median_ns << ','
         << r.mean_ns << ',' << std::setprecision(1) << r.rot_per_sec << ','
         << std::defaultfloat << std::setprecision(17) << r.checksum << '\n';
    out << line.str();
  }
}

std::vector<std::string> BenchReport::ordering_warnings() const {
  std::vector<std::string> warnings;
  const char* chain[] = {"rope1d", "quatro", "care_fast", "care_generic"};
  for (std::size_t i = 0; i + 1 < std::size(chain); ++i) {
    const auto* faster = find(chain[i]);
    const auto* slower = find(chain[i + 1]);
    if (faster && slower && faster->median_ns > slower->median_ns) {
      std::ostringstream msg;
      msg << "expected " << chain[i] << " <= " << chain[i + 1] << " but median " << faster->median_ns
          << " ns > " << slower->median_ns << " ns";
      warnings.push_back(msg.str());
    }
  }
  return warnings;
}

BenchReport run_bench(const Workload& workload) {
  if (workload.batch == 0 || workload.grid_h == 0 || workload.grid_w == 0 ||
      workload.head_dim == 0) {
    throw std::invalid_argument("bench workload sizes must be positive");
  }
  if (workload.reps < kMinReps) {
    throw std::invalid_argument("bench needs at least " + std::to_string(kMinReps) +
                                " repetitions, got " + std::to_string(workload.reps));
  }
  if (workload.kernels.empty()) throw std::invalid_argument("no bench kernels selected");
  for (const auto& name : workload.kernels) lookup(name);

  const Inputs inputs = make_inputs(workload);
  BenchReport report;
  for (const auto& name : workload.kernels) {
    const Kernel& kernel = lookup(name);
    const rotary::AxisParams axes(inputs.axes_x, inputs.axes_y);
    const auto method =
        rotary::make_encoding(kernel.method, workload.head_dim, axes, workload.base);
    const std::size_t bands = workload.head_dim / method.width();
    const double rotations = static_cast<double>(inputs.batch * inputs.tokens * bands);

    std::vector<double> out(inputs.data.size());
    for (std::size_t i = 0; i < workload.warmup; ++i) kernel.run(inputs, method, out);

    std::vector<double> ns(workload.reps);
    for (std::size_t r = 0; r < workload.reps; ++r) {
      const auto start = std::chrono::steady_clock::now();
      kernel.run(inputs, method, out);
      const auto stop = std::chrono::steady_clock::now();
      ns[r] = std::chrono::duration<double, std::nano>(stop - start).count() / rotations;
    }
    std::vector<double> sorted = ns;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    KernelResult row;
    row.kernel = name;
    row.batch = inputs.batch;
    row.tokens = inputs.tokens;
    row.head_dim = inputs.head_dim;
    row.bands = bands;
    row.reps = workload.reps;
    row.min_ns = sorted.front();
    row.median_ns = median;
    row.mean_ns = std::accumulate(ns.begin(), ns.end(), 0.0) / static_cast<double>(n);
    row.rot_per_sec = median > 0.0 ? 1e9 / median : 0.0;
    row.checksum = std::accumulate(out.begin(), out.end(), 0.0);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace cliffrope::bench
