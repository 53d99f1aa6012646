#include "cliffrope/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "cliffrope/bench.hpp"
#include "cliffrope/harness.hpp"
#include "cliffrope/tensor_file.hpp"

namespace cliffrope::cli {
namespace {

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6e", v);
  return buffer;
}

harness::SampleSetup sample_setup(const io::RunConfig& config) {
  harness::SampleSetup setup;
  setup.seed = config.seed;
  setup.grid_h = config.grid_h;
  setup.grid_w = config.grid_w;
  setup.head_dim = config.head_dim;
  setup.base = config.base;
  setup.scale_x = config.coord_scale_x;
  setup.scale_y = config.coord_scale_y;
  return setup;
}

}  // namespace

int cmd_check(std::uint64_t seed, std::ostream& out, const checks::CheckOptions& options) {
  const auto suites = checks::run_all_suites(seed, options);
  checks::print_suites(out, suites);
  const bool ok = std::all_of(suites.begin(), suites.end(), [](const auto& s) { return s.pass(); });
  return ok ? kExitOk : kExitPropertyFailure;
}

int cmd_equiv(const io::RunConfig& config, std::ostream& csv, std::ostream& log) {
  std::vector<harness::ReductionResult> results;
  try {
    results = harness::evaluate_reductions(sample_setup(config));
  } catch (const std::invalid_argument& e) {
    log << "equiv: " << e.what() << '\n';
    return kExitUsage;
  }
  bool ok = true;
  csv << "reduction,max_abs_dev,tolerance,pass\n";
  for (const auto& r : results) {
    const bool pass = r.max_abs_dev <= config.tolerance;
    ok = ok && pass;
    csv << r.name << ',' << fmt(r.max_abs_dev) << ',' << fmt(config.tolerance) << ','
        << (pass ? "true" : "false") << '\n';
    if (!pass) log << "equiv: " << r.name << " exceeds tolerance\n";
  }
  return ok ? kExitOk : kExitPropertyFailure;
}

int cmd_encode(const std::filesystem::path& input, const io::RunConfig& config,
               const std::filesystem::path& output, std::ostream& log) {
  io::Tensor tensor;
  try {
    tensor = io::read_tensor_file(input);
  } catch (const io::TensorFormatError& e) {
    log << "encode: " << e.what() << '\n';
    return kExitIo;
  }
  if (tensor.dims.size() != 3) {
    log << "encode: expected rank 3 (batch x tokens x head_dim), got rank " << tensor.dims.size() << '\n';
    return kExitUsage;
  }
  const std::size_t batch = tensor.dims[0], tokens = tensor.dims[1], head_dim = tensor.dims[2];
  if (tokens != config.grid_h * config.grid_w) {
    log << "encode: " << tokens << " tokens but grid is " << config.grid_h << 'x' << config.grid_w << '\n';
    return kExitUsage;
  }
  if (config.explicit_keys.count("head_dim") && config.head_dim != head_dim) {
    log << "encode: config head_dim " << config.head_dim << " but tensor has " << head_dim << '\n';
    return kExitUsage;
  }

  rotary::TokenBlock encoded;
  try {
    const auto method = config.encoding(head_dim);
    const rotary::TokenBlock block(batch, tokens, head_dim, config.positions(), tensor.values);
    encoded = rotary::apply_encoding(
        block, method, config.invert ? rotary::Direction::Inverse : rotary::Direction::Forward);
  } catch (const std::invalid_argument& e) {
    log << "encode: " << e.what() << '\n';
    return kExitUsage;
  }

  tensor.values.assign(encoded.data().begin(), encoded.data().end());
  try {
    io::write_tensor_file(output, tensor);
  } catch (const io::TensorFormatError& e) {
    log << "encode: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

int cmd_grad(const io::RunConfig& config, std::ostream& csv, std::ostream& log) {
  const double tolerance =
      config.explicit_keys.count("tolerance") ? config.tolerance : kGradientTolerance;
  std::vector<harness::GradientResult> results;
  try {
    results = harness::evaluate_gradients(
        sample_setup(config), std::vector<double>(std::begin(kGradientSteps), std::end(kGradientSteps)));
  } catch (const std::invalid_argument& e) {
    log << "grad: " << e.what() << '\n';
    return kExitUsage;
  }
  bool ok = true;
  csv << "method,coordinate,h,samples,max_rel_err,max_invariant_abs,gating,pass\n";
  for (const auto& g : results) {
    const bool gating = g.h == kGatingStep;
    const bool pass = g.max_rel_err <= tolerance && g.max_invariant_abs <= kInvariantSlotTolerance;
    if (gating) ok = ok && pass;
    csv << rotary::method_name(g.method) << ','
        << (g.coordinate == rotary::Coordinate::AngleX ? "angle_x" : "angle_y") << ',' << fmt(g.h)
        << ',' << g.samples << ',' << fmt(g.max_rel_err) << ',' << fmt(g.max_invariant_abs) << ','
        << (gating ? "true" : "false") << ',' << (pass ? "true" : "false") << '\n';
    if (gating && !pass) {
      log << "grad: " << rotary::method_name(g.method) << " gradient check failed\n";
    }
  }
  return ok ? kExitOk : kExitPropertyFailure;
}

int cmd_bench(const io::RunConfig& config, std::ostream& csv, std::ostream& log) {
  bench::Workload workload;
  workload.batch = config.batch;
  workload.grid_h = config.grid_h;
  workload.grid_w = config.grid_w;
  workload.head_dim = config.head_dim;
  workload.base = config.base;
  workload.seed = config.seed;
  workload.reps = config.reps;
  workload.warmup = config.warmup;
  if (!config.kernels.empty()) workload.kernels = config.kernels;

  bench::BenchReport report;
  try {
    report = bench::run_bench(workload);
  } catch (const std::invalid_argument& e) {
    log << "bench: " << e.what() << '\n';
    return kExitUsage;
  }
  report.write_csv(csv);
  for (const auto& w : report.ordering_warnings()) log << "warning: " << w << '\n';

  int status = kExitOk;
  const auto* generic = report.find("care_generic");
  const auto* fast = report.find("care_fast");
  if (generic && fast) {
    if (std::abs(generic->checksum - fast->checksum) > kCareChecksumTolerance) {
      log << "bench: care checksums disagree (" << fmt(generic->checksum) << " vs "
          << fmt(fast->checksum) << ")\n";
      status = kExitPropertyFailure;
    }
    if (fast->median_ns > kCareFastSlack * generic->median_ns) {
      log << "bench: care_fast median " << fmt(fast->median_ns) << " ns exceeds care_generic "
          << fmt(generic->median_ns) << " ns by more than 5%\n";
      status = kExitPropertyFailure;
    }
  }
  return status;
}

}  // namespace cliffrope::cli
