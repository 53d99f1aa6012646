#pragma once

// Micro-benchmarks of the rotation kernels at embedding-shaped workloads.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace cliffrope::bench {

inline constexpr std::size_t kMinReps = 30;

// rope1d: planar 2x2 rotations; quatro: two quaternion sandwiches;
// care_generic: ga_core Multivector rotors; care_fast: fused MV8 sandwiches.
// spherical and mixed are accepted as extra kernels.
const std::vector<std::string>& default_kernels();
const std::vector<std::string>& known_kernels();

struct Workload {
  std::size_t batch = 2;
  std::size_t grid_h = 14;
  std::size_t grid_w = 14;
  std::size_t head_dim = 64;
  double base = 10000.0;
  std::uint64_t seed = 0;
  std::size_t reps = kMinReps;
  std::size_t warmup = 5;
  std::vector<std::string> kernels = default_kernels();

  std::size_t tokens() const { return grid_h * grid_w; }
};

struct KernelResult {
  std::string kernel;
  std::size_t batch = 0;
  std::size_t tokens = 0;
  std::size_t head_dim = 0;
  std::size_t bands = 0;
  std::size_t reps = 0;
  // Nanoseconds per sub-vector rotation.
  double min_ns = 0.0;
  double median_ns = 0.0;
  double mean_ns = 0.0;
  double rot_per_sec = 0.0;
  double checksum = 0.0;
};

struct BenchReport {
  std::vector<KernelResult> rows;

  const KernelResult* find(const std::string& kernel) const;
  // Header: kernel,batch,tokens,head_dim,reps,min_ns,median_ns,mean_ns,rot_per_sec,checksum
  void write_csv(std::ostream& out) const;
  // Directional expectations (rope1d <= quatro <= care_fast <= care_generic by median)
  // that did not hold; informational only.
  std::vector<std::string> ordering_warnings() const;
};

// Throws std::invalid_argument for an unknown kernel, non-positive sizes or reps < kMinReps.
BenchReport run_bench(const Workload& workload);

}  // namespace cliffrope::bench
