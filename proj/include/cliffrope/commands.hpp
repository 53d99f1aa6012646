#pragma once

// Implementations of the `cliffrope` subcommands. Each returns a process exit code.

#include <filesystem>
#include <ostream>

#include "cliffrope/checks.hpp"
#include "cliffrope/run_config.hpp"

namespace cliffrope::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitPropertyFailure = 1,
  kExitUsage = 2,
  kExitIo = 3,
};

// Gradient steps reported by `grad`; the middle one gates the exit status.
inline constexpr double kGradientSteps[] = {1e-4, 1e-5, 1e-6};
inline constexpr double kGatingStep = 1e-5;
inline constexpr double kGradientTolerance = 1e-6;
inline constexpr double kInvariantSlotTolerance = 1e-10;
// care_fast may be at most this much slower than care_generic.
inline constexpr double kCareFastSlack = 1.05;
inline constexpr double kCareChecksumTolerance = 1e-10;

int cmd_check(std::uint64_t seed, std::ostream& out,
              const checks::CheckOptions& options = {});

// CSV `reduction,max_abs_dev,tolerance,pass` to csv.
int cmd_equiv(const io::RunConfig& config, std::ostream& csv, std::ostream& log);

int cmd_encode(const std::filesystem::path& input, const io::RunConfig& config,
               const std::filesystem::path& output, std::ostream& log);

// CSV `method,coordinate,h,samples,max_rel_err,max_invariant_abs,gating,pass` to csv.
int cmd_grad(const io::RunConfig& config, std::ostream& csv, std::ostream& log);

// BenchReport CSV to csv; ordering notes and guard failures to log.
int cmd_bench(const io::RunConfig& config, std::ostream& csv, std::ostream& log);

}  // namespace cliffrope::cli
