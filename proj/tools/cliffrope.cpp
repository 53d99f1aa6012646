#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cliffrope/bench.hpp"
#include "cliffrope/commands.hpp"

namespace cli = cliffrope::cli;
namespace io = cliffrope::io;

namespace {

// Sends CSV to --output when given, else stdout.
int with_csv_sink(const std::string& output, const std::function<int(std::ostream&)>& run) {
  if (output.empty()) return run(std::cout);
  std::ofstream file(output);
  if (!file) {
    std::cerr << "cannot open " << output << " for writing\n";
    return cli::kExitIo;
  }
  const int status = run(file);
  file.flush();
  if (!file) {
    std::cerr << "error writing " << output << '\n';
    return cli::kExitIo;
  }
  return status;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternion and Clifford rotary positional encodings"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::string config_path, output;
  double tolerance = 0.0;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed");
  app.add_option("--config", config_path, "RunConfig file");
  auto* tol_opt = app.add_option("--tolerance", tolerance, "Pass/fail tolerance");
  app.add_option("--output", output, "Output path (CSV or tensor file)");

  auto* check = app.add_subcommand("check", "Run the seeded invariant suites");
  auto* equiv = app.add_subcommand("equiv", "Evaluate the reduction equivalences");
  auto* encode = app.add_subcommand("encode", "Apply an encoding to a tensor file");
  std::string input;
  bool invert = false;
  encode->add_option("input", input, "Input tensor file")->required();
  encode->add_flag("--invert", invert, "Apply the inverse rotation");
  auto* grad = app.add_subcommand("grad", "Check analytic rotation gradients");
  auto* bench = app.add_subcommand("bench", "Benchmark rotation kernels");
  std::size_t reps = 0;
  std::string kernels;
  auto* reps_opt = bench->add_option("--reps", reps, "Timed repetitions per kernel");
  bench->add_option("--kernels", kernels, "Comma-separated kernel list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  io::RunConfig config;
  if (!config_path.empty()) {
    try {
      config = io::load_run_config(config_path);
    } catch (const io::ConfigError& e) {
      std::cerr << e.what() << '\n';
      return cli::kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      return cli::kExitIo;
    }
  }
  if (*seed_opt) {
    config.seed = seed;
    config.explicit_keys.insert("seed");
  }
  if (*tol_opt) {
    config.tolerance = tolerance;
    config.explicit_keys.insert("tolerance");
  }

  if (*check) return cli::cmd_check(config.seed, std::cout);
  if (*equiv) {
    return with_csv_sink(output, [&](std::ostream& csv) { return cli::cmd_equiv(config, csv, std::cerr); });
  }
  if (*grad) {
    return with_csv_sink(output, [&](std::ostream& csv) { return cli::cmd_grad(config, csv, std::cerr); });
  }
  if (*encode) {
    if (output.empty()) {
      std::cerr << "encode: --output is required\n";
      return cli::kExitUsage;
    }
    if (invert) config.invert = true;
    return cli::cmd_encode(input, config, output, std::cerr);
  }
  if (*reps_opt) config.reps = reps;
  if (!kernels.empty()) config.kernels = split_list(kernels);
  return with_csv_sink(output, [&](std::ostream& csv) { return cli::cmd_bench(config, csv, std::cerr); });
}
