#pragma once

// Line-based `key = value` run configuration with `#` comments.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliffrope/rotary.hpp"

namespace cliffrope::io {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// One axis list as written in the config: a shared axis or one axis per band.
struct AxisSpec {
  bool shared = true;
  std::vector<rotary::Vec3> axes;
};

struct RunConfig {
  rotary::Method method = rotary::Method::QuatRo;
  std::size_t head_dim = 64;
  std::size_t grid_h = 14;
  std::size_t grid_w = 14;
  double base = 10000.0;
  std::uint64_t seed = 0;
  AxisSpec axes_x{true, {{1.0, 0.0, 0.0}}};
  AxisSpec axes_y{true, {{0.0, 0.0, 1.0}}};
  double coord_scale_x = 1.0;
  double coord_scale_y = 1.0;
  double tolerance = 1e-10;
  bool invert = false;
  double origin_x = 0.0;
  double origin_y = 0.0;
  std::size_t batch = 2;
  std::size_t reps = 30;
  std::size_t warmup = 5;
  std::vector<std::string> kernels;

  // Keys that appeared in the parsed text.
  std::set<std::string> explicit_keys;

  rotary::AxisParams axis_params() const;
  rotary::EncodingMethod encoding(std::size_t head_dim) const;
  std::vector<rotary::Position2D> positions() const;
};

const std::vector<std::string>& config_keys();

// Throws ConfigError carrying the 1-based line number.
RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace cliffrope::io
