#include "cliffrope/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace cliffrope::io {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_real(std::size_t line, const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError(line, "'" + key + "' expects a finite real, got '" + text + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(std::size_t line, const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(line, "'" + key + "' expects a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::size_t parse_positive(std::size_t line, const std::string& key, const std::string& text) {
  const auto value = parse_unsigned(line, key, text);
  if (value == 0) throw ConfigError(line, "'" + key + "' must be positive");
  return static_cast<std::size_t>(value);
}

bool parse_bool(std::size_t line, const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(line, "'" + key + "' expects true or false, got '" + text + "'");
}

std::vector<std::string> split(const std::string& text, const std::string& separators) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (separators.find(c) != std::string::npos) {
      out.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  out.push_back(trim(current));
  return out;
}

AxisSpec parse_axes(std::size_t line, const std::string& key, std::string text) {
  AxisSpec spec;
  spec.shared = text.rfind("shared:", 0) == 0;
  if (spec.shared) text = text.substr(7);
  std::vector<double> numbers;
  for (const auto& field : split(text, ",;")) numbers.push_back(parse_real(line, key, field));
  if (numbers.empty() || numbers.size() % 3 != 0 || (spec.shared && numbers.size() != 3)) {
    throw ConfigError(line, "'" + key + "' expects " +
                                (spec.shared ? std::string("shared:<ax,ay,az>")
                                             : std::string("a multiple of 3 numbers")));
  }
  for (std::size_t i = 0; i < numbers.size(); i += 3) {
    const rotary::Vec3 axis{numbers[i], numbers[i + 1], numbers[i + 2]};
    try {
      rotary::normalized_axis(axis);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line, "'" + key + "': " + e.what());
    }
    spec.axes.push_back(axis);
  }
  return spec;
}

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error("config line " + std::to_string(line) + ": " + message), line_(line) {}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "method",        "head_dim",      "grid_h",    "grid_w",   "base",
      "seed",          "axes_x",        "axes_y",    "coord_scale_x",
      "coord_scale_y", "tolerance",     "invert",    "origin_x", "origin_y",
      "batch",         "reps",          "warmup",    "kernels"};
  return keys;
}

rotary::AxisParams RunConfig::axis_params() const {
  if (axes_x.shared && axes_y.shared) {
    return rotary::AxisParams::shared(axes_x.axes[0], axes_y.axes[0]);
  }
  // Broadcast a shared list against a per-band one.
  const std::size_t n = std::max(axes_x.axes.size(), axes_y.axes.size());
  const auto expand = [n](const AxisSpec& spec) {
    return spec.shared ? std::vector<rotary::Vec3>(n, spec.axes[0]) : spec.axes;
  };
  auto x = expand(axes_x), y = expand(axes_y);
  if (x.size() != y.size()) {
    throw std::invalid_argument("axes_x and axes_y list different numbers of bands");
  }
  return rotary::AxisParams(std::move(x), std::move(y));
}

rotary::EncodingMethod RunConfig::encoding(std::size_t dim) const {
  return rotary::make_encoding(method, dim, axis_params(), base, coord_scale_x, coord_scale_y);
}

std::vector<rotary::Position2D> RunConfig::positions() const {
  return rotary::grid_positions(grid_h, grid_w, {origin_x, origin_y});
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig config;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
      throw ConfigError(line, "unknown key '" + key + "'");
    }
    if (!config.explicit_keys.insert(key).second) {
      throw ConfigError(line, "duplicate key '" + key + "'");
    }
    if (value.empty()) throw ConfigError(line, "'" + key + "' has no value");

    if (key == "method") {
      const auto method = rotary::parse_method(value);
      if (!method) {
        throw ConfigError(line, "method must be one of rope1d, mixed, spherical, quatro, care; got '" +
                                    value + "'");
      }
      config.method = *method;
    } else if (key == "head_dim") {
      config.head_dim = parse_positive(line, key, value);
    } else if (key == "grid_h") {
      config.grid_h = parse_positive(line, key, value);
    } else if (key == "grid_w") {
      config.grid_w = parse_positive(line, key, value);
    } else if (key == "base") {
      config.base = parse_real(line, key, value);
      if (!(config.base > 1.0)) throw ConfigError(line, "'base' must be > 1");
    } else if (key == "seed") {
      config.seed = parse_unsigned(line, key, value);
    } else if (key == "axes_x") {
      config.axes_x = parse_axes(line, key, value);
    } else if (key == "axes_y") {
      config.axes_y = parse_axes(line, key, value);
    } else if (key == "coord_scale_x") {
      config.coord_scale_x = parse_real(line, key, value);
    } else if (key == "coord_scale_y") {
      config.coord_scale_y = parse_real(line, key, value);
    } else if (key == "tolerance") {
      config.tolerance = parse_real(line, key, value);
      if (!(config.tolerance >= 0.0)) throw ConfigError(line, "'tolerance' must be >= 0");
    } else if (key == "invert") {
      config.invert = parse_bool(line, key, value);
    } else if (key == "origin_x") {
      config.origin_x = parse_real(line, key, value);
    } else if (key == "origin_y") {
      config.origin_y = parse_real(line, key, value);
    } else if (key == "batch") {
      config.batch = parse_positive(line, key, value);
    } else if (key == "reps") {
      config.reps = parse_positive(line, key, value);
    } else if (key == "warmup") {
      config.warmup = parse_unsigned(line, key, value);
    } else if (key == "kernels") {
      config.kernels = split(value, ",");
    }
  }
  if (!config.axes_x.shared && !config.axes_y.shared &&
      config.axes_x.axes.size() != config.axes_y.axes.size()) {
    throw ConfigError(line, "axes_x and axes_y list different numbers of bands");
  }
  return config;
}

RunConfig parse_run_config(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return parse_run_config(in);
}

}  // namespace cliffrope::io
