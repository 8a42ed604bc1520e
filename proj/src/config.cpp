#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "mammo/error.hpp"
#include "mammo/pipeline.hpp"

namespace mammo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& key, const std::string& value) {
  long long out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ConfigError, key + ": expected an integer, got '" + value + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double out = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(out)) {
    throw Error(ErrorCode::ConfigError, key + ": expected a number, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(ErrorCode::ConfigError, key + ": expected true/false, got '" + value + "'");
}

}  // namespace

void PipelineConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); };
  if (dwt_levels < 0 || dwt_levels > 16) fail("dwt_levels must be in [0,16]");
  if (manual_threshold && (*manual_threshold < 0 || *manual_threshold > 255)) {
    fail("threshold must be auto or in [0,255]");
  }
  if (segment.tau_split < 0) fail("tau_split must be >= 0");
  if (segment.tau_merge < 0) fail("tau_merge must be >= 0");
  if (segment.min_block < 1) fail("min_block must be >= 1");
  if (r_max < 2) fail("r_max must be >= 2");
  if (!(d_min < d_max)) fail("d_min must be < d_max");
  RuleSet r = rules;
  r.d_min = d_min;
  r.d_max = d_max;
  if (auto_max_area) r.max_area = r.min_area;
  r.validate();
}

RuleSet PipelineConfig::effective_rules(int working_width, int working_height) const {
  RuleSet r = rules;
  r.d_min = d_min;
  r.d_max = d_max;
  if (auto_max_area) {
    r.max_area = static_cast<std::size_t>(working_width) * static_cast<std::size_t>(working_height) / 4;
  }
  return r;
}

EmitFlags parse_emit_list(const std::string& list) {
  EmitFlags f{false, false, false, false, false, false};
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    if (item == "inverted") f.inverted = true;
    else if (item == "mask") f.mask = true;
    else if (item == "labels") f.labels = true;
    else if (item == "overlay") f.overlay = true;
    else if (item == "features") f.features = true;
    else if (item == "report") f.report = true;
    else if (item == "all") f = EmitFlags{};
    else throw Error(ErrorCode::ConfigError, "unknown artifact '" + item + "' in emit list");
  }
  return f;
}

void apply_setting(PipelineConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  const auto as_int = [&] { return static_cast<int>(parse_int(key, value)); };
  const auto as_count = [&] {
    const long long v = parse_int(key, value);
    if (v < 0) throw Error(ErrorCode::ConfigError, key + " must be >= 0");
    return static_cast<std::size_t>(v);
  };

  if (key == "dwt_levels") cfg.dwt_levels = as_int();
  else if (key == "dwt_first") cfg.dwt_first = parse_bool(key, value);
  else if (key == "threshold") {
    if (value == "auto") cfg.manual_threshold.reset();
    else cfg.manual_threshold = as_int();
  }
  else if (key == "tau_split") cfg.segment.tau_split = as_int();
  else if (key == "tau_merge") cfg.segment.tau_merge = as_int();
  else if (key == "min_block") cfg.segment.min_block = as_int();
  else if (key == "r_max") cfg.r_max = as_int();
  else if (key == "d_min") cfg.d_min = parse_real(key, value);
  else if (key == "d_max") cfg.d_max = parse_real(key, value);
  else if (key == "min_area") cfg.rules.min_area = as_count();
  else if (key == "max_area") {
    if (value == "auto") {
      cfg.auto_max_area = true;
    } else {
      cfg.rules.max_area = as_count();
      cfg.auto_max_area = false;
    }
  }
  else if (key == "min_compactness") cfg.rules.min_compactness = parse_real(key, value);
  else if (key == "min_boundary_gradient") cfg.rules.min_boundary_gradient = parse_real(key, value);
  else if (key == "min_intensity_diff") cfg.rules.min_intensity_diff = parse_real(key, value);
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "emit") cfg.emit = parse_emit_list(value);
  else throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
}

void load_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError,
                  path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

}  // namespace mammo
