#include "dropzone/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dropzone {

namespace {

constexpr double kRadToDeg = 180.0 / M_PI;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    raise(Errc::config_invalid, "bad numeric value for " + key + ": '" + value + "'");
  }
}

int parse_int(const std::string& value, const std::string& key) {
  double v = parse_double(value, key);
  if (v != std::floor(v)) raise(Errc::config_invalid, key + " must be an integer");
  return static_cast<int>(v);
}

std::vector<int> parse_int_list(const std::string& value, const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) raise(Errc::config_invalid, key + " has an empty list entry");
    out.push_back(parse_int(item, key));
  }
  if (out.empty()) raise(Errc::config_invalid, key + " must list at least one value");
  return out;
}

// Full precision so parse(serialize(c)) reproduces c exactly.
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void GridConfig::validate() const {
  if (!(resolution > 0.0)) raise(Errc::config_invalid, "grid resolution must be positive");
  if (padding < 0.0) raise(Errc::config_invalid, "grid padding must be >= 0");
}

void RunConfig::validate() const {
  grounding.validate();
  grid.validate();
  features.validate();
  thresholds.validate();
  compatibility.validate();
  deployment.validate();
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.compatibility.tau = {
      {classes::kGrass, 1.0},  {classes::kSoil, 1.0},  {classes::kPavement, 1.0},
      {classes::kGravel, 0.3}, {classes::kRock, 0.0},  {classes::kWater, 0.0},
      {classes::kStructure, 0.0},
  };
  cfg.compatibility.default_value = 0.5;
  return cfg;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg = default_config();
  // A [compatibility] section, when present, fully replaces the stock table.
  cfg.compatibility.tau.clear();
  bool any_tau = false;

  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        raise(Errc::config_invalid, "line " + std::to_string(lineno) + ": unterminated section");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "grounding" && section != "grid" && section != "features" &&
          section != "traversability" && section != "compatibility" &&
          section != "deployment") {
        raise(Errc::config_invalid,
              "line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      }
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos) {
      raise(Errc::config_invalid,
            "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      raise(Errc::config_invalid, "line " + std::to_string(lineno) + ": empty key or value");
    }
    if (section.empty()) {
      raise(Errc::config_invalid,
            "line " + std::to_string(lineno) + ": key outside any section");
    }

    bool known = true;
    if (section == "grounding") {
      if (key == "strides") {
        cfg.grounding.strides = parse_int_list(value, key);
      } else if (key == "min_pairs") {
        cfg.grounding.min_pairs = parse_int(value, key);
      } else if (key == "degenerate_ratio_tol") {
        cfg.grounding.degenerate_ratio_tol = parse_double(value, key);
      } else {
        known = false;
      }
    } else if (section == "grid") {
      if (key == "resolution") {
        cfg.grid.resolution = parse_double(value, key);
      } else if (key == "padding") {
        cfg.grid.padding = parse_double(value, key);
      } else {
        known = false;
      }
    } else if (section == "features") {
      if (key == "k_slope") {
        cfg.features.k_slope = parse_int(value, key);
      } else if (key == "k_rough") {
        cfg.features.k_rough = parse_int(value, key);
      } else if (key == "min_neighbors") {
        cfg.features.min_neighbors = parse_int(value, key);
      } else {
        known = false;
      }
    } else if (section == "traversability") {
      if (key == "s_soft") {
        cfg.thresholds.s_soft = parse_double(value, key);
      } else if (key == "s_hard") {
        cfg.thresholds.s_hard = parse_double(value, key);
      } else if (key == "sigma_soft") {
        cfg.thresholds.sigma_soft = parse_double(value, key);
      } else if (key == "sigma_hard") {
        cfg.thresholds.sigma_hard = parse_double(value, key);
      } else if (key == "d_soft") {
        cfg.thresholds.d_soft = parse_double(value, key);
      } else if (key == "d_hard") {
        cfg.thresholds.d_hard = parse_double(value, key);
      } else if (key == "w_slope") {
        cfg.thresholds.w_slope = parse_double(value, key);
      } else if (key == "w_rough") {
        cfg.thresholds.w_rough = parse_double(value, key);
      } else if (key == "w_clear") {
        cfg.thresholds.w_clear = parse_double(value, key);
      } else if (key == "alpha") {
        cfg.thresholds.alpha = parse_double(value, key);
      } else {
        known = false;
      }
    } else if (section == "compatibility") {
      if (key == "default") {
        cfg.compatibility.default_value = parse_double(value, key);
        any_tau = true;
      } else if (key.rfind("class.", 0) == 0) {
        int cls = parse_int(key.substr(6), key);
        cfg.compatibility.tau[cls] = parse_double(value, key);
        any_tau = true;
      } else {
        known = false;
      }
    } else if (section == "deployment") {
      if (key == "t_th") {
        cfg.deployment.t_th = parse_double(value, key);
      } else if (key == "r_max") {
        cfg.deployment.r_max = parse_double(value, key);
      } else if (key == "lambda") {
        cfg.deployment.lambda = parse_double(value, key);
      } else if (key == "k") {
        cfg.deployment.k = parse_int(value, key);
      } else if (key == "min_separation") {
        cfg.deployment.min_separation = parse_double(value, key);
      } else {
        known = false;
      }
    }
    if (!known) {
      raise(Errc::config_invalid, "line " + std::to_string(lineno) + ": unknown key '" + key +
                                      "' in section [" + section + "]");
    }
  }

  if (!any_tau) cfg.compatibility.tau = default_config().compatibility.tau;
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& config) {
  config.validate();
  std::ostringstream out;
  out << "[grounding]\n";
  out << "strides = ";
  for (std::size_t i = 0; i < config.grounding.strides.size(); ++i) {
    if (i) out << ",";
    out << config.grounding.strides[i];
  }
  out << "\n";
  out << "min_pairs = " << config.grounding.min_pairs << "\n";
  out << "degenerate_ratio_tol = " << num(config.grounding.degenerate_ratio_tol) << "\n";

  out << "\n[grid]\n";
  out << "resolution = " << num(config.grid.resolution) << "\n";
  out << "padding = " << num(config.grid.padding) << "\n";

  out << "\n[features]\n";
  out << "k_slope = " << config.features.k_slope << "\n";
  out << "k_rough = " << config.features.k_rough << "\n";
  out << "min_neighbors = " << config.features.min_neighbors << "\n";

  out << "\n[traversability]\n";
  char deg[96];
  std::snprintf(deg, sizeof(deg), "# slope thresholds are radians (%.4g / %.4g degrees)\n",
                config.thresholds.s_soft * kRadToDeg, config.thresholds.s_hard * kRadToDeg);
  out << deg;
  out << "s_soft = " << num(config.thresholds.s_soft) << "\n";
  out << "s_hard = " << num(config.thresholds.s_hard) << "\n";
  out << "sigma_soft = " << num(config.thresholds.sigma_soft) << "\n";
  out << "sigma_hard = " << num(config.thresholds.sigma_hard) << "\n";
  out << "d_soft = " << num(config.thresholds.d_soft) << "\n";
  out << "d_hard = " << num(config.thresholds.d_hard) << "\n";
  out << "w_slope = " << num(config.thresholds.w_slope) << "\n";
  out << "w_rough = " << num(config.thresholds.w_rough) << "\n";
  out << "w_clear = " << num(config.thresholds.w_clear) << "\n";
  out << "alpha = " << num(config.thresholds.alpha) << "\n";

  out << "\n[compatibility]\n";
  out << "default = " << num(config.compatibility.default_value) << "\n";
  for (const auto& [cls, value] : config.compatibility.tau) {
    out << "class." << cls << " = " << num(value) << "\n";
  }

  out << "\n[deployment]\n";
  out << "t_th = " << num(config.deployment.t_th) << "\n";
  out << "r_max = " << num(config.deployment.r_max) << "\n";
  out << "lambda = " << num(config.deployment.lambda) << "\n";
  out << "k = " << config.deployment.k << "\n";
  out << "min_separation = " << num(config.deployment.min_separation) << "\n";
  return out.str();
}

void save_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::io_error, "cannot write config file: " + path);
  out << serialize_config(config);
  if (!out) raise(Errc::io_error, "write failed: " + path);
}

}  // namespace dropzone
