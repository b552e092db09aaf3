#pragma once

#include <map>

#include "dropzone/errors.hpp"

namespace dropzone {

/// Maps terrain class ids to compatibility scores in [0, 1]; classes absent
/// from the table take the default. A score of exactly 0 marks the class as
/// an obstacle.
struct CompatibilityTable {
  std::map<int, double> tau;
  double default_value = 0.5;

  double lookup(int class_id) const {
    auto it = tau.find(class_id);
    return it != tau.end() ? it->second : default_value;
  }

  void validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(default_value)) {
      raise(Errc::config_invalid, "compatibility default must lie in [0, 1]");
    }
    for (const auto& [cls, value] : tau) {
      if (cls < 0) raise(Errc::config_invalid, "compatibility class ids must be >= 0");
      if (!in_unit(value)) raise(Errc::config_invalid, "compatibility scores must lie in [0, 1]");
    }
  }
};

}  // namespace dropzone
