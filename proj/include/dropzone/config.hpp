#pragma once

#include <string>

#include "dropzone/compatibility.hpp"
#include "dropzone/deployment.hpp"
#include "dropzone/features.hpp"
#include "dropzone/grounding.hpp"
#include "dropzone/traversability.hpp"

namespace dropzone {

struct GridConfig {
  double resolution = 0.25;  // meters per cell
  double padding = 0.5;      // meters added around the cloud bbox

  void validate() const;
};

/// Every tunable in one place, parsed from a single config file. Section and
/// key names are fixed; unknown ones are errors so typos cannot silently
/// fall back to defaults.
struct RunConfig {
  GroundingConfig grounding;
  GridConfig grid;
  FeatureConfig features;
  ThresholdConfig thresholds;
  CompatibilityTable compatibility;
  DeploymentConfig deployment;

  void validate() const;
};

/// Built-in defaults, including the stock compatibility table
/// (grass/soil/pavement 1.0, gravel 0.3, rock/water/structure 0.0,
/// unknown classes 0.5).
RunConfig default_config();

/// Grammar: `key = value` lines under bracketed sections [grounding],
/// [grid], [features], [traversability], [compatibility], [deployment];
/// '#' starts a comment. Angles are radians, matching the in-memory units,
/// so serialize/parse round-trips bit-exactly. Compatibility entries are
/// `class.<id> = <tau>` plus `default`.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Emits the full grammar with every value; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);
void save_config(const RunConfig& config, const std::string& path);

}  // namespace dropzone
