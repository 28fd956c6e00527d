#pragma once

#include <string>
#include <vector>

#include "eigenrisk/regimes.hpp"
#include "eigenrisk/sim.hpp"

namespace eigenrisk::presets {

// Named scan configurations shared by the CLI and the verification binary.
struct ScanPreset {
  std::string name;
  std::vector<regimes::GridPoint> grid;
  double target_mass0;
  double sigma_sq;
};

// Named simulation configurations (one SimConfig per m).
struct SimPreset {
  std::string name;
  std::vector<sim::SimConfig> configs;
};

const std::vector<std::string>& scan_preset_names();
const std::vector<std::string>& sim_preset_names();

ScanPreset scan_preset(const std::string& name);  // throws usage_error
SimPreset sim_preset(const std::string& name);    // throws usage_error

}  // namespace eigenrisk::presets
