#include "eigenrisk/presets.hpp"

#include <cmath>

#include "eigenrisk/errors.hpp"

namespace eigenrisk::presets {

namespace {

// Shared bandwidth rules for the named experiments.
double narrowing_tau(long long m) {
  return std::pow(static_cast<double>(m), -0.2) / std::log(static_cast<double>(m));
}

double critical_tau(long long m, double scale) {
  return scale * std::pow(static_cast<double>(m), -0.2);
}

std::vector<long long> doubling(long long first, int count) {
  std::vector<long long> out;
  long long m = first;
  for (int i = 0; i < count; ++i, m *= 2) out.push_back(m);
  return out;
}

regimes::GridPoint point(int d, long long m, double tau) {
  return regimes::GridPoint{d, m, tau};
}

ScanPreset theorem1(const std::string& name, int variant) {
  ScanPreset preset;
  preset.name = name;
  preset.target_mass0 = 1.0;
  preset.sigma_sq = 1.0;
  for (long long m : doubling(64, 7)) {
    double tau = variant == 1   ? narrowing_tau(m)
                 : variant == 2 ? 1.0
                                : critical_tau(m, 2.0);
    preset.grid.push_back(point(6, m, tau));
  }
  return preset;
}

ScanPreset corollary1(const std::string& name, double alpha) {
  ScanPreset preset;
  preset.name = name;
  preset.target_mass0 = 0.0;
  preset.sigma_sq = 1.0;
  for (int d = 8; d <= 1024; d *= 2) {
    long long m = std::llround(std::pow(static_cast<double>(d), alpha));
    preset.grid.push_back(point(d, m, 1.0));
  }
  return preset;
}

ScanPreset corollary2() {
  ScanPreset preset;
  preset.name = "corollary2";
  preset.target_mass0 = 0.0;
  preset.sigma_sq = 1.0;
  for (int d = 10; d <= 20; ++d)
    preset.grid.push_back(point(d, 1LL << d, 1.0));
  return preset;
}

ScanPreset corollary3() {
  ScanPreset preset;
  preset.name = "corollary3";
  preset.target_mass0 = 1.0;
  preset.sigma_sq = 1.0;
  preset.grid.push_back(point(4, 16, 1.0));
  preset.grid.push_back(point(16, 65536, 1.0));
  return preset;
}

sim::SimConfig base_config(int d, double sigma_sq, double f_star) {
  sim::SimConfig config;
  config.d = d;
  config.sigma_sq = sigma_sq;
  config.target.kind = sim::Target::Kind::constant;
  config.target.value = f_star;
  return config;
}

SimPreset appendix_a(char which) {
  SimPreset preset;
  preset.name = std::string("appendixA-") + which;
  for (long long m : {64LL, 256LL, 1024LL}) {
    sim::SimConfig config = which == 'a'   ? base_config(6, 1.0, 10.0)
                            : which == 'b' ? base_config(4, 10.0, 10.0)
                                           : base_config(6, 100.0, 10.0);
    config.m = m;
    config.tau = which == 'a'   ? narrowing_tau(m)
                 : which == 'b' ? 1.0
                                : critical_tau(m, 3.0);
    preset.configs.push_back(config);
  }
  return preset;
}

SimPreset agreement(int d) {
  SimPreset preset;
  preset.name = "sim-agreement-d" + std::to_string(d);
  for (long long m : {64LL, 128LL, 256LL}) {
    sim::SimConfig config = base_config(d, 1.0, 1.0);
    config.m = m;
    config.tau = 1.0;
    preset.configs.push_back(config);
  }
  return preset;
}

}  // namespace

const std::vector<std::string>& scan_preset_names() {
  static const std::vector<std::string> names = {
      "theorem1-case1",     "theorem1-case2",    "theorem1-case3",
      "corollary1-alpha15", "corollary1-alpha1", "corollary2",
      "corollary3"};
  return names;
}

const std::vector<std::string>& sim_preset_names() {
  static const std::vector<std::string> names = {
      "appendixA-a", "appendixA-b", "appendixA-c", "sim-agreement-d4",
      "sim-agreement-d6"};
  return names;
}

ScanPreset scan_preset(const std::string& name) {
  if (name == "theorem1-case1") return theorem1(name, 1);
  if (name == "theorem1-case2") return theorem1(name, 2);
  if (name == "theorem1-case3") return theorem1(name, 3);
  if (name == "corollary1-alpha15") return corollary1(name, 1.5);
  if (name == "corollary1-alpha1") return corollary1(name, 1.0);
  if (name == "corollary2") return corollary2();
  if (name == "corollary3") return corollary3();
  throw usage_error("unknown scan preset: " + name);
}

SimPreset sim_preset(const std::string& name) {
  if (name == "appendixA-a") return appendix_a('a');
  if (name == "appendixA-b") return appendix_a('b');
  if (name == "appendixA-c") return appendix_a('c');
  if (name == "sim-agreement-d4") return agreement(4);
  if (name == "sim-agreement-d6") return agreement(6);
  throw usage_error("unknown sim preset: " + name);
}

}  // namespace eigenrisk::presets
