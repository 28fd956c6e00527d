#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "eigenrisk/framework.hpp"
#include "eigenrisk/regimes.hpp"
#include "eigenrisk/sim.hpp"
#include "eigenrisk/spectrum.hpp"

namespace eigenrisk::jsonio {

// Deterministic serialization: keys sorted, doubles printed with %.17g, "\n"
// line ending.  Byte-stable across runs for identical inputs.
std::string stable_dump(const nlohmann::json& j, int indent = 2);

std::string format_double(double v);  // %.17g, with nan/inf spelled out

nlohmann::json to_json(const spectrum::EigenSystem& system);
nlohmann::json to_json(const framework::RiskPrediction& prediction);
nlohmann::json to_json(const regimes::RegimeReport& report);
nlohmann::json to_json(const sim::SimResult& result);

// CSV writers (header + one row per point, doubles as %.17g).
std::string scan_csv(const regimes::RegimeReport& report);
std::string sim_csv(const std::vector<sim::SimResult>& results);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace eigenrisk::jsonio
