// eigenrisk: command line driver for the Gaussian-kernel risk laboratory.
//
// Subcommands: spectrum, predict, regime, simulate, scan.  Long-form flags
// only.  Exit codes: 0 success, 1 usage error, 2 numeric failure.  All file
// output is byte-stable for fixed inputs (sorted keys, %.17g doubles).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "eigenrisk/errors.hpp"
#include "eigenrisk/framework.hpp"
#include "eigenrisk/jsonio.hpp"
#include "eigenrisk/presets.hpp"
#include "eigenrisk/regimes.hpp"
#include "eigenrisk/sim.hpp"
#include "eigenrisk/spectrum.hpp"

namespace {

using eigenrisk::numeric_error;
using eigenrisk::usage_error;
using nlohmann::json;
namespace fw = eigenrisk::framework;
namespace io = eigenrisk::jsonio;
namespace pre = eigenrisk::presets;
namespace rg = eigenrisk::regimes;
namespace sm = eigenrisk::sim;
namespace sp = eigenrisk::spectrum;

struct SpectrumArgs {
  int d = 0;
  double tau = 0.0;
  long long m = 0;
  double tail_tol = 1e-10;
  double margin = 10.0;
  std::string out;
};

struct PredictArgs {
  int d = 0;
  double tau = 0.0;
  long long m = 0;
  double sigma_sq = 1.0;
  std::string target_kind = "constant";
  double target_value = 1.0;
  double delta = 0.0;
  std::string out;
};

struct ScanArgs {
  std::string preset;
  std::string config;
  std::string out;
  std::string format = "both";
  int l_max = 2;
  bool l_max_given = false;
};

struct SimArgs {
  std::string preset;
  std::string config;
  std::string out;
  std::string format = "both";
};

sm::Target make_target(const std::string& kind, double value) {
  sm::Target t;
  t.value = value;
  if (kind == "constant")
    t.kind = sm::Target::Kind::constant;
  else if (kind == "linear")
    t.kind = sm::Target::Kind::linear;
  else
    throw usage_error("target kind must be 'constant' or 'linear'");
  return t;
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json" && format != "both")
    throw usage_error("format must be one of csv, json, both");
}

void emit(const std::string& out_dir, const std::string& name,
          const std::string& ext, const std::string& content) {
  std::filesystem::create_directories(out_dir);
  std::string path = out_dir + "/" + name + "." + ext;
  io::write_file(path, content);
  std::printf("wrote %s\n", path.c_str());
}

// ---- config (de)serialization: round-trips losslessly -----------------

pre::ScanPreset parse_scan_config(const std::string& path) {
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::exception& e) {
    throw usage_error(std::string("bad scan config JSON: ") + e.what());
  }
  pre::ScanPreset preset;
  try {
    preset.name = j.value("name", std::string("scan"));
    preset.target_mass0 = j.value("target_mass0", 0.0);
    preset.sigma_sq = j.value("sigma_sq", 1.0);
    for (const json& p : j.at("grid"))
      preset.grid.push_back({p.at("d").get<int>(),
                             p.at("m").get<long long>(),
                             p.at("tau").get<double>()});
  } catch (const json::exception& e) {
    throw usage_error(std::string("bad scan config fields: ") + e.what());
  }
  return preset;
}

json serialize_scan_config(const pre::ScanPreset& preset) {
  json grid = json::array();
  for (const rg::GridPoint& p : preset.grid) {
    json entry;
    entry["d"] = p.d;
    entry["m"] = p.m;
    entry["tau"] = p.tau;
    grid.push_back(std::move(entry));
  }
  json out;
  out["name"] = preset.name;
  out["grid"] = std::move(grid);
  out["target_mass0"] = preset.target_mass0;
  out["sigma_sq"] = preset.sigma_sq;
  return out;
}

sm::SimConfig parse_sim_config_entry(const json& j) {
  sm::SimConfig config;
  config.d = j.value("d", config.d);
  config.tau = j.value("tau", config.tau);
  config.m = j.value("m", config.m);
  config.n_test = j.value("n_test", config.n_test);
  config.trials = j.value("trials", config.trials);
  config.sigma_sq = j.value("sigma_sq", config.sigma_sq);
  config.seed = j.value("seed", config.seed);
  config.analytic_noise = j.value("analytic_noise", config.analytic_noise);
  config.target = make_target(j.value("target_kind", std::string("constant")),
                              j.value("target_value", 1.0));
  return config;
}

pre::SimPreset parse_sim_config(const std::string& path) {
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::exception& e) {
    throw usage_error(std::string("bad simulate config JSON: ") + e.what());
  }
  pre::SimPreset preset;
  try {
    preset.name = j.value("name", std::string("simulate"));
    for (const json& entry : j.at("configs"))
      preset.configs.push_back(parse_sim_config_entry(entry));
  } catch (const json::exception& e) {
    throw usage_error(std::string("bad simulate config fields: ") + e.what());
  }
  return preset;
}

json serialize_sim_config(const pre::SimPreset& preset) {
  json configs = json::array();
  for (const sm::SimConfig& c : preset.configs) {
    json entry;
    entry["d"] = c.d;
    entry["tau"] = c.tau;
    entry["m"] = c.m;
    entry["n_test"] = c.n_test;
    entry["trials"] = c.trials;
    entry["sigma_sq"] = c.sigma_sq;
    entry["target_kind"] =
        c.target.kind == sm::Target::Kind::constant ? "constant" : "linear";
    entry["target_value"] = c.target.value;
    entry["seed"] = c.seed;
    entry["analytic_noise"] = c.analytic_noise;
    configs.push_back(std::move(entry));
  }
  json out;
  out["name"] = preset.name;
  out["configs"] = std::move(configs);
  return out;
}

// ---- subcommand bodies -------------------------------------------------

int run_spectrum(const SpectrumArgs& args) {
  sp::SpectrumSpec spec = sp::make_spec(args.d, args.tau);
  sp::EigenSystem sys =
      sp::build_spectrum(spec, args.m, args.tail_tol, args.margin);
  std::string payload = io::stable_dump(io::to_json(sys));
  if (!args.out.empty()) {
    io::write_file(args.out, payload);
    std::printf("wrote %s\n", args.out.c_str());
  } else {
    std::fputs(payload.c_str(), stdout);
  }
  std::fprintf(args.out.empty() ? stderr : stdout,
               "degrees=%zu trace_partial=%s tail_bound=%s\n",
               sys.degrees.size(), io::format_double(sys.trace_partial).c_str(),
               io::format_double(sys.tail_bound).c_str());
  return 0;
}

int run_predict(const PredictArgs& args) {
  sp::SpectrumSpec spec = sp::make_spec(args.d, args.tau);
  sp::EigenSystem sys = sp::build_spectrum(spec, args.m);
  fw::SpectrumView view = fw::view_of(sys);
  sm::Target target = make_target(args.target_kind, args.target_value);
  fw::RiskPrediction prediction = fw::predicted_risk(
      view, target.to_spec(args.d), args.sigma_sq, static_cast<double>(args.m),
      args.delta);
  std::string payload = io::stable_dump(io::to_json(prediction));
  if (!args.out.empty()) {
    io::write_file(args.out, payload);
    std::printf("wrote %s\n", args.out.c_str());
  }
  std::printf("kappa=%s e0=%s bias=%s variance=%s total=%s\n",
              io::format_double(prediction.kappa).c_str(),
              io::format_double(prediction.e_factor).c_str(),
              io::format_double(prediction.bias).c_str(),
              io::format_double(prediction.variance).c_str(),
              io::format_double(prediction.total).c_str());
  return 0;
}

pre::ScanPreset resolve_scan_input(const ScanArgs& args) {
  if (args.preset.empty() == args.config.empty())
    throw usage_error("provide exactly one of --preset or --config");
  pre::ScanPreset preset = args.preset.empty()
                               ? parse_scan_config(args.config)
                               : pre::scan_preset(args.preset);
  if (args.l_max_given) {
    if (args.preset != "corollary3")
      throw usage_error("--l-max only applies to the corollary3 preset");
    if (args.l_max < 1 || args.l_max > 2)
      throw usage_error("--l-max must be 1 or 2");
    preset.grid.resize(static_cast<std::size_t>(args.l_max));
  }
  return preset;
}

int run_scan(const ScanArgs& args, bool regime_view) {
  check_format(args.format);
  pre::ScanPreset preset = resolve_scan_input(args);
  rg::RegimeReport report =
      rg::scan(preset.grid, preset.target_mass0, preset.sigma_sq);
  if (!args.out.empty()) {
    if (args.format != "json")
      emit(args.out, preset.name, "csv", io::scan_csv(report));
    if (args.format != "csv")
      emit(args.out, preset.name, regime_view ? "regime.json" : "json",
           io::stable_dump(io::to_json(report)));
    // configs round-trip losslessly; keep the one actually used next to the
    // artifacts so the run can be replayed exactly.
    emit(args.out, preset.name, "config.json",
         io::stable_dump(serialize_scan_config(preset)));
  } else if (!regime_view) {
    std::fputs(io::scan_csv(report).c_str(), stdout);
  }
  std::printf("classification=%s excess_slope=%s total_slope=%s points=%zu\n",
              report.classification.c_str(),
              io::format_double(report.excess_slope).c_str(),
              io::format_double(report.total_slope).c_str(),
              report.points.size());
  return 0;
}

int run_simulate(const SimArgs& args) {
  check_format(args.format);
  if (args.preset.empty() == args.config.empty())
    throw usage_error("provide exactly one of --preset or --config");
  pre::SimPreset preset = args.preset.empty() ? parse_sim_config(args.config)
                                              : pre::sim_preset(args.preset);
  std::vector<sm::SimResult> results;
  for (const sm::SimConfig& config : preset.configs) {
    results.push_back(sm::run_experiment(config));
    const sm::SimResult& r = results.back();
    std::printf(
        "m=%lld d=%d tau=%s empirical=%s stderr=%s predicted=%s null=%s "
        "n_ok=%d%s\n",
        r.config.m, r.config.d, io::format_double(r.config.tau).c_str(),
        io::format_double(r.empirical_mean).c_str(),
        io::format_double(r.empirical_stderr).c_str(),
        io::format_double(r.predicted_total).c_str(),
        io::format_double(r.null_risk).c_str(), r.n_ok,
        r.failed ? " FAILED" : "");
  }
  if (!args.out.empty()) {
    if (args.format != "json")
      emit(args.out, preset.name, "csv", io::sim_csv(results));
    if (args.format != "csv") {
      json arr = json::array();
      for (const sm::SimResult& r : results) arr.push_back(io::to_json(r));
      json wrapper;
      wrapper["results"] = std::move(arr);
      emit(args.out, preset.name, "json", io::stable_dump(wrapper));
    }
    emit(args.out, preset.name, "config.json",
         io::stable_dump(serialize_sim_config(preset)));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eigenrisk: Gaussian-kernel risk laboratory on the sphere"};
  app.require_subcommand(1);

  SpectrumArgs spectrum_args;
  CLI::App* cmd_spectrum =
      app.add_subcommand("spectrum", "Compute the kernel eigenspectrum");
  cmd_spectrum->add_option("--d", spectrum_args.d, "ambient dimension (>= 2)")
      ->required();
  cmd_spectrum->add_option("--tau", spectrum_args.tau, "kernel bandwidth (> 0)")
      ->required();
  cmd_spectrum->add_option("--m", spectrum_args.m, "sample size the spectrum must cover")
      ->required();
  cmd_spectrum->add_option("--tail-tol", spectrum_args.tail_tol,
                           "relative tail tolerance");
  cmd_spectrum->add_option("--margin", spectrum_args.margin,
                           "flattened-count margin over m");
  cmd_spectrum->add_option("--out", spectrum_args.out, "output JSON path");

  PredictArgs predict_args;
  CLI::App* cmd_predict =
      app.add_subcommand("predict", "Predict interpolation risk at one point");
  cmd_predict->add_option("--d", predict_args.d, "ambient dimension")->required();
  cmd_predict->add_option("--tau", predict_args.tau, "kernel bandwidth")->required();
  cmd_predict->add_option("--m", predict_args.m, "sample size")->required();
  cmd_predict->add_option("--sigma-sq", predict_args.sigma_sq, "noise variance");
  cmd_predict->add_option("--target-kind", predict_args.target_kind,
                          "constant | linear");
  cmd_predict->add_option("--target-value", predict_args.target_value,
                          "target amplitude");
  cmd_predict->add_option("--delta", predict_args.delta, "ridge parameter");
  cmd_predict->add_option("--out", predict_args.out, "output JSON path");

  ScanArgs scan_args;
  CLI::App* cmd_scan =
      app.add_subcommand("scan", "Run a grid scan and emit CSV/JSON artifacts");
  cmd_scan->add_option("--preset", scan_args.preset, "named scan preset");
  cmd_scan->add_option("--config", scan_args.config, "scan config JSON file");
  cmd_scan->add_option("--out", scan_args.out, "output directory");
  cmd_scan->add_option("--format", scan_args.format, "csv | json | both");
  cmd_scan->add_option("--l-max", scan_args.l_max, "levels for corollary3")
      ->check(CLI::Range(1, 2));

  ScanArgs regime_args;
  CLI::App* cmd_regime =
      app.add_subcommand("regime", "Scan and classify the risk curve");
  cmd_regime->add_option("--preset", regime_args.preset, "named scan preset");
  cmd_regime->add_option("--config", regime_args.config, "scan config JSON file");
  cmd_regime->add_option("--out", regime_args.out, "output directory");
  cmd_regime->add_option("--format", regime_args.format, "csv | json | both");

  SimArgs sim_args;
  CLI::App* cmd_simulate = app.add_subcommand(
      "simulate", "Monte Carlo minimum-norm interpolation experiments");
  cmd_simulate->add_option("--preset", sim_args.preset, "named sim preset");
  cmd_simulate->add_option("--config", sim_args.config, "sim config JSON file");
  cmd_simulate->add_option("--out", sim_args.out, "output directory");
  cmd_simulate->add_option("--format", sim_args.format, "csv | json | both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_spectrum->parsed()) return run_spectrum(spectrum_args);
    if (cmd_predict->parsed()) return run_predict(predict_args);
    if (cmd_scan->parsed()) {
      scan_args.l_max_given = cmd_scan->count("--l-max") > 0;
      return run_scan(scan_args, false);
    }
    if (cmd_regime->parsed()) return run_scan(regime_args, true);
    if (cmd_simulate->parsed()) return run_simulate(sim_args);
    throw usage_error("no subcommand given");
  } catch (const usage_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
