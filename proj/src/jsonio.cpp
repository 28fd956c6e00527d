#include "eigenrisk/jsonio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "eigenrisk/errors.hpp"

namespace eigenrisk::jsonio {

namespace {

using nlohmann::json;

// Emits JSON with a fixed layout: keys in sorted order (nlohmann's default
// object storage), doubles via format_double, two-space indent, LF endings.
// Non-finite doubles are emitted as the strings "nan"/"inf"/"-inf" so the
// output stays parseable.
void dump_rec(const json& j, std::string& out, int indent, int depth) {
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.cbegin(); it != j.cend(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out.append(static_cast<std::size_t>(indent) * (depth + 1), ' ');
        out += json(it.key()).dump();
        out += ": ";
        dump_rec(it.value(), out, indent, depth + 1);
      }
      out += "\n";
      out.append(static_cast<std::size_t>(indent) * depth, ' ');
      out += "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const json& item : j) {
        if (!first) out += ",\n";
        first = false;
        out.append(static_cast<std::size_t>(indent) * (depth + 1), ' ');
        dump_rec(item, out, indent, depth + 1);
      }
      out += "\n";
      out.append(static_cast<std::size_t>(indent) * depth, ' ');
      out += "]";
      return;
    }
    case json::value_t::number_float: {
      double v = j.get<double>();
      if (std::isfinite(v)) {
        out += format_double(v);
      } else {
        out += '"';
        out += format_double(v);
        out += '"';
      }
      return;
    }
    default:
      out += j.dump();  // strings (escaped), integers, booleans, null
      return;
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string stable_dump(const json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

json to_json(const spectrum::EigenSystem& system) {
  json degrees = json::array();
  for (const spectrum::DegreeEigen& deg : system.degrees) {
    json entry;
    entry["k"] = deg.k;
    entry["log_lambda"] = deg.log_lambda;
    if (deg.count_exact)
      entry["count"] = *deg.count_exact;
    else
      entry["count"] = std::exp(deg.log_count);
    degrees.push_back(std::move(entry));
  }
  json out;
  out["d"] = system.spec.d;
  out["tau"] = system.spec.tau;
  out["degrees"] = std::move(degrees);
  out["trace_partial"] = system.trace_partial;
  out["tail_bound"] = system.tail_bound;
  return out;
}

json to_json(const framework::RiskPrediction& prediction) {
  json out;
  out["kappa"] = prediction.kappa;
  out["e_factor"] = prediction.e_factor;
  out["bias"] = prediction.bias;
  out["variance"] = prediction.variance;
  out["total"] = prediction.total;
  out["residual"] = prediction.residual;
  return out;
}

json to_json(const regimes::RegimeReport& report) {
  json points = json::array();
  for (const regimes::ScanPoint& p : report.points) {
    json a;
    a["A"] = p.assumptions.A;
    a["b"] = p.assumptions.b;
    a["c"] = p.assumptions.c;
    a["k_m"] = p.assumptions.k_m;
    a["L_m"] = p.assumptions.L_m;
    a["U_m"] = p.assumptions.U_m;
    a["tail_bound"] = p.assumptions.tail_bound;
    a["a_unit_ok"] = p.assumptions.a_unit_ok;
    a["b_positive"] = p.assumptions.b_positive;
    a["c_finite"] = p.assumptions.c_finite;
    json entry;
    entry["m"] = p.m;
    entry["d"] = p.d;
    entry["tau"] = p.tau;
    entry["kappa"] = p.kappa;
    entry["e0"] = p.e0;
    entry["bias"] = p.bias;
    entry["variance"] = p.variance;
    entry["total"] = p.total;
    entry["upper_sq"] = p.upper_sq;
    entry["upper_lin"] = p.upper_lin;
    entry["lower"] = p.lower;
    entry["assumptions"] = std::move(a);
    entry["flags"] = p.flags;
    points.push_back(std::move(entry));
  }
  json out;
  out["classification"] = report.classification;
  out["excess_slope"] = report.excess_slope;
  out["total_slope"] = report.total_slope;
  out["points"] = std::move(points);
  return out;
}

json to_json(const sim::SimResult& result) {
  json cfg;
  cfg["d"] = result.config.d;
  cfg["tau"] = result.config.tau;
  cfg["m"] = result.config.m;
  cfg["n_test"] = result.config.n_test;
  cfg["trials"] = result.config.trials;
  cfg["sigma_sq"] = result.config.sigma_sq;
  cfg["target_kind"] =
      result.config.target.kind == sim::Target::Kind::constant ? "constant"
                                                                : "linear";
  cfg["target_value"] = result.config.target.value;
  cfg["seed"] = result.config.seed;
  cfg["analytic_noise"] = result.config.analytic_noise;
  json trials = json::array();
  for (const sim::TrialResult& t : result.trials) {
    json entry;
    entry["ok"] = t.ok;
    entry["risk"] = t.risk;
    entry["jitter"] = t.jitter;
    entry["residual_inf"] = t.residual_inf;
    entry["note"] = t.note;
    trials.push_back(std::move(entry));
  }
  json out;
  out["config"] = std::move(cfg);
  out["n_ok"] = result.n_ok;
  out["empirical_mean"] = result.empirical_mean;
  out["empirical_stderr"] = result.empirical_stderr;
  out["predicted_total"] = result.predicted_total;
  out["null_risk"] = result.null_risk;
  out["bayes_risk"] = result.bayes_risk;
  out["jitter_max"] = result.jitter_max;
  out["failed"] = result.failed;
  out["trials"] = std::move(trials);
  return out;
}

std::string scan_csv(const regimes::RegimeReport& report) {
  std::string out =
      "m,d,tau,kappa,e0,total,upper_sq,upper_lin,lower,A,b,c,flags\n";
  for (const regimes::ScanPoint& p : report.points) {
    out += std::to_string(p.m) + "," + std::to_string(p.d) + "," +
           format_double(p.tau) + "," + format_double(p.kappa) + "," +
           format_double(p.e0) + "," + format_double(p.total) + "," +
           format_double(p.upper_sq) + "," + format_double(p.upper_lin) + "," +
           format_double(p.lower) + "," + format_double(p.assumptions.A) +
           "," + format_double(p.assumptions.b) + "," +
           format_double(p.assumptions.c) + "," + p.flags + "\n";
  }
  return out;
}

std::string sim_csv(const std::vector<sim::SimResult>& results) {
  std::string out =
      "m,d,tau,empirical_mean,empirical_stderr,predicted_total,null_risk,"
      "bayes_risk,jitter_max\n";
  for (const sim::SimResult& r : results) {
    out += std::to_string(r.config.m) + "," + std::to_string(r.config.d) +
           "," + format_double(r.config.tau) + "," +
           format_double(r.empirical_mean) + "," +
           format_double(r.empirical_stderr) + "," +
           format_double(r.predicted_total) + "," +
           format_double(r.null_risk) + "," + format_double(r.bayes_risk) +
           "," + format_double(r.jitter_max) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw usage_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw numeric_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw usage_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace eigenrisk::jsonio
