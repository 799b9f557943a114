// Copyright 2026 The mesodec Authors
// SPDX-License-Identifier: Apache-2.0
//
// mesodec command-line tool.
//
//   mesodec visibility  --molecule C70 --T 2500K --d 1um --t 10ms
//   mesodec surface     --config configs/fig1a.cfg --out fig1a.csv
//   mesodec mc-verify   --n 100000 --seed 7 --json mc.json
//   mesodec spectrum    --molecule C70 --T 2500 --out spectrum.csv
//   mesodec intensity   --T 300 --d 1um --t 10ms --mode both --out pattern.csv
//   mesodec replay      pattern.csv.manifest.json
//
// Exit codes: 0 success, 2 usage, 3 numerical failure, 4 verification failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "mesodec/mesodec.hpp"
#include "mesodec/io.hpp"

namespace {

using mesodec::io::Quantity;
using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kVerification = 4 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

//---------------------------------------------------------------------------//
// Parameters: every option is carried as text until a command interprets it,
// so that the resolved set can be written to a manifest and replayed.

struct ParamDef {
  std::string name;
  std::string default_value;  // empty: no default
  std::string help;
  bool flag = false;
  bool multi = false;
};

class Params {
 public:
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const {
    const auto it = values.find(key);
    return it != values.end() && !it->second.empty();
  }
  const std::string& get(const std::string& key) const {
    static const std::string empty;
    const auto it = values.find(key);
    return it == values.end() ? empty : it->second;
  }
  const std::string& require(const std::string& key) const {
    if (!has(key)) throw UsageError("missing required option --" + key);
    return get(key);
  }
  double quantity(const std::string& key, Quantity q) const {
    try {
      return mesodec::io::parse_quantity(require(key), q);
    } catch (const UsageError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw UsageError("--" + key + ": " + e.what());
    }
  }
  std::uint64_t unsigned_integer(const std::string& key) const {
    const std::string& text = require(key);
    const double v = quantity(key, Quantity::dimensionless);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19) {
      throw UsageError("--" + key + ": expected a non-negative integer, got '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
  }
  bool flag(const std::string& key) const { return get(key) == "true"; }
};

struct CommandSpec {
  std::string name;
  std::string description;
  std::vector<ParamDef> params;
  std::function<int(const Params&)> run;
};

std::vector<ParamDef> molecule_params() {
  return {
      {"molecule", "C70", "molecule preset (C60, C70)"},
      {"N", "", "number of vibrational modes (overrides preset)"},
      {"ell", "", "cross-section exponent (overrides preset)"},
      {"a-ell", "", "cross-section coefficient in m^2 s^ell (overrides preset)"},
      {"mass", "", "particle mass, kg or with suffix u (overrides preset)"},
  };
}

mesodec::MoleculeParams molecule_from(const Params& p) {
  mesodec::MoleculeParams mol;
  if (const auto preset = mesodec::presets::by_name(p.get("molecule"))) {
    mol = *preset;
  } else if (p.has("molecule")) {
    throw UsageError("--molecule: unknown preset '" + p.get("molecule") + "' (known: C60, C70)");
  } else {
    mol.name = "custom";
  }
  if (p.has("N")) {
    mol.n_modes = p.get("N") == "inf" ? INFINITY : p.quantity("N", Quantity::dimensionless);
  }
  if (p.has("ell")) mol.ell = static_cast<int>(p.unsigned_integer("ell"));
  if (p.has("a-ell")) mol.a_ell = p.quantity("a-ell", Quantity::dimensionless);
  if (p.has("mass")) mol.mass = p.quantity("mass", Quantity::mass);
  if (p.has("N") || p.has("ell") || p.has("a-ell") || p.has("mass")) mol.name += "*";
  try {
    mol.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return mol;
}

double slit_momentum_from(const Params& p) {
  if (p.has("sigma-p")) return p.quantity("sigma-p", Quantity::dimensionless);
  return mesodec::slit_momentum_width(p.quantity("slit-width", Quantity::length));
}

mesodec::ExperimentConfig config_from(const Params& p) {
  mesodec::ExperimentConfig cfg;
  cfg.molecule = molecule_from(p);
  cfg.temperature = p.quantity("T", Quantity::temperature);
  cfg.slit_separation = p.quantity("d", Quantity::length);
  cfg.flight_time = p.quantity("t", Quantity::time);
  cfg.slit_width_momentum = slit_momentum_from(p);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

//---------------------------------------------------------------------------//
// Output helpers

bool use_color() { return std::getenv("NO_COLOR") == nullptr && ::isatty(STDERR_FILENO); }

void warn(const std::string& message) {
  if (use_color()) {
    std::cerr << "\033[33mwarning:\033[0m " << message << '\n';
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

std::string num(double v) { return mesodec::io::format_number(v); }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw UsageError("failed writing '" + path + "'");
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes `path` and its sibling `path.manifest.json`.
void write_with_manifest(const std::string& command, const Params& p, const std::string& path,
                         const std::string& content, bool stochastic) {
  write_text_file(path, content);
  json manifest;
  manifest["command"] = command;
  manifest["parameters"] = json::object();
  for (const auto& [k, v] : p.values) manifest["parameters"][k] = v;
  manifest["tool_version"] = mesodec::kVersion;
  manifest["seed"] = stochastic && p.has("seed") ? json(p.unsigned_integer("seed")) : json(nullptr);
  manifest["timestamp"] = utc_timestamp();
  manifest["output"] = path;
  write_text_file(path + ".manifest.json", manifest.dump(2) + "\n");
}

//---------------------------------------------------------------------------//
// Commands

int run_visibility(const Params& p) {
  const auto cfg = config_from(p);
  const double tol = p.quantity("tol", Quantity::dimensionless);
  const auto vis = mesodec::visibility_closed_form(cfg, tol);
  const double far = mesodec::far_field_check(cfg);
  const auto action = mesodec::action_exchange_check(cfg, tol);

  std::cout << "V=" << num(vis.visibility) << " phase=" << num(vis.phase)
            << " Lambda=" << num(vis.lambda) << " G=" << num(vis.g_factor)
            << " zeta=" << num(vis.zeta) << " far_field=" << num(far)
            << " action_ratio=" << num(action.action_ratio)
            << " thermal_ratio=" << num(action.thermal_ratio) << '\n';
  if (cfg.flight_time > 0.0 && far < 10.0) {
    warn("far-field ratio " + num(far) + " < 10; the far-field pattern is marginal");
  }
  if (action.action_ratio > 1.0) {
    warn("exchanged action " + num(action.action_ratio) + " hbar exceeds hbar");
  }

  if (p.has("json")) {
    json out;
    out["molecule"] = cfg.molecule.name;
    out["T"] = cfg.temperature;
    out["d"] = cfg.slit_separation;
    out["t"] = cfg.flight_time;
    out["visibility"] = vis.visibility;
    out["phase"] = vis.phase;
    out["lambda"] = vis.lambda;
    out["g_factor"] = vis.g_factor;
    out["zeta"] = vis.zeta;
    out["far_field_ratio"] = far;
    out["dp_total"] = action.dp_total;
    out["action_ratio"] = action.action_ratio;
    out["thermal_ratio"] = action.thermal_ratio;
    write_with_manifest("visibility", p, p.get("json"), out.dump(2) + "\n", false);
  }
  return kOk;
}

int run_surface(const Params& p) {
  const std::string quantity = p.require("quantity");
  if (quantity != "visibility" && quantity != "tdec") {
    throw UsageError("--quantity must be 'visibility' or 'tdec'");
  }
  const auto axes = mesodec::io::split(p.require("grid"), ' ');
  std::vector<std::string> axis_texts;
  for (const auto& a : axes) {
    if (!a.empty()) axis_texts.push_back(a);
  }
  if (axis_texts.size() != 2) throw UsageError("--grid needs exactly two axes");

  mesodec::GridSpec grid;
  try {
    grid.axis1 = mesodec::io::parse_axis(axis_texts[0]);
    grid.axis2 = mesodec::io::parse_axis(axis_texts[1]);
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
  const auto on_grid = [&](mesodec::SweepAxis a) {
    return grid.axis1.axis == a || grid.axis2.axis == a;
  };
  const auto mol = molecule_from(p);
  grid.fixed.molecule = mol;
  grid.fixed.slit_width_momentum = slit_momentum_from(p);
  if (!on_grid(mesodec::SweepAxis::temperature) && quantity == "visibility") {
    grid.fixed.temperature = p.quantity("T", Quantity::temperature);
  }
  if (!on_grid(mesodec::SweepAxis::separation)) {
    grid.fixed.slit_separation = p.quantity("d", Quantity::length);
  }
  if (!on_grid(mesodec::SweepAxis::time)) grid.fixed.flight_time = p.quantity("t", Quantity::time);

  mesodec::SweepOptions sweep;
  sweep.threads = static_cast<unsigned>(p.unsigned_integer("threads"));
  sweep.rel_tol = p.quantity("tol", Quantity::dimensionless);

  mesodec::Surface surface;
  try {
    if (quantity == "visibility") {
      surface = mesodec::visibility_surface(mol, grid, sweep);
    } else {
      mesodec::TdecOptions tdec;
      const auto bracket = mesodec::io::split(p.require("bracket"), ':');
      if (bracket.size() != 2) throw UsageError("--bracket must look like lo:hi");
      tdec.t_lo = mesodec::io::parse_quantity(bracket[0], Quantity::temperature);
      tdec.t_hi = mesodec::io::parse_quantity(bracket[1], Quantity::temperature);
      tdec.tol_T = p.quantity("tol-T", Quantity::temperature);
      tdec.level = p.quantity("level", Quantity::dimensionless);
      tdec.rel_tol = sweep.rel_tol;
      surface = mesodec::tdec_surface(mol, grid, tdec, sweep);
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (surface.failures > 0) {
    std::cerr << "surface: " << surface.failures << " node(s) failed";
    if (!surface.messages.empty()) std::cerr << " (first: " << surface.messages.front() << ")";
    std::cerr << '\n';
    if (!p.flag("allow-partial")) return kNumerical;
  }

  std::string csv = "axis1,axis2,value\n";
  for (std::size_t i = 0; i < surface.axis1_values.size(); ++i) {
    for (std::size_t j = 0; j < surface.axis2_values.size(); ++j) {
      csv += num(surface.axis1_values[i]) + "," + num(surface.axis2_values[j]) + "," +
             num(surface.at(i, j)) + "\n";
    }
  }
  write_with_manifest("surface", p, p.require("out"), csv, false);
  std::cout << "wrote " << surface.values.size() << " nodes (" << mesodec::axis_name(grid.axis1.axis)
            << " x " << mesodec::axis_name(grid.axis2.axis) << ") to " << p.get("out") << '\n';
  return kOk;
}

std::vector<mesodec::ValidationPoint> validation_points(const Params& p) {
  if (!p.has("points")) return mesodec::default_validation_grid();
  std::vector<mesodec::ValidationPoint> out;
  for (const auto& item : mesodec::io::split(p.get("points"), ',')) {
    const auto parts = mesodec::io::split(item, ':');
    if (parts.size() != 3) throw UsageError("--points entries must look like T:d:t");
    try {
      out.push_back({mesodec::io::parse_quantity(parts[0], Quantity::temperature),
                     mesodec::io::parse_quantity(parts[1], Quantity::length),
                     mesodec::io::parse_quantity(parts[2], Quantity::time)});
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--points: ") + e.what());
    }
  }
  return out;
}

int run_mc_verify(const Params& p) {
  mesodec::McConfig mc;
  mc.n_samples = p.unsigned_integer("n");
  if (mc.n_samples < mesodec::kMinStatisticalSamples) {
    throw UsageError("--n must be at least " + std::to_string(mesodec::kMinStatisticalSamples) +
                     " for a statistical comparison");
  }
  mc.seed = p.unsigned_integer("seed");
  mc.batch_size = p.unsigned_integer("batch-size");
  mc.threads = static_cast<unsigned>(p.unsigned_integer("threads"));
  if (mc.batch_size == 0) throw UsageError("--batch-size must be positive");
  const auto mol = molecule_from(p);
  const double tol = p.quantity("tol", Quantity::dimensionless);
  const auto points = validation_points(p);

  json out;
  out["molecule"] = mol.name;
  out["n_samples"] = mc.n_samples;
  out["seed"] = mc.seed;
  out["batch_size"] = mc.batch_size;
  out["points"] = json::array();
  bool all_ok = true;
  char line[256];
  std::snprintf(line, sizeof line, "%8s %10s %10s %12s %12s %11s %8s\n", "T[K]", "d[m]", "t[s]",
                "v_mc", "v_exact", "std_error", "pull");
  std::cout << line;
  for (const auto& pt : points) {
    mesodec::ExperimentConfig cfg;
    cfg.molecule = mol;
    cfg.temperature = pt.temperature;
    cfg.slit_separation = pt.slit_separation;
    cfg.flight_time = pt.flight_time;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const auto cmp = mesodec::compare_to_closed_form(cfg, mc, tol);
    all_ok = all_ok && !cmp.flagged;
    std::snprintf(line, sizeof line, "%8.1f %10.3e %10.3e %12.6f %12.6f %11.3e %8.3f%s\n",
                  pt.temperature, pt.slit_separation, pt.flight_time, cmp.v_mc, cmp.v_exact,
                  cmp.std_error, cmp.pull, cmp.flagged ? "  !" : "");
    std::cout << line;
    json row;
    row["T"] = pt.temperature;
    row["d"] = pt.slit_separation;
    row["t"] = pt.flight_time;
    row["v_mc"] = cmp.v_mc;
    row["v_exact"] = cmp.v_exact;
    row["std_error"] = cmp.std_error;
    row["pull"] = std::isfinite(cmp.pull) ? json(cmp.pull) : json(nullptr);
    row["imag_pull"] = cmp.imag_pull;
    row["flagged"] = cmp.flagged;
    out["points"].push_back(row);
  }
  out["all_within_4_sigma"] = all_ok;
  if (p.has("json")) write_with_manifest("mc-verify", p, p.get("json"), out.dump(2) + "\n", true);
  std::cout << (all_ok ? "all pulls within 4 standard errors\n" : "pull violation\n");
  return all_ok ? kOk : kVerification;
}

int run_spectrum(const Params& p) {
  const auto mol = molecule_from(p);
  const double temperature = p.quantity("T", Quantity::temperature);
  if (!(temperature > 0.0)) throw UsageError("--T must be > 0");
  const double tol = p.quantity("tol", Quantity::dimensionless);
  const double lambda_q = mesodec::total_rate_quadrature(mol, temperature, tol);
  const double window = p.quantity("t", Quantity::time);

  std::cout << "Lambda_quadrature=" << num(lambda_q);
  if (mol.n_modes >= 10.0) {
    const auto series = mesodec::total_rate_series(mol, temperature);
    const double rel = lambda_q == 0.0 && series.value == 0.0
                           ? 0.0
                           : std::abs(series.value - lambda_q) / std::abs(lambda_q);
    std::cout << " Lambda_series=" << num(series.value) << " rel_diff=" << num(rel)
              << " series_terms=" << series.last_index + 1;
    if (series.diverging) warn("asymptotic series diverges from its first term; N is too small");
  }
  std::cout << " photons=" << num(lambda_q * window) << " (over t=" << num(window) << " s)\n";

  if (p.has("out")) {
    mesodec::io::Range range;
    if (p.has("omega-grid")) {
      try {
        range = mesodec::io::parse_range(p.get("omega-grid"), Quantity::dimensionless);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--omega-grid: ") + e.what());
      }
    } else {
      range = {0.0, 30.0 * mesodec::thermal_frequency(temperature), 301};
    }
    const mesodec::EmissionSpectrum spec{mol, temperature, lambda_q};
    std::string csv = "omega,rate_density\n";
    for (const double omega : range.values()) {
      csv += num(omega) + "," + num(mesodec::emission_rate_density(spec, omega)) + "\n";
    }
    write_with_manifest("spectrum", p, p.get("out"), csv, false);
  }
  return kOk;
}

int run_intensity(const Params& p) {
  const auto cfg = config_from(p);
  if (!(cfg.flight_time > 0.0)) throw UsageError("--t must be > 0 for a screen pattern");
  const std::string mode = p.require("mode");
  if (mode != "exact" && mode != "mc" && mode != "both") {
    throw UsageError("--mode must be exact, mc or both");
  }
  mesodec::io::Range range;
  try {
    range = mesodec::io::parse_range(p.require("screen"), Quantity::length);
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--screen: ") + e.what());
  }
  const auto screen = range.values();
  const double tol = p.quantity("tol", Quantity::dimensionless);
  const auto vis = mesodec::visibility_closed_form(cfg, tol);
  const auto exact = mesodec::fringe_pattern(cfg, vis, screen);

  std::optional<mesodec::EmpiricalPattern> mc_pattern;
  if (mode != "exact") {
    mesodec::McConfig mc;
    mc.n_samples = p.unsigned_integer("n");
    if (mc.n_samples < mesodec::kMinStatisticalSamples) {
      throw UsageError("--n must be at least " + std::to_string(mesodec::kMinStatisticalSamples));
    }
    mc.seed = p.unsigned_integer("seed");
    mc.batch_size = p.unsigned_integer("batch-size");
    mc.threads = static_cast<unsigned>(p.unsigned_integer("threads"));
    if (mc.batch_size == 0) throw UsageError("--batch-size must be positive");
    mc_pattern = mesodec::estimate_pattern(cfg, mc, screen);
  }
  const double far = mesodec::far_field_check(cfg);
  if (far < 10.0) warn("far-field ratio " + num(far) + " < 10; the far-field pattern is marginal");

  std::string csv = mode == "exact" ? "x,I_exact,I0\n" : "x,I_exact,I0,I_mc,I_mc_se\n";
  for (std::size_t i = 0; i < screen.size(); ++i) {
    csv += num(screen[i]) + "," + num(exact.intensity[i]) + "," + num(exact.envelope[i]);
    if (mc_pattern) {
      csv += "," + num(mc_pattern->pattern.intensity[i]) + "," + num(mc_pattern->std_error[i]);
    }
    csv += "\n";
  }
  if (p.has("out")) {
    write_with_manifest("intensity", p, p.get("out"), csv, mode != "exact");
    std::cout << "V=" << num(vis.visibility) << " fringe_period=" << num(mesodec::fringe_period(cfg))
              << " wrote " << screen.size() << " points to " << p.get("out") << '\n';
  } else {
    std::cout << csv;
  }
  return kOk;
}

//---------------------------------------------------------------------------//
// Command table

std::vector<ParamDef> with(std::vector<ParamDef> a, const std::vector<ParamDef>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::vector<ParamDef> kExperimentParams = {
    {"T", "", "internal temperature (K)"},
    {"d", "", "slit separation (m, or with suffix um/nm)"},
    {"t", "", "time of flight (s, or with suffix ms)"},
    {"slit-width", "100nm", "single-slit width setting the Gaussian momentum width"},
    {"sigma-p", "", "single-slit momentum width in kg m/s (overrides --slit-width)"},
};

const std::vector<ParamDef> kMcParams = {
    {"n", "100000", "Monte Carlo samples per configuration"},
    {"seed", "20051970", "root random seed"},
    {"batch-size", "4096", "samples per independent random stream"},
    {"threads", "1", "worker threads (results do not depend on it)"},
};

std::vector<CommandSpec> commands() {
  std::vector<CommandSpec> out;
  out.push_back({"visibility", "closed-form visibility and diagnostics for one configuration",
                 with(with(molecule_params(), kExperimentParams),
                      {{"tol", "1e-11", "relative quadrature tolerance"},
                       {"json", "", "also write a JSON report to this path"}}),
                 run_visibility});
  out.push_back({"surface", "visibility or decoherence-temperature surface as CSV",
                 with(with(molecule_params(), kExperimentParams),
                      {{"quantity", "visibility", "visibility or tdec"},
                       {"grid", "", "two axes name:min:max:count[:log], name in {T,d,t}", false,
                        true},
                       {"out", "", "CSV output path"},
                       {"allow-partial", "false", "write NaN for failed nodes instead of failing",
                        true},
                       {"threads", "1", "worker threads (results do not depend on it)"},
                       {"bracket", "10:5000", "temperature bracket lo:hi for tdec (K)"},
                       {"tol-T", "1e-3", "temperature resolution for tdec (K)"},
                       {"level", "0.5", "visibility level defining tdec"},
                       {"tol", "1e-11", "relative quadrature tolerance"}}),
                 run_surface});
  out.push_back({"mc-verify", "Monte Carlo check of the closed-form visibility",
                 with(with(molecule_params(), kMcParams),
                      {{"points", "", "comma-separated T:d:t triples (default: 12-point grid)"},
                       {"tol", "1e-11", "relative quadrature tolerance"},
                       {"json", "", "write the comparison table as JSON"}}),
                 run_mc_verify});
  out.push_back({"spectrum", "emission spectrum and total photon rate",
                 with(molecule_params(),
                      {{"T", "", "internal temperature (K)"},
                       {"t", "2ms", "window for the expected photon count"},
                       {"omega-grid", "", "angular-frequency grid min:max:count (rad/s)"},
                       {"tol", "1e-10", "relative quadrature tolerance"},
                       {"out", "", "CSV output path"}}),
                 run_spectrum});
  out.push_back({"intensity", "screen intensity, closed form and/or Monte Carlo",
                 with(with(with(molecule_params(), kExperimentParams), kMcParams),
                      {{"screen", "-20um:20um:401", "screen positions min:max:count"},
                       {"mode", "exact", "exact, mc or both"},
                       {"tol", "1e-11", "relative quadrature tolerance"},
                       {"out", "", "CSV output path (stdout if omitted)"}}),
                 run_intensity});
  return out;
}

const CommandSpec* find_command(const std::vector<CommandSpec>& table, const std::string& name) {
  for (const auto& c : table) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const mesodec::numeric::QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

int replay(const std::vector<CommandSpec>& table, const std::string& manifest_path,
           const std::string& out_override) {
  std::ifstream in(manifest_path);
  if (!in) throw UsageError("cannot open manifest '" + manifest_path + "'");
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed manifest: ") + e.what());
  }
  const auto* command = find_command(table, manifest.value("command", std::string{}));
  if (command == nullptr) throw UsageError("manifest names an unknown command");
  Params p;
  for (const auto& [k, v] : manifest.at("parameters").items()) p.values[k] = v.get<std::string>();
  if (!out_override.empty()) {
    const std::string key = p.has("out") ? "out" : "json";
    p.values[key] = out_override;
  }
  return command->run(p);
}

}  // namespace

int main(int argc, char** argv) {
  const auto table = commands();
  CLI::App app{"Visibility of double-slit interference for hot mesoscopic particles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mesodec::kVersion);

  struct Bound {
    CLI::App* sub = nullptr;
    std::map<std::string, std::string> text;
    std::map<std::string, std::vector<std::string>> multi;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> options;
    std::string config;
  };
  std::map<std::string, Bound> bound;
  for (const auto& c : table) {
    Bound& b = bound[c.name];
    b.sub = app.add_subcommand(c.name, c.description);
    b.sub->add_option("--config", b.config, "flat key = value file; explicit flags win");
    for (const auto& def : c.params) {
      std::string help = def.help;
      if (!def.default_value.empty() && !def.flag) help += " [default: " + def.default_value + "]";
      if (def.flag) {
        b.options[def.name] = b.sub->add_flag("--" + def.name, b.flags[def.name], help);
      } else if (def.multi) {
        b.options[def.name] = b.sub->add_option("--" + def.name, b.multi[def.name], help);
      } else {
        b.options[def.name] = b.sub->add_option("--" + def.name, b.text[def.name], help);
      }
    }
  }
  std::string manifest_path;
  std::string replay_out;
  auto* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay_cmd->add_option("manifest", manifest_path, "manifest JSON written next to an output")
      ->required();
  replay_cmd->add_option("--out", replay_out, "write to this path instead of the recorded one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (replay_cmd->parsed()) {
    return guarded([&] { return replay(table, manifest_path, replay_out); });
  }

  for (const auto& c : table) {
    Bound& b = bound[c.name];
    if (!b.sub->parsed()) continue;
    return guarded([&] {
      std::map<std::string, std::string> from_config;
      if (!b.config.empty()) {
        for (auto& [k, v] : mesodec::io::read_config(b.config)) {
          if (c.name == "surface" && k == "command") continue;
          if (!b.options.count(k)) throw UsageError("config: unknown key '" + k + "' for " + c.name);
          from_config[k] = v;
        }
      }
      Params p;
      for (const auto& def : c.params) {
        std::string value;
        if (b.options[def.name]->count() > 0) {
          if (def.flag) {
            value = b.flags[def.name] ? "true" : "false";
          } else if (def.multi) {
            for (const auto& part : b.multi[def.name]) value += (value.empty() ? "" : " ") + part;
          } else {
            value = b.text[def.name];
          }
        } else if (from_config.count(def.name)) {
          value = from_config[def.name];
        } else {
          value = def.default_value;
        }
        p.values[def.name] = value;
      }
      try {
        return c.run(p);
      } catch (const UsageError&) {
        std::cerr << b.sub->help();
        throw;
      }
    });
  }
  return kUsage;
}
