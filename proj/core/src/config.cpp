#include "ilr/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "ilr/errors.hpp"
#include "ilr/mesh_io.hpp"

namespace ilr {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view key, const std::string& why) {
  throw ConfigError(std::string(key) + ": " + why);
}

double to_double(std::string_view key, std::string_view v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x)) bad(key, "expected a number, got '" + std::string(v) + "'");
  return x;
}

long long to_integer(std::string_view key, std::string_view v) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) bad(key, "expected an integer, got '" + std::string(v) + "'");
  return x;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  bad(key, "expected true or false, got '" + std::string(v) + "'");
}

template <class T>
T to_enum(std::string_view key, std::string_view v, std::optional<T> parsed, std::string_view options) {
  if (!parsed) bad(key, "unknown value '" + std::string(v) + "' (valid: " + std::string(options) + ")");
  return *parsed;
}

std::string format(double x) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"case",
       [](RunConfig& c, auto k, auto v) {
         c.case_id = to_enum(k, v, parse_case(v), "double-sine, solid-body-rotation, double-mach, forward-step, sedov");
       }},
      {"cells", [](RunConfig& c, auto k, auto v) { c.cells = static_cast<int>(to_integer(k, v)); }},
      {"seed", [](RunConfig& c, auto k, auto v) { c.seed = static_cast<std::uint64_t>(to_integer(k, v)); }},
      {"equation",
       [](RunConfig& c, auto k, auto v) {
         c.equation = to_enum(k, v, parse_equation(v), "scalar, euler, euler-axisymmetric");
       }},
      {"flux", [](RunConfig& c, auto k, auto v) { c.flux = to_enum(k, v, parse_flux_kind(v), "upwind, llf, hllc"); }},
      {"reconstruction",
       [](RunConfig& c, auto k, auto v) {
         c.reconstruction = to_enum(k, v, parse_reconstruction(v), "ilr, barth, unlimited");
       }},
      {"gamma", [](RunConfig& c, auto k, auto v) { c.gamma = to_double(k, v); }},
      {"mesh.file", [](RunConfig& c, auto, auto v) { c.mesh_file = std::string(v); }},
      {"time.end", [](RunConfig& c, auto k, auto v) { c.end_time = to_double(k, v); }},
      {"time.cfl", [](RunConfig& c, auto k, auto v) { c.cfl = to_double(k, v); }},
      {"time.cfl_rule",
       [](RunConfig& c, auto k, auto v) { c.cfl_rule = to_enum(k, v, parse_cfl_rule(v), "conventional, theorem"); }},
      {"time.beta", [](RunConfig& c, auto k, auto v) { c.beta = to_double(k, v); }},
      {"time.fixed_dt", [](RunConfig& c, auto k, auto v) { c.fixed_dt = to_double(k, v); }},
      {"time.integrator",
       [](RunConfig& c, auto k, auto v) { c.integrator = to_enum(k, v, parse_integrator(v), "euler, ssp-rk2"); }},
      {"amr.enabled", [](RunConfig& c, auto k, auto v) { c.amr_enabled = to_bool(k, v); }},
      {"amr.threshold", [](RunConfig& c, auto k, auto v) { c.amr_threshold = to_double(k, v); }},
      {"amr.interval", [](RunConfig& c, auto k, auto v) { c.amr_interval = static_cast<int>(to_integer(k, v)); }},
      {"amr.max_level", [](RunConfig& c, auto k, auto v) { c.amr_max_level = static_cast<int>(to_integer(k, v)); }},
      {"output.directory", [](RunConfig& c, auto, auto v) { c.output.directory = std::string(v); }},
      {"output.snapshots",
       [](RunConfig& c, auto k, auto v) {
         c.output.snapshots.clear();
         std::string_view rest = v;
         while (!trim(rest).empty()) {
           const auto comma = rest.find(',');
           c.output.snapshots.push_back(to_double(k, trim(rest.substr(0, comma))));
           if (comma == std::string_view::npos) break;
           rest = rest.substr(comma + 1);
         }
       }},
      {"output.vtk", [](RunConfig& c, auto k, auto v) { c.output.vtk = to_bool(k, v); }},
      {"output.csv", [](RunConfig& c, auto k, auto v) { c.output.csv = to_bool(k, v); }},
  };
  return table;
}

}  // namespace

std::string_view to_string(Equation equation) {
  switch (equation) {
    case Equation::Scalar: return "scalar";
    case Equation::Euler: return "euler";
    case Equation::EulerAxisymmetric: return "euler-axisymmetric";
  }
  return "unknown";
}

std::optional<Equation> parse_equation(std::string_view name) {
  for (Equation e : {Equation::Scalar, Equation::Euler, Equation::EulerAxisymmetric})
    if (name == to_string(e)) return e;
  return std::nullopt;
}

Equation equation_of(CaseId id) {
  if (id == CaseId::Sedov) return Equation::EulerAxisymmetric;
  return is_euler(id) ? Equation::Euler : Equation::Scalar;
}

void RunConfig::validate() const {
  if (cells && *cells < 2) bad("cells", "must be at least 2");
  if (equation && *equation != equation_of(case_id))
    bad("equation", "case " + std::string(to_string(case_id)) + " solves " + std::string(to_string(equation_of(case_id))));
  if (flux) {
    const bool scalar = equation_of(case_id) == Equation::Scalar;
    if (scalar != (*flux == FluxKind::Upwind))
      bad("flux", scalar ? "scalar cases use upwind" : "Euler cases use llf or hllc");
  }
  if (!(gamma > 1.0)) bad("gamma", "must exceed 1");
  if (end_time && !(*end_time >= 0.0)) bad("time.end", "must be non-negative");
  if (!(cfl > 0.0)) bad("time.cfl", "must be positive");
  if (!(beta > 0.0 && beta <= 1.0 / 3.0 + 1e-15)) bad("time.beta", "must lie in (0, 1/3]");
  if (fixed_dt && !(*fixed_dt > 0.0)) bad("time.fixed_dt", "must be positive");
  if (!(amr_threshold > 0.0)) bad("amr.threshold", "must be positive");
  if (amr_interval < 1) bad("amr.interval", "must be at least 1");
  if (amr_max_level < 0 || amr_max_level > 2) bad("amr.max_level", "must lie in [0, 2]");
  if (amr_enabled.value_or(false) && !is_euler(case_id)) bad("amr.enabled", "adaptation needs an Euler case");
  if (mesh_file && case_id == CaseId::Sedov) bad("mesh.file", "the sedov case builds its own mesh");
  if (output.directory.empty()) bad("output.directory", "must not be empty");
  for (double t : output.snapshots)
    if (!(t >= 0.0)) bad("output.snapshots", "times must be non-negative");
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  it->second(config, key, trim(value));
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key(trim(line.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    set_config_value(config, key, line.substr(eq + 1));
  }
  config.validate();
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  out << "case = " << to_string(c.case_id) << "\n";
  if (c.cells) out << "cells = " << *c.cells << "\n";
  out << "seed = " << c.seed << "\n";
  if (c.equation) out << "equation = " << to_string(*c.equation) << "\n";
  if (c.flux) out << "flux = " << to_string(*c.flux) << "\n";
  out << "reconstruction = " << to_string(c.reconstruction) << "\n";
  out << "gamma = " << format(c.gamma) << "\n";
  if (c.mesh_file) out << "mesh.file = " << *c.mesh_file << "\n";
  if (c.end_time) out << "time.end = " << format(*c.end_time) << "\n";
  out << "time.cfl = " << format(c.cfl) << "\n";
  out << "time.cfl_rule = " << to_string(c.cfl_rule) << "\n";
  out << "time.beta = " << format(c.beta) << "\n";
  if (c.fixed_dt) out << "time.fixed_dt = " << format(*c.fixed_dt) << "\n";
  out << "time.integrator = " << to_string(c.integrator) << "\n";
  if (c.amr_enabled) out << "amr.enabled = " << (*c.amr_enabled ? "true" : "false") << "\n";
  out << "amr.threshold = " << format(c.amr_threshold) << "\n";
  out << "amr.interval = " << c.amr_interval << "\n";
  out << "amr.max_level = " << c.amr_max_level << "\n";
  out << "output.directory = " << c.output.directory << "\n";
  if (!c.output.snapshots.empty()) {
    out << "output.snapshots = ";
    for (std::size_t i = 0; i < c.output.snapshots.size(); ++i)
      out << (i ? ", " : "") << format(c.output.snapshots[i]);
    out << "\n";
  }
  out << "output.vtk = " << (c.output.vtk ? "true" : "false") << "\n";
  out << "output.csv = " << (c.output.csv ? "true" : "false") << "\n";
  return out.str();
}

CaseSetup make_setup(const RunConfig& config) {
  config.validate();
  const CaseId id = config.case_id;
  CaseSetup s = setup_case(id, config.cells.value_or(default_resolution(id)), config.seed);
  s.gas.gamma = config.gamma;
  if (config.mesh_file) {
    s.mesh = read_mesh_file(*config.mesh_file);
    const int n = s.mesh.num_cells();
    if (is_euler(id)) {
      s.euler_initial.resize(n);
      for (int c = 0; c < n; ++c) {
        const Primitive w = id == CaseId::DoubleMach ? s.boundary.prescribed(s.mesh.cell(c).centroid, 0.0)
                                                     : forward_step_inflow();
        s.euler_initial[c] = s.gas.to_conserved(w);
      }
    } else {
      s.scalar_initial.resize(n);
      const auto f = id == CaseId::DoubleSine ? double_sine : rotation_profile;
      for (int c = 0; c < n; ++c) s.scalar_initial[c] = cell_average(s.mesh, c, f);
      if (s.policy.fixed_dt) s.policy.fixed_dt = 0.6 * std::numbers::pi * min_inscribed_diameter(s.mesh);
    }
  } else if (id == CaseId::DoubleMach || id == CaseId::ForwardStep) {
    // These cases are given by primitive states.
    for (int c = 0; c < s.mesh.num_cells(); ++c) {
      const Primitive w = id == CaseId::DoubleMach ? s.boundary.prescribed(s.mesh.cell(c).centroid, 0.0)
                                                   : forward_step_inflow();
      s.euler_initial[c] = s.gas.to_conserved(w);
    }
  }
  if (config.end_time) s.end_time = *config.end_time;
  if (config.flux) s.flux = *config.flux;
  s.policy.cfl = config.cfl;
  s.policy.rule = config.cfl_rule;
  s.policy.beta = config.beta;
  if (config.fixed_dt) s.policy.fixed_dt = config.fixed_dt;
  s.integrator = config.integrator;
  if (config.amr_enabled) s.amr.enabled = *config.amr_enabled;
  s.amr.threshold = config.amr_threshold;
  s.amr.interval = config.amr_interval;
  s.amr.max_level = config.amr_max_level;
  return s;
}

}  // namespace ilr
