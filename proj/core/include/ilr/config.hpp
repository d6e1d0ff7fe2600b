#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ilr/bench.hpp"

namespace ilr {

enum class Equation { Scalar, Euler, EulerAxisymmetric };

std::string_view to_string(Equation equation);
std::optional<Equation> parse_equation(std::string_view name);
/// Equation solved by a benchmark case.
Equation equation_of(CaseId id);

struct OutputPlan {
  std::string directory = "out";
  /// Times at which VTK snapshots are written, in addition to t = 0 and the end.
  std::vector<double> snapshots;
  bool vtk = true;
  bool csv = true;

  friend bool operator==(const OutputPlan&, const OutputPlan&) = default;
};

/// Settings of one run. Unset optionals take the case defaults.
struct RunConfig {
  CaseId case_id = CaseId::DoubleSine;
  std::optional<int> cells;
  std::optional<std::string> mesh_file;
  std::optional<Equation> equation;
  std::optional<FluxKind> flux;
  ReconstructionMethod reconstruction = ReconstructionMethod::ILR;
  double gamma = 1.4;
  std::uint64_t seed = 1;

  std::optional<double> end_time;
  double cfl = 0.3;
  CflRule cfl_rule = CflRule::Conventional;
  double beta = 1.0 / 3.0;
  std::optional<double> fixed_dt;
  Integrator integrator = Integrator::SspRk2;

  std::optional<bool> amr_enabled;
  double amr_threshold = 0.2;
  int amr_interval = 1;
  int amr_max_level = 1;

  OutputPlan output;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses flat `key = value` text. Keys are dotted (`time.cfl`) or grouped
/// under `[section]` headers; `#` starts a comment. Unknown keys, bad values
/// and violated constraints throw ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig parse_config_file(const std::string& path);
/// Applies one `key=value` override.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);
/// Text that parse_config reads back to an equal RunConfig.
std::string serialize(const RunConfig& config);

/// Case setup with every override of the config applied.
CaseSetup make_setup(const RunConfig& config);

}  // namespace ilr
