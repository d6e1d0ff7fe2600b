#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ilr/config.hpp"

namespace ilr {

struct FieldRange {
  std::string name;
  double min = 0.0;
  double max = 0.0;
};

struct RunSummary {
  CaseId case_id = CaseId::DoubleSine;
  int steps = 0;
  double time = 0.0;
  int cells = 0;
  int max_cells = 0;
  std::vector<FieldRange> ranges;
  /// max over conserved components of |sum_T |T| u (end) - sum (start)| / sum_T |T| |u (start)|.
  /// Only meaningful without inflow or outflow boundaries.
  double conservation_drift = 0.0;
  QPStats stats;
  long long halvings = 0;
  long long scaled_cells = 0;
  int adaptations = 0;
  /// Errors against the exact solution, when the case has one.
  std::optional<double> l1;
  std::optional<double> linf;
  double seconds = 0.0;
  /// Files written, in order.
  std::vector<std::string> files;
};

/// Runs the configured case. Writes VTK snapshots at t = 0, at the first step
/// reaching each requested snapshot time and at the end; a CSV history of
/// field ranges per step; and summary.txt. Throws PositivityLoss or
/// DegenerateStencil when the solver aborts.
RunSummary run(const RunConfig& config);

/// Human-readable summary, including the QP iteration histogram.
std::string format_summary(const RunSummary& summary);

}  // namespace ilr
