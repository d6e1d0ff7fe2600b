#include "ilr/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ilr/errors.hpp"
#include "ilr/output.hpp"

namespace ilr {
namespace {

std::vector<FieldRange> ranges_of(std::span<const CellData> data) {
  std::vector<FieldRange> out;
  for (const CellData& d : data) {
    const auto [lo, hi] = std::minmax_element(d.values.begin(), d.values.end());
    out.push_back({d.name, lo == d.values.end() ? 0.0 : *lo, hi == d.values.end() ? 0.0 : *hi});
  }
  return out;
}

double relative_change(double before, double after, double scale) {
  return scale > 0.0 ? std::abs(after - before) / scale : std::abs(after - before);
}

/// Writes numbered snapshots and the per-step history.
class Recorder {
 public:
  Recorder(const RunConfig& config, RunSummary& summary) : config_(config), summary_(summary) {
    dir_ = config.output.directory;
    std::filesystem::create_directories(dir_);
    pending_ = config.output.snapshots;
    std::sort(pending_.begin(), pending_.end());
  }

  void observe(const Mesh& mesh, int step, double t, const std::vector<CellData>& data, bool force) {
    if (config_.output.csv) {
      history_ << step << ',' << std::setprecision(12) << t << ',' << mesh.num_cells();
      for (const FieldRange& r : ranges_of(data)) history_ << ',' << r.min << ',' << r.max;
      history_ << '\n';
      if (header_.empty()) {
        header_ = "step,time,cells";
        for (const CellData& d : data) header_ += ",min_" + d.name + ",max_" + d.name;
      }
    }
    bool due = force;
    while (!pending_.empty() && t >= pending_.front() * (1.0 - 1e-12)) {
      pending_.erase(pending_.begin());
      due = true;
    }
    if (due && config_.output.vtk && last_snapshot_step_ != step) {
      char name[64];
      std::snprintf(name, sizeof name, "%s_%04d.vtk", std::string(to_string(config_.case_id)).c_str(), snapshot_++);
      const std::string path = (dir_ / name).string();
      write_vtk(mesh, data, {}, path);
      summary_.files.push_back(path);
      last_snapshot_step_ = step;
    }
  }

  void finish() {
    if (!config_.output.csv) return;
    const std::string path = (dir_ / "history.csv").string();
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << header_ << '\n' << history_.str();
    summary_.files.push_back(path);
  }

  const std::filesystem::path& dir() const { return dir_; }

 private:
  const RunConfig& config_;
  RunSummary& summary_;
  std::filesystem::path dir_;
  std::vector<double> pending_;
  std::ostringstream history_;
  std::string header_;
  int snapshot_ = 0;
  int last_snapshot_step_ = -1;
};

}  // namespace

RunSummary run(const RunConfig& config) {
  const CaseSetup setup = make_setup(config);
  RunSummary summary;
  summary.case_id = setup.id;
  Recorder recorder(config, summary);

  if (!is_euler(setup.id)) {
    const auto data = [](const std::vector<double>& u) { return std::vector<CellData>{{"u", u}}; };
    recorder.observe(setup.mesh, 0, 0.0, data(setup.scalar_initial), true);
    ScalarRunOptions options;
    options.method = config.reconstruction;
    options.on_step = [&](int step, double t, const std::vector<double>& u) {
      recorder.observe(setup.mesh, step, t, data(u), false);
    };
    const ScalarRunResult r = run_scalar(setup, options);
    recorder.observe(setup.mesh, r.steps, r.time, data(r.u), true);
    summary.steps = r.steps;
    summary.time = r.time;
    summary.cells = summary.max_cells = setup.mesh.num_cells();
    summary.ranges = ranges_of(data(r.u));
    double mass = 0.0;
    for (int c = 0; c < setup.mesh.num_cells(); ++c) mass += setup.mesh.cell(c).area * std::abs(setup.scalar_initial[c]);
    summary.conservation_drift =
        relative_change(integral(setup.mesh, setup.scalar_initial), integral(setup.mesh, r.u), mass);
    summary.stats = r.stats;
    summary.seconds = r.seconds;
    const ErrorReport e =
        error_norms(setup.mesh, r.u, [&](const Vec2& x) { return exact_solution(setup.id, x, r.time); });
    summary.l1 = e.l1;
    summary.linf = e.linf;
    if (config.output.csv) {
      const std::string path = (recorder.dir() / "errors.csv").string();
      std::ofstream out(path);
      if (!out) throw Error("cannot write " + path);
      out << "cells,l1,linf\n" << std::setprecision(8) << summary.cells << ',' << e.l1 << ',' << e.linf << '\n';
      summary.files.push_back(path);
    }
  } else {
    const auto data = [&](const Mesh& mesh, const std::vector<EulerState>& u) {
      return euler_cell_data(mesh, u, setup.gas, setup.axisymmetric);
    };
    recorder.observe(setup.mesh, 0, 0.0, data(setup.mesh, setup.euler_initial), true);
    EulerRunOptions options;
    options.method = config.reconstruction;
    options.on_step = [&](const Mesh& mesh, int step, double t, const std::vector<EulerState>& u) {
      recorder.observe(mesh, step, t, data(mesh, u), false);
    };
    const EulerRunResult r = run_euler(setup, options);
    recorder.observe(r.mesh, r.steps, r.time, data(r.mesh, r.u), true);
    summary.steps = r.steps;
    summary.time = r.time;
    summary.cells = r.mesh.num_cells();
    summary.max_cells = r.max_cells;
    summary.ranges = ranges_of(data(r.mesh, r.u));
    const EulerState before = integral(setup.mesh, setup.euler_initial), after = integral(r.mesh, r.u);
    EulerState mass{};
    for (int c = 0; c < setup.mesh.num_cells(); ++c)
      for (int k = 0; k < 4; ++k) mass[k] += setup.mesh.cell(c).area * std::abs(setup.euler_initial[c][k]);
    for (int k = 0; k < 4; ++k)
      summary.conservation_drift = std::max(summary.conservation_drift, relative_change(before[k], after[k], mass[k]));
    summary.stats = r.stats;
    summary.halvings = r.halvings;
    summary.scaled_cells = r.scaled_cells;
    summary.adaptations = r.adaptations;
    summary.seconds = r.seconds;
  }
  recorder.finish();

  const std::string path = (recorder.dir() / "summary.txt").string();
  summary.files.push_back(path);
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << format_summary(summary);
  return summary;
}

std::string format_summary(const RunSummary& s) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "case            " << to_string(s.case_id) << '\n';
  out << "steps           " << s.steps << '\n';
  out << "time            " << s.time << '\n';
  out << "cells           " << s.cells;
  if (s.max_cells != s.cells) out << " (max " << s.max_cells << ')';
  out << '\n';
  for (const FieldRange& r : s.ranges) out << "range " << std::left << std::setw(10) << r.name << r.min << " .. " << r.max << '\n';
  out << "drift           " << s.conservation_drift << '\n';
  if (s.l1) out << "l1 error        " << *s.l1 << '\n';
  if (s.linf) out << "linf error      " << *s.linf << '\n';
  if (s.adaptations) out << "adaptations     " << s.adaptations << '\n';
  if (s.halvings) out << "dt halvings     " << s.halvings << '\n';
  if (s.scaled_cells) out << "scaled cells    " << s.scaled_cells << '\n';
  out << "qp solves       " << s.stats.solves << " (mean " << s.stats.mean() << " iterations, median "
      << s.stats.median() << ")\n";
  out << "qp histogram   ";
  for (int k = 0; k < QPStats::kBins; ++k) out << ' ' << k << (k + 1 == QPStats::kBins ? "+" : "") << ':' << s.stats.histogram[k];
  out << '\n';
  out << "wall seconds    " << s.seconds << '\n';
  return out.str();
}

}  // namespace ilr
