// ilrfv: runs the benchmark cases, convergence studies and mesh utilities.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "ilr/bench.hpp"
#include "ilr/config.hpp"
#include "ilr/errors.hpp"
#include "ilr/mesh_generators.hpp"
#include "ilr/mesh_io.hpp"
#include "ilr/output.hpp"
#include "ilr/parallel.hpp"
#include "ilr/runner.hpp"

namespace {

using namespace ilr;

CaseId case_arg(const std::string& name) {
  if (auto id = parse_case(name)) return *id;
  throw ConfigError("unknown case '" + name + "'");
}

ReconstructionMethod method_arg(const std::string& name) {
  if (auto m = parse_reconstruction(name)) return *m;
  throw ConfigError("unknown reconstruction '" + name + "' (valid: ilr, barth, unlimited)");
}

std::vector<int> resolutions(int start, int levels) {
  std::vector<int> out;
  for (int k = 0, n = start; k < levels; ++k, n *= 2) out.push_back(n);
  return out;
}

void print_table(std::string_view method, std::span<const ConvergenceLevel> levels) {
  std::printf("%-10s %8s %11s %6s %11s %6s %9s\n", std::string(method).c_str(), "cells", "L1", "order", "Linf",
              "order", "recon[s]");
  for (const ConvergenceLevel& l : levels) {
    const auto order = [](const std::optional<double>& o) {
      char buf[16];
      if (o) std::snprintf(buf, sizeof buf, "%6.2f", *o);
      else std::snprintf(buf, sizeof buf, "%6s", "-");
      return std::string(buf);
    };
    std::printf("%-10s %8d %11.3e %s %11.3e %s %9.3f\n", "", l.cells, l.error.l1, order(l.error.l1_order).c_str(),
                l.error.linf, order(l.error.linf_order).c_str(), l.error.recon_seconds);
  }
}

void write_csv(const std::string& path, std::span<const ConvergenceLevel> levels) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_convergence_csv(levels, out);
}

void mesh_info(const Mesh& m) {
  int twins = 0;
  for (const Cell& c : m.cells()) twins += c.twin;
  std::map<std::string, int> kinds;
  for (const Edge& e : m.edges())
    if (e.kind != BoundaryKind::Interior) ++kinds[std::string(to_string(e.kind))];
  std::printf("vertices  %d\ncells     %d (%d twin)\nedges     %d\narea      %.12g\nh_min     %.6g\n",
              m.num_vertices(), m.num_cells(), twins, m.num_edges(), m.total_area(), min_inscribed_diameter(m));
  for (const auto& [kind, count] : kinds) std::printf("boundary  %-10s %d\n", kind.c_str(), count);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume solver with integrated linear reconstruction"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("-w,--workers", workers, "Worker threads (default: ILRFV_WORKERS or 1)")->check(CLI::NonNegativeNumber);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run a configured case");
  std::string config_path;
  std::vector<std::string> overrides;
  run_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-s,--set", overrides, "Override a key, e.g. --set time.cfl=0.2");

  // convergence
  auto* conv_cmd = app.add_subcommand("convergence", "Error table for one method over refined meshes");
  std::string conv_case = "double-sine", conv_method = "ilr", conv_csv;
  int levels = 3, start = 16;
  double jitter = 0.0;
  conv_cmd->add_option("case", conv_case, "Scalar case")->required();
  conv_cmd->add_option("--levels", levels, "Number of resolutions")->check(CLI::PositiveNumber);
  conv_cmd->add_option("--start", start, "Coarsest resolution")->check(CLI::Range(2, 4096));
  conv_cmd->add_option("--method", conv_method, "ilr, barth or unlimited");
  conv_cmd->add_option("--jitter", jitter, "Perturb interior nodes by this fraction of the spacing")
      ->check(CLI::Range(0.0, 0.24));
  conv_cmd->add_option("--csv", conv_csv, "Write the table as CSV");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Error tables for several methods");
  std::string cmp_case = "double-sine", cmp_csv_prefix;
  std::vector<std::string> methods{"ilr", "barth", "unlimited"};
  cmp_cmd->add_option("--case", cmp_case, "Scalar case");
  cmp_cmd->add_option("--methods", methods, "Comma-separated methods")->delimiter(',');
  cmp_cmd->add_option("--levels", levels, "Number of resolutions")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--start", start, "Coarsest resolution")->check(CLI::Range(2, 4096));
  cmp_cmd->add_option("--jitter", jitter, "Perturb interior nodes")->check(CLI::Range(0.0, 0.24));
  cmp_cmd->add_option("--csv", cmp_csv_prefix, "Write <prefix>_<method>.csv");

  // mesh
  auto* mesh_cmd = app.add_subcommand("mesh", "Mesh generation and inspection");
  mesh_cmd->require_subcommand(1);
  auto* gen_cmd = mesh_cmd->add_subcommand("gen", "Generate a mesh file");
  std::string kind = "uniform", out_path, side = "wall";
  int nx = 8, ny = 8;
  double stretch = 1.2, fraction = 0.15;
  std::uint64_t seed = 1;
  gen_cmd->add_option("kind", kind, "uniform, jittered, stretched or forward-step")->required();
  gen_cmd->add_option("--nx", nx, "Cells in x (forward-step: cells per unit)")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--ny", ny, "Cells in y")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--stretch", stretch, "Row ratio of the stretched mesh");
  gen_cmd->add_option("--jitter", fraction, "Node perturbation fraction");
  gen_cmd->add_option("--seed", seed, "Random seed");
  gen_cmd->add_option("--boundary", side, "Kind of every side: wall, periodic, dirichlet, ...");
  gen_cmd->add_option("-o,--output", out_path, "Output file")->required();
  auto* info_cmd = mesh_cmd->add_subcommand("info", "Print mesh statistics");
  std::string info_path;
  info_cmd->add_option("file", info_path, "Mesh file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  if (workers > 0) set_worker_count(workers);

  try {
    if (*run_cmd) {
      RunConfig config = parse_config_file(config_path);
      for (const std::string& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
        set_config_value(config, o.substr(0, eq), o.substr(eq + 1));
      }
      config.validate();
      const RunSummary summary = run(config);
      std::cout << format_summary(summary);
      for (const std::string& f : summary.files) std::cout << "wrote " << f << '\n';
    } else if (*conv_cmd) {
      const auto res = resolutions(start, levels);
      const auto table = convergence_study(case_arg(conv_case), res, method_arg(conv_method), jitter);
      print_table(conv_method, table);
      if (!conv_csv.empty()) write_csv(conv_csv, table);
    } else if (*cmp_cmd) {
      const auto res = resolutions(start, levels);
      for (const std::string& m : methods) {
        const auto table = convergence_study(case_arg(cmp_case), res, method_arg(m), jitter);
        print_table(m, table);
        if (!cmp_csv_prefix.empty()) write_csv(cmp_csv_prefix + "_" + m + ".csv", table);
      }
    } else if (*gen_cmd) {
      const auto k = parse_boundary_kind(side);
      if (!k || *k == BoundaryKind::Interior) throw ConfigError("unknown boundary kind '" + side + "'");
      Mesh m;
      if (kind == "uniform") m = uniform_mesh(nx, ny, {}, SideKinds::all(*k));
      else if (kind == "jittered") m = jittered_mesh(nx, ny, {}, SideKinds::all(*k), fraction, seed);
      else if (kind == "stretched") m = stretched_mesh(nx, ny, stretch, seed, 0.3, SideKinds::all(*k));
      else if (kind == "forward-step") m = forward_step_mesh(nx);
      else throw ConfigError("unknown mesh kind '" + kind + "'");
      write_mesh_file(m, out_path);
      mesh_info(m);
    } else if (*info_cmd) {
      mesh_info(read_mesh_file(info_path));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const PositivityLoss& e) {
    std::cerr << "solver aborted: " << e.what() << '\n';
    return 3;
  } catch (const DegenerateStencil& e) {
    std::cerr << "solver aborted: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
