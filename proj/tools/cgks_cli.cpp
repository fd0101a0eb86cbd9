#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "cgks/driver/accuracy.hpp"
#include "cgks/driver/bench.hpp"

using namespace cgks;

namespace {

int cmd_run(const std::string& path, bool quiet) {
  const CaseConfig cfg = load_config(path);
  const RunResult r = run_case(cfg, true, quiet ? nullptr : &std::cout);
  const RunReport& rep = r.report;
  std::cout << std::setprecision(6) << "done: " << rep.steps << " steps, t = " << rep.time << ", wall " << rep.wall
            << " s (reconstruction " << rep.timers.reconstruction << ", flux " << rep.timers.flux << ", update "
            << rep.timers.update << ")\n"
            << "persistent reconstruction reals per cell: " << rep.memory.per_cell() << '\n';
  if (rep.limited_cells) std::cout << "cell reconstructions reduced to constants: " << rep.limited_cells << '\n';
  return 0;
}

int cmd_accuracy(const std::string& style, int levels, const std::string& path, int base, const std::string& csv) {
  const BoxStyle s = style == "hex" ? BoxStyle::Hex : BoxStyle::Tet6;
  const auto rows = run_accuracy(s, levels, recon_path_from_string(path), &std::cout, base);
  std::cout << std::setprecision(6) << "n       L1            order  L2            order  Linf          order\n";
  for (const auto& r : rows)
    std::cout << std::left << std::setw(8) << r.n << std::setw(14) << r.error.l1[0] << std::setw(7) << r.order_l1[0]
              << std::setw(14) << r.error.l2[0] << std::setw(7) << r.order_l2[0] << std::setw(14) << r.error.linf[0]
              << r.order_linf[0] << '\n';
  if (!csv.empty()) write_accuracy_csv(rows, csv);
  return 0;
}

int cmd_bench(const std::string& path, int reps, int steps, const std::string& csv) {
  const CaseConfig cfg = load_config(path);
  const Mesh mesh = build_case_mesh(cfg);
  const BenchReport r = bench_reconstruction(mesh, cfg.solver, initial_state(cfg, mesh), reps, steps);
  print_bench(r, std::cout);
  if (!csv.empty()) write_bench_csv(r, csv);
  return 0;
}

int cmd_info(const std::string& path) {
  const Mesh m = read_mesh(path);
  std::map<std::string, int> kinds;
  double vol = 0.0, vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
  Index full = 0;
  for (Index c = 0; c < m.num_cells(); ++c) {
    const Cell& cell = m.cells[c];
    ++kinds[to_string(cell.kind)];
    vol += cell.volume;
    vmin = std::min(vmin, cell.volume);
    vmax = std::max(vmax, cell.volume);
    full += m.has_full_stencil(c);
  }
  std::cout << "cells " << m.num_cells() << " (";
  for (auto it = kinds.begin(); it != kinds.end(); ++it) std::cout << (it == kinds.begin() ? "" : ", ") << it->first << ' ' << it->second;
  std::cout << ")\nnodes " << m.nodes.size() << ", faces " << m.num_faces() << '\n';
  std::cout << std::setprecision(8) << "volume " << vol << " (cell min " << vmin << ", max " << vmax << ")\n";
  std::cout << "bbox " << m.bbox_lo.transpose() << " .. " << m.bbox_hi.transpose() << '\n';
  std::cout << "cells with full stencil " << full << '\n';
  std::vector<int> counts(m.patches.size(), 0);
  for (const Face& f : m.faces)
    if (f.is_boundary()) ++counts[f.patch];
  for (std::size_t p = 0; p < m.patches.size(); ++p)
    std::cout << "patch " << m.patches[p].name << ": " << counts[p] << " faces, kind " << to_string(m.patches[p].kind)
              << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compact gas-kinetic finite-volume solver"};
  app.require_subcommand(1);

  std::string config;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run a case file");
  run->add_option("config", config, "INI case file")->required()->check(CLI::ExistingFile);
  run->add_flag("-q,--quiet", quiet, "do not echo the step log");

  std::string style = "hex", path = "two_step", csv;
  int levels = 2, base = 0;
  auto* acc = app.add_subcommand("accuracy", "sine-advection convergence study");
  acc->add_option("--style", style, "hex or tet")->check(CLI::IsMember({"hex", "tet"}));
  acc->add_option("--levels", levels, "number of 2x refinements")->check(CLI::PositiveNumber);
  acc->add_option("--path", path, "two_step or original")->check(CLI::IsMember({"two_step", "original"}));
  acc->add_option("--base", base, "cells per axis on the coarsest level (default 10 hex, 5 tet)");
  acc->add_option("--csv", csv, "write the error table");

  int reps = 10, steps = 5;
  std::string bench_csv;
  auto* bench = app.add_subcommand("bench-recon", "time both reconstruction paths on a case");
  bench->add_option("config", config, "INI case file")->required()->check(CLI::ExistingFile);
  bench->add_option("--reps", reps, "reconstruction sweeps per path")->check(CLI::PositiveNumber);
  bench->add_option("--steps", steps, "time steps per path")->check(CLI::PositiveNumber);
  bench->add_option("--csv", bench_csv, "write the timing table");

  std::string mesh_path;
  auto* info = app.add_subcommand("info", "summarize a mesh file");
  info->add_option("mesh", mesh_path, "mesh file (.msh or native)")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config, quiet);
    if (*acc) return cmd_accuracy(style, levels, path, base, csv);
    if (*bench) return cmd_bench(config, reps, steps, bench_csv);
    if (*info) return cmd_info(mesh_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
