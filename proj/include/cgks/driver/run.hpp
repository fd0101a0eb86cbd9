#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>

#include "cgks/driver/config.hpp"
#include "cgks/driver/norms.hpp"
#include "cgks/driver/vtk.hpp"
#include "cgks/mesh/io.hpp"
#include "cgks/mesh/periodic.hpp"

namespace cgks {

inline int find_patch(const Mesh& mesh, const std::string& name) {
  for (std::size_t i = 0; i < mesh.patches.size(); ++i)
    if (mesh.patches[i].name == name) return static_cast<int>(i);
  return -1;
}

/// Mesh with periodic links paired and boundary kinds applied.
inline Mesh build_case_mesh(const CaseConfig& cfg) {
  Mesh mesh;
  if (cfg.mesh_source == "box") {
    mesh = gen_box(cfg.box);
  } else {
    mesh = read_mesh(cfg.mesh_file);
    const double tol = 1e-6 * (mesh.bbox_hi - mesh.bbox_lo).maxCoeff();
    for (const auto& link : cfg.periodic_links) {
      const int lo = find_patch(mesh, link.lower), hi = find_patch(mesh, link.upper);
      if (lo < 0 || hi < 0) throw ConfigError("mesh.periodic: unknown patch in '" + link.lower + ":" + link.upper + "'");
      mesh.patches[lo].kind = mesh.patches[hi].kind = PatchKind::Periodic;
      pair_periodic(mesh, lo, hi, link.axis, tol);
    }
  }
  for (const auto& [name, kind] : cfg.patch_kinds) {
    const int p = find_patch(mesh, name);
    if (p < 0) throw ConfigError("boundary." + name + ": the mesh has no such patch");
    if (mesh.patches[p].kind == PatchKind::Periodic) {
      if (kind != PatchKind::Periodic) throw ConfigError("boundary." + name + ": patch is periodic");
      continue;
    }
    if (kind == PatchKind::Periodic) throw ConfigError("boundary." + name + ": periodic links are set in [mesh]");
    mesh.patches[p].kind = kind;
  }
  for (auto& p : mesh.patches)
    if (p.kind == PatchKind::FarfieldRiemann) {
      if (!cfg.freestream) throw ConfigError("far-field patch '" + p.name + "' needs boundary_state.freestream");
      p.freestream = cfg.freestream->conserved(cfg.solver.gamma);
    }
  return mesh;
}

inline std::optional<ExactSolution> exact_solution(const CaseConfig& cfg) {
  const double g = cfg.solver.gamma;
  if (cfg.initial == "sine") return ExactSolution([g](const Vec3& x, double t) { return sine_wave(x, t, g); });
  if (cfg.initial == "uniform" || cfg.initial == "freestream") {
    const PrimitiveState s = cfg.initial == "uniform" ? cfg.uniform : *cfg.freestream;
    return ExactSolution([s, g](const Vec3&, double) {
      FieldPack v = FieldPack::Zero();
      v.row(0) = s.conserved(g).transpose();
      return v;
    });
  }
  return std::nullopt;
}

inline FlowState initial_state(const CaseConfig& cfg, const Mesh& mesh) {
  const double g = cfg.solver.gamma;
  if (cfg.initial == "sine") return project_state(mesh, [g](const Vec3& x) { return sine_wave(x, 0.0, g); });
  if (cfg.initial == "sod") {
    const Conserved l = cfg.left.conserved(g), r = cfg.right.conserved(g);
    const double x0 = cfg.interface_x;
    return project_state(mesh, [&](const Vec3& x) { return riemann_pack(x, x0, l, r); });
  }
  const PrimitiveState s = cfg.initial == "uniform" ? cfg.uniform : *cfg.freestream;
  return FlowState::uniform(mesh.num_cells(), s.conserved(g));
}

struct RunReport {
  long steps = 0;
  double time = 0.0;
  double wall = 0.0;
  StageTimers timers;
  MemoryLedger memory;
  long limited_cells = 0;  // summed over all reconstructions
  std::optional<Norms> error;
};

struct RunResult {
  FlowState state;
  RunReport report;
};

inline std::string vtk_path(const CaseConfig& cfg, long step) {
  std::ostringstream os;
  os << cfg.prefix << '_' << std::setw(6) << std::setfill('0') << step << ".vtk";
  return (std::filesystem::path(cfg.output_dir) / os.str()).string();
}

/// Called after every step with the solver, the new state and the step size.
using StepHook = std::function<void(const Solver&, const FlowState&, double)>;

/// Runs the S2O4 loop to the end condition. Writes the log and VTK files when
/// `write_outputs` is set; `echo` receives a copy of the log.

inline RunResult run_case(const CaseConfig& cfg, const Mesh& mesh, bool write_outputs = true,
                          std::ostream* echo = nullptr, const StepHook& hook = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  Solver solver(mesh, cfg.solver);
  RunResult res{initial_state(cfg, mesh), {}};
  FlowState& st = res.state;

  std::ofstream log;
  if (write_outputs) {
    std::filesystem::create_directories(cfg.output_dir);
    log.open((std::filesystem::path(cfg.output_dir) / (cfg.prefix + ".log")).string());
    if (!log) throw std::runtime_error("cannot write the run log in '" + cfg.output_dir + "'");
  }
  auto emit = [&](const std::string& line) {
    if (log.is_open()) log << line << '\n';
    if (echo) *echo << line << '\n';
  };
  emit("# step time dt res_rho_l2 res_rho_max res_energy_l2 limited");

  const double end = cfg.end_time > 0.0 ? cfg.end_time : std::numeric_limits<double>::infinity();
  const long max_steps = cfg.max_steps > 0 ? cfg.max_steps : std::numeric_limits<long>::max();
  while (st.time < end * (1.0 - 1e-12) && st.step < max_steps) {
    const double dt = std::min(solver.compute_dt(st), end - st.time);
    try {
      solver.s2o4_step(st, dt);
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(st.step + 1) + ", t = " + std::to_string(st.time) + ": " + e.what(),
                        e.cell(), e.time());
    }
    res.report.limited_cells += solver.limited_cells();
    if (hook) hook(solver, st, dt);
    if (cfg.log_every > 0 && st.step % cfg.log_every == 0) {
      const auto& L = solver.stage1().L;
      double r2 = 0.0, rmax = 0.0, e2 = 0.0, vol = 0.0;
      for (Index c = 0; c < mesh.num_cells(); ++c) {
        const double v = mesh.cells[c].volume;
        r2 += v * L[c][0] * L[c][0];
        e2 += v * L[c][4] * L[c][4];
        rmax = std::max(rmax, std::abs(L[c][0]));
        vol += v;
      }
      std::ostringstream os;
      os << std::setprecision(8) << st.step << ' ' << st.time << ' ' << dt << ' ' << std::sqrt(r2 / vol) << ' ' << rmax
         << ' ' << std::sqrt(e2 / vol) << ' ' << solver.limited_cells();
      emit(os.str());
    }
    if (write_outputs && cfg.vtk_every > 0 && st.step % cfg.vtk_every == 0)
      write_vtk(mesh, st, cfg.solver.gamma, vtk_path(cfg, st.step));
  }
  if (write_outputs && cfg.vtk_every >= 0) write_vtk(mesh, st, cfg.solver.gamma, vtk_path(cfg, st.step));

  RunReport& r = res.report;
  r.steps = st.step;
  r.time = st.time;
  r.timers = solver.timers();
  r.memory = memory_ledger(mesh, solver.reconstructor(), solver.polys(), st.alpha);
  if (const auto exact = exact_solution(cfg)) r.error = analytic_error(mesh, st.mean, *exact, st.time);
  r.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.error) {
    std::ostringstream os;
    os << std::setprecision(8) << "# rho errors L1 " << r.error->l1[0] << " L2 " << r.error->l2[0] << " Linf "
       << r.error->linf[0];
    emit(os.str());
  }
  return res;
}

inline RunResult run_case(const CaseConfig& cfg, bool write_outputs = true, std::ostream* echo = nullptr) {
  const Mesh mesh = build_case_mesh(cfg);
  return run_case(cfg, mesh, write_outputs, echo);
}

}  // namespace cgks
