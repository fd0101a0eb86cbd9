#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <string>

#include "cgks/driver/run.hpp"

namespace cgks {

struct PathBench {
  ReconPath path = ReconPath::TwoStep;
  double setup = 0.0;  // solver construction, including any operator precomputation
  double sweep = 0.0;  // seconds per polynomial sweep over all cells
  double stage = 0.0;  // seconds per solver reconstruction stage: ghosts, sweep, face-point positivity pass
  double sweep_in_step = 0.0;  // mean polynomial sweep inside S2O4 steps, between flux evaluations
  double step = 0.0;   // seconds per S2O4 step
  MemoryLedger memory;
};

struct BenchReport {
  Index cells = 0;
  int repetitions = 0;
  int steps = 0;
  PathBench two_step, original;
  double sweep_ratio() const { return original.sweep / two_step.sweep; }
  double sweep_in_step_ratio() const { return original.sweep_in_step / two_step.sweep_in_step; }
  double stage_ratio() const { return original.stage / two_step.stage; }
  double step_ratio() const { return original.step / two_step.step; }
};

namespace detail {

inline double fastest(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

struct PathRun {
  PathBench b;
  std::unique_ptr<Solver> solver;
  std::unique_ptr<Reconstructor> recon;
  std::vector<QuadPoly> polys;
  FlowState st;
  std::vector<double> sweeps, stages, steps;
};

}  // namespace detail

/// A/B timing of the two reconstruction paths on the same mesh and state.
/// The paths alternate every repetition; each reported time is the fastest sample.
inline BenchReport bench_reconstruction(const Mesh& mesh, const SolverOptions& opt, const FlowState& start,
                                        int repetitions = 10, int steps = 5) {
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point a) { return std::chrono::duration<double>(clock::now() - a).count(); };
  BenchReport r;
  r.cells = mesh.num_cells();
  r.repetitions = repetitions;
  r.steps = steps;
  const double dt = Solver(mesh, opt).compute_dt(start);

  std::array<detail::PathRun, 2> runs;
  for (int k = 0; k < 2; ++k) {
    detail::PathRun& p = runs[k];
    SolverOptions o = opt;
    o.recon.path = p.b.path = k == 0 ? ReconPath::TwoStep : ReconPath::Original;
    auto t = clock::now();
    p.solver = std::make_unique<Solver>(mesh, o);
    p.b.setup = seconds(t);
    p.recon = std::make_unique<Reconstructor>(mesh, o.recon);
    p.st = start;
    p.recon->sweep({start.mean, start.slope, {}, start.alpha}, p.polys);  // warm-up
  }
  const ReconInput in{start.mean, start.slope, {}, start.alpha};
  for (int i = 0; i < repetitions; ++i)
    for (auto& p : runs) {
      auto t = clock::now();
      p.recon->sweep(in, p.polys);
      p.sweeps.push_back(seconds(t));
      t = clock::now();
      p.solver->reconstruct(start.mean, start.slope, start.alpha);
      p.stages.push_back(seconds(t));
    }
  for (auto& p : runs) p.b.sweep_in_step = -p.solver->timers().sweep;
  const long calls_before = runs[0].solver->timers().reconstructions;
  for (int i = 0; i < steps; ++i)
    for (auto& p : runs) {
      const auto t = clock::now();
      p.solver->s2o4_step(p.st, dt);
      p.steps.push_back(seconds(t));
    }
  const long calls = std::max(1L, runs[0].solver->timers().reconstructions - calls_before);
  for (auto& p : runs) p.b.sweep_in_step = (p.b.sweep_in_step + p.solver->timers().sweep) / calls;
  for (auto& p : runs) {
    p.b.sweep = detail::fastest(p.sweeps);
    p.b.stage = detail::fastest(p.stages);
    p.b.step = detail::fastest(p.steps);
    p.b.memory = memory_ledger(mesh, p.solver->reconstructor(), p.solver->polys(), p.st.alpha);
  }
  r.two_step = runs[0].b;
  r.original = runs[1].b;
  return r;
}

inline void print_bench(const BenchReport& r, std::ostream& os) {
  os << std::setprecision(5);
  os << "cells " << r.cells << ", " << r.repetitions << " sweeps, " << r.steps << " steps\n";
  os << "path        setup_s    sweep_s    in_step_s  stage_s    step_s     reals/cell  matrices\n";
  for (const PathBench* b : {&r.two_step, &r.original})
    os << std::left << std::setw(12) << to_string(b->path) << std::setw(11) << b->setup << std::setw(11) << b->sweep
       << std::setw(11) << b->sweep_in_step << std::setw(11) << b->stage << std::setw(11) << b->step
       << std::setw(12) << b->memory.per_cell() << b->memory.matrices << '\n';
  os << "original/two_step: sweep " << r.sweep_ratio() << ", sweep in step " << r.sweep_in_step_ratio() << ", stage "
     << r.stage_ratio() << ", step " << r.step_ratio() << '\n';
}

inline void write_bench_csv(const BenchReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << std::setprecision(10) << "path,cells,setup_s,sweep_s,sweep_in_step_s,stage_s,step_s,reals_per_cell,matrix_reals,matrices\n";
  for (const PathBench* b : {&r.two_step, &r.original})
    out << to_string(b->path) << ',' << r.cells << ',' << b->setup << ',' << b->sweep << ',' << b->sweep_in_step << ',' << b->stage << ',' << b->step << ','
        << b->memory.per_cell() << ',' << b->memory.matrix_reals << ',' << b->memory.matrices << '\n';
}

}  // namespace cgks
