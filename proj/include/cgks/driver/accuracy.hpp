#pragma once

#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include "cgks/driver/run.hpp"

namespace cgks {

inline constexpr double kAccuracyCfl = 1.5;

/// Sine-advection case on the periodic [0,2]^3 cube with linear weights and
/// tau = 0. Tet meshes split each hex across the (-1,1,1) diagonal.
inline CaseConfig accuracy_config(BoxStyle style, int n, ReconPath path = ReconPath::TwoStep) {
  CaseConfig c;
  c.box = BoxSpec::cube(0.0, 2.0, n, style);
  c.box.kuhn_flip_x = style == BoxStyle::Tet6;
  c.initial = "sine";
  c.solver.recon.path = path;
  c.solver.recon.weno = false;
  c.solver.df = false;
  c.solver.collision = {0.0, 0.0, 0.0};
  c.solver.cfl = kAccuracyCfl;
  c.end_time = 2.0;
  c.prefix = std::string("accuracy_") + (style == BoxStyle::Hex ? "hex" : "tet") + "_" + std::to_string(n);
  c.vtk_every = -1;
  c.log_every = 0;
  return c;
}

struct AccuracyRow {
  int n = 0;
  Index cells = 0;
  Norms error;
  Conserved order_l1 = Conserved::Constant(std::nan("")), order_l2 = order_l1, order_linf = order_l1;
  long steps = 0;
  double wall = 0.0;
};

inline int accuracy_base(BoxStyle style) { return style == BoxStyle::Hex ? 10 : 5; }

/// Runs `levels` successive 2x refinements starting from the base mesh.
inline std::vector<AccuracyRow> run_accuracy(BoxStyle style, int levels, ReconPath path = ReconPath::TwoStep,
                                             std::ostream* progress = nullptr, int base = 0) {
  std::vector<AccuracyRow> rows;
  int n = base > 0 ? base : accuracy_base(style);
  for (int k = 0; k < levels; ++k, n *= 2) {
    const CaseConfig cfg = accuracy_config(style, n, path);
    const RunResult r = run_case(cfg, false);
    AccuracyRow row;
    row.n = n;
    row.cells = static_cast<Index>(r.state.mean.size());
    row.error = *r.report.error;
    row.steps = r.report.steps;
    row.wall = r.report.wall;
    if (!rows.empty()) {
      const Norms& c = rows.back().error;
      for (int v = 0; v < kNumVars; ++v) {
        row.order_l1[v] = observed_order(c.l1[v], row.error.l1[v]);
        row.order_l2[v] = observed_order(c.l2[v], row.error.l2[v]);
        row.order_linf[v] = observed_order(c.linf[v], row.error.linf[v]);
      }
    }
    rows.push_back(row);
    if (progress)
      *progress << std::setprecision(6) << "n=" << n << " cells=" << row.cells << " L1=" << row.error.l1[0]
                << " L2=" << row.error.l2[0] << " Linf=" << row.error.linf[0] << " steps=" << row.steps
                << " wall=" << row.wall << "s" << std::endl;
  }
  return rows;
}

/// Density errors and orders, one row per level.
inline void write_accuracy_csv(const std::vector<AccuracyRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << std::setprecision(10);
  out << "n,cells,l1,order_l1,l2,order_l2,linf,order_linf,steps,wall_s\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.cells << ',' << r.error.l1[0] << ',' << r.order_l1[0] << ',' << r.error.l2[0] << ','
        << r.order_l2[0] << ',' << r.error.linf[0] << ',' << r.order_linf[0] << ',' << r.steps << ',' << r.wall << '\n';
}

}  // namespace cgks
