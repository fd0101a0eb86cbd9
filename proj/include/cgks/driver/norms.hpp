#pragma once

#include <cmath>
#include <functional>

#include "cgks/driver/initial.hpp"

namespace cgks {

/// Volume-weighted error norms of the cell averages, per variable.
struct Norms {
  Conserved l1 = Conserved::Zero();
  Conserved l2 = Conserved::Zero();
  Conserved linf = Conserved::Zero();
};

using ExactSolution = std::function<FieldPack(const Vec3&, double)>;

/// Compares W-bar against the exact cell averages of the analytic field at time t.
inline Norms analytic_error(const Mesh& mesh, const std::vector<Conserved>& mean, const ExactSolution& exact, double t,
                            int points_per_dir = 4) {
  const FlowState ref = project_state(mesh, [&](const Vec3& x) { return exact(x, t); }, points_per_dir);
  Norms n;
  double vol = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const double v = mesh.cells[c].volume;
    const Conserved e = (mean[c] - ref.mean[c]).cwiseAbs();
    n.l1 += v * e;
    n.l2 += v * e.cwiseProduct(e);
    n.linf = n.linf.cwiseMax(e);
    vol += v;
  }
  n.l1 /= vol;
  n.l2 = (n.l2 / vol).cwiseSqrt();
  return n;
}

/// log2(e_coarse / e_fine) for a 2x refinement.
inline double observed_order(double coarse, double fine, double ratio = 2.0) {
  return std::log(coarse / fine) / std::log(ratio);
}

}  // namespace cgks
