#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "cgks/evolution/solver.hpp"

namespace cgks {

/// Conserved value (row 0) and its gradient (rows 1..3) at a point.
using FieldPack = Eigen::Matrix<double, 4, kNumVars>;
using Field = std::function<FieldPack(const Vec3&)>;

/// Cell averages and cell-averaged gradients by tetrahedral quadrature.
inline FlowState project_state(const Mesh& mesh, const Field& fn, int points_per_dir = 4) {
  const auto rule = quadrature::collapsed_tet_rule(points_per_dir);
  FlowState st = FlowState::uniform(mesh.num_cells(), Conserved::Zero());
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const FieldPack a = integrate_over_cell<FieldPack>(mesh, c, rule, fn, FieldPack::Zero()) / mesh.cells[c].volume;
    st.mean[c] = a.row(0).transpose();
    st.slope[c] = a.bottomRows<3>();
  }
  return st;
}

/// Conserved value and gradient from primitive rho, U, p and their gradients.
inline FieldPack pack_from_primitive(double rho, const Vec3& u, double p, const Vec3& grho, const Mat3& gu,
                                     const Vec3& gp, double gamma) {
  FieldPack v;
  v.row(0) = primitive_to_conserved(rho, u, p, gamma).transpose();
  // gu(d, i) = d u_i / d x_d
  for (int d = 0; d < 3; ++d) {
    v(1 + d, 0) = grho[d];
    for (int i = 0; i < 3; ++i) v(1 + d, 1 + i) = grho[d] * u[i] + rho * gu(d, i);
    v(1 + d, 4) = gp[d] / (gamma - 1.0) + 0.5 * grho[d] * u.squaredNorm() + rho * u.dot(gu.row(d).transpose());
  }
  return v;
}

/// rho = 1 + 0.2 sin(pi (x + y + z - 3t)), U = (1,1,1), p = 1 on a 2-periodic cube.
inline FieldPack sine_wave(const Vec3& x, double t, double gamma) {
  const double ph = kPi * (x.sum() - 3.0 * t);
  const double rho = 1.0 + 0.2 * std::sin(ph);
  const Vec3 grho = Vec3::Constant(0.2 * kPi * std::cos(ph));
  return pack_from_primitive(rho, Vec3::Ones(), 1.0, grho, Mat3::Zero(), Vec3::Zero(), gamma);
}

/// Left/right states split by the plane x = x0.
inline FieldPack riemann_pack(const Vec3& x, double x0, const Conserved& left, const Conserved& right) {
  FieldPack v = FieldPack::Zero();
  v.row(0) = (x.x() < x0 ? left : right).transpose();
  return v;
}

}  // namespace cgks
