#pragma once

#include <array>

#include "cgks/mesh/mesh.hpp"

namespace cgks {

inline constexpr int kPolyTerms = 10;

/// Quadratic over the zero-mean basis {1, dx, dy, dz, dx^2-M200, dy^2-M020,
/// dz^2-M002, dxdy-M110, dydz-M011, dxdz-M101}; one column per variable.
struct QuadPoly {
  Eigen::Matrix<double, kPolyTerms, kNumVars> a = Eigen::Matrix<double, kPolyTerms, kNumVars>::Zero();

  static QuadPoly constant(const Conserved& w) {
    QuadPoly p;
    p.a.row(0) = w.transpose();
    return p;
  }
  static QuadPoly linear(const Conserved& w, const ConservedGrad& g) {
    QuadPoly p = constant(w);
    p.a.middleRows<3>(1) = g;
    return p;
  }
  ConservedGrad linear_part() const { return a.middleRows<3>(1); }
};

using BasisRow = Eigen::Matrix<double, 1, kPolyTerms>;

/// Basis values and their x, y, z derivatives at a point.
struct BasisEval {
  BasisRow phi;
  Eigen::Matrix<double, 3, kPolyTerms> dphi;
};

inline BasisEval basis_at(const Cell& cell, const Vec3& x) {
  const Vec3 d = x - cell.centroid;
  const auto& m = cell.moments;
  BasisEval b;
  b.phi << 1.0, d.x(), d.y(), d.z(), d.x() * d.x() - m[3], d.y() * d.y() - m[4], d.z() * d.z() - m[5],
      d.x() * d.y() - m[6], d.y() * d.z() - m[7], d.x() * d.z() - m[8];
  b.dphi << 0, 1, 0, 0, 2 * d.x(), 0, 0, d.y(), 0, d.z(),
            0, 0, 1, 0, 0, 2 * d.y(), 0, d.x(), d.z(), 0,
            0, 0, 0, 1, 0, 0, 2 * d.z(), 0, d.y(), d.x();
  return b;
}

struct PolyValue {
  Conserved value;
  ConservedGrad grad;
};

inline PolyValue eval_poly(const QuadPoly& p, const Cell& cell, const Vec3& x) {
  const BasisEval b = basis_at(cell, x);
  return {(b.phi * p.a).transpose(), b.dphi * p.a};
}

/// Cell average of the polynomial over its own cell (a0 by construction).
inline Conserved poly_mean(const QuadPoly& p) { return p.a.row(0).transpose(); }

/// Von Neumann neighbors of a cell with the neighbor means of the target's
/// basis functions (q[m][j] = mean over neighbor m of basis j+1).
struct Stencil {
  int n = 0;
  std::array<Index, 6> cell{};
  std::array<std::array<double, 9>, 6> q{};
};

inline Stencil make_stencil(const Mesh& mesh, Index c) {
  const Cell& cell = mesh.cells[c];
  Stencil s;
  for (int i = 0; i < cell.num_faces; ++i) {
    const Neighbor nb = mesh.neighbor(c, i);
    if (!nb.valid()) continue;
    s.q[s.n] = neighbor_basis_means(mesh, c, nb);
    s.cell[s.n] = nb.cell;
    ++s.n;
  }
  return s;
}

}  // namespace cgks
