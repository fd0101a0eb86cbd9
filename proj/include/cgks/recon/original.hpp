#pragma once

#include <vector>

#include "cgks/recon/two_step.hpp"

namespace cgks {

/// Maps the stacked data [mean_m - mean_0 (n rows); slopes x,y,z of each
/// neighbor (3n rows)] to a1..a9 for one cell.
struct OriginalOperator {
  Eigen::Matrix<double, 9, Eigen::Dynamic> G;
  bool constrained = true;  // false after the unconstrained fallback
};

inline OriginalOperator build_original_operator(const Stencil& s) {
  const int n = s.n;
  Eigen::MatrixXd C(n, 9), A(3 * n, 9);
  A.setZero();
  for (int m = 0; m < n; ++m) {
    for (int j = 0; j < 9; ++j) C(m, j) = s.q[m][j];
    const double dx = s.q[m][0], dy = s.q[m][1], dz = s.q[m][2];
    A.row(3 * m) << 1, 0, 0, 2 * dx, 0, 0, dy, 0, dz;
    A.row(3 * m + 1) << 0, 1, 0, 0, 2 * dy, 0, dx, dz, 0;
    A.row(3 * m + 2) << 0, 0, 1, 0, 0, 2 * dz, 0, dy, dx;
  }

  OriginalOperator op;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * (sv.size() ? sv[0] : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++rank;

  if (rank < n) {
    Eigen::MatrixXd all(4 * n, 9);
    all << C, A;
    op.G = all.completeOrthogonalDecomposition().pseudoInverse();
    op.constrained = false;
    return op;
  }
  const Eigen::MatrixXd V = svd.matrixV();
  const Eigen::MatrixXd Cp =
      V.leftCols(rank) * sv.head(rank).cwiseInverse().asDiagonal() * svd.matrixU().leftCols(rank).transpose();
  const Eigen::MatrixXd Z = V.rightCols(9 - rank);
  const Eigen::MatrixXd AZp = (A * Z).completeOrthogonalDecomposition().pseudoInverse();
  op.G.resize(9, 4 * n);
  op.G.leftCols(n) = Cp - Z * (AZp * (A * Cp));
  op.G.rightCols(3 * n) = Z * AZp;
  return op;
}

/// Constrained-LS p2 from a precomputed operator of the stencil.
inline QuadPoly original_hweno_reconstruct(const Eigen::Ref<const Eigen::Matrix<double, 9, Eigen::Dynamic>>& G,
                                           int n, const StencilValues& v) {
  Eigen::Matrix<double, Eigen::Dynamic, kNumVars, 0, 24, kNumVars> rhs(4 * n, kNumVars);
  for (int m = 0; m < n; ++m) {
    rhs.row(m) = (v.mean[m] - v.mean0).transpose();
    rhs.middleRows<3>(n + 3 * m) = v.slope[m];
  }
  QuadPoly p;
  p.a.row(0) = v.mean0.transpose();
  p.a.bottomRows<9>().noalias() = G * rhs;
  return p;
}

}  // namespace cgks
