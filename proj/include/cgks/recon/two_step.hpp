#pragma once

#include "cgks/recon/least_squares.hpp"

namespace cgks {

/// How the quadratic coefficients follow from the slope fits.
/// Symmetric: a4 = b1/2 on the plain dx^2 basis. Literal: a4 = b1, which
/// belongs to a dx^2/2 basis and is kept for comparison runs.
enum class QuadMatch { Symmetric, Literal };

/// Neighbor data of one stencil, in stencil order.
struct StencilValues {
  Conserved mean0;
  ConservedGrad slope0;
  std::array<Conserved, 6> mean{};
  std::array<ConservedGrad, 6> slope{};
};

inline StencilValues gather(const Stencil& s, Index c, const std::vector<Conserved>& mean,
                            const std::vector<ConservedGrad>& slope) {
  StencilValues v;
  v.mean0 = mean[c];
  v.slope0 = slope[c];
  for (int m = 0; m < s.n; ++m) {
    v.mean[m] = mean[s.cell[m]];
    v.slope[m] = slope[s.cell[m]];
  }
  return v;
}

/// Two-step matrix-free p2: slope fits give the quadratic terms, a second
/// fit on the remaining mean mismatch gives the linear terms.
/// Returns false (poly untouched) when the 3x3 system is singular.
inline bool two_step_reconstruct(const Stencil& s, const StencilValues& v, QuadPoly& out,
                                 QuadMatch match = QuadMatch::Symmetric) {
  const LsOperator op(s);
  if (!op.ok()) return false;

  // column d + 3k of g: fitted gradient of slope component d of variable k
  using Flat = Eigen::Matrix<double, 1, 3 * kNumVars>;
  Eigen::Matrix<double, 3, 3 * kNumVars> atb = Eigen::Matrix<double, 3, 3 * kNumVars>::Zero();
  const Flat s0 = Eigen::Map<const Flat>(v.slope0.data());
  for (int m = 0; m < s.n; ++m) atb.noalias() += op.delta(m) * (Eigen::Map<const Flat>(v.slope[m].data()) - s0);
  const Eigen::Matrix<double, 3, 3 * kNumVars> g = op.solve_normal<3 * kNumVars>(atb);

  QuadPoly p;
  p.a.row(0) = v.mean0.transpose();
  const double diag = match == QuadMatch::Symmetric ? 0.5 : 1.0;
  for (int k = 0; k < kNumVars; ++k) {
    const auto gk = g.middleCols<3>(3 * k);  // columns: x, y, z slopes
    p.a(4, k) = diag * gk(0, 0);
    p.a(5, k) = diag * gk(1, 1);
    p.a(6, k) = diag * gk(2, 2);
    p.a(7, k) = 0.5 * (gk(1, 0) + gk(0, 1));
    p.a(8, k) = 0.5 * (gk(2, 1) + gk(1, 2));
    p.a(9, k) = 0.5 * (gk(2, 0) + gk(0, 2));
  }

  Eigen::Matrix<double, 3, kNumVars> atb2 = Eigen::Matrix<double, 3, kNumVars>::Zero();
  const auto quad = p.a.bottomRows<6>();
  for (int m = 0; m < s.n; ++m) {
    const Eigen::Map<const Eigen::Matrix<double, 1, 6>> qm(s.q[m].data() + 3);
    atb2.noalias() += op.delta(m) * ((v.mean[m] - v.mean0).transpose() - qm * quad);
  }
  p.a.middleRows<3>(1) = op.solve_normal<kNumVars>(atb2);
  out = p;
  return true;
}

}  // namespace cgks
