#pragma once

#include <optional>

#include "cgks/recon/poly.hpp"

namespace cgks {

/// Normal-equation matrix sum_m delta_m delta_m^T of a stencil, factorized.
/// Built on the fly; nothing here is persisted.
class LsOperator {
 public:
  explicit LsOperator(const Stencil& s) : n_(s.n) {
    Mat3 N = Mat3::Zero();
    for (int m = 0; m < s.n; ++m) {
      delta_[m] = Vec3(s.q[m][0], s.q[m][1], s.q[m][2]);
      N.noalias() += delta_[m] * delta_[m].transpose();
    }
    // Cholesky pivots squared: N00, the 2x2 leading minor over N00, det over that minor
    const double m1 = N(0, 0);
    const double m2 = N(0, 0) * N(1, 1) - N(0, 1) * N(0, 1);
    const double c00 = N(1, 1) * N(2, 2) - N(1, 2) * N(1, 2);
    const double c01 = N(0, 2) * N(1, 2) - N(0, 1) * N(2, 2);
    const double c02 = N(0, 1) * N(1, 2) - N(0, 2) * N(1, 1);
    const double det = N(0, 0) * c00 + N(0, 1) * c01 + N(0, 2) * c02;
    const double floor = 1e-14 * N.trace();  // (1e-7 sqrt(trace))^2
    ok_ = s.n >= 3 && m1 > floor && m2 > floor * m1 && det > floor * m2;
    if (!ok_) return;
    inv_ << c00, c01, c02,
            c01, N(0, 0) * N(2, 2) - N(0, 2) * N(0, 2), N(0, 2) * N(0, 1) - N(0, 0) * N(1, 2),
            c02, N(0, 2) * N(0, 1) - N(0, 0) * N(1, 2), m2;
    inv_ /= det;
  }

  bool ok() const { return ok_; }
  int size() const { return n_; }
  const Vec3& delta(int m) const { return delta_[m]; }

  /// Gradient minimizing sum_m (g . delta_m - rhs_m)^2, one column per variable.
  template <int Cols>
  Eigen::Matrix<double, 3, Cols> solve(const Eigen::Matrix<double, 6, Cols>& rhs) const {
    Eigen::Matrix<double, 3, Cols> atb = Eigen::Matrix<double, 3, Cols>::Zero();
    for (int m = 0; m < n_; ++m) atb.noalias() += delta_[m] * rhs.row(m);
    return solve_normal(atb);
  }

  /// Same solve given the accumulated sum_m delta_m rhs_m.
  template <int Cols>
  Eigen::Matrix<double, 3, Cols> solve_normal(const Eigen::Matrix<double, 3, Cols>& atb) const {
    return inv_ * atb;
  }

 private:
  int n_ = 0;
  std::array<Vec3, 6> delta_{};
  Mat3 inv_ = Mat3::Zero();
  bool ok_ = false;
};

/// Linear least-squares gradient from neighbor means v_m relative to v0.
/// Returns nothing when the stencil geometry is degenerate.
inline std::optional<ConservedGrad> linear_ls_fit(const Stencil& s, const Conserved& v0,
                                                  const std::array<Conserved, 6>& vm) {
  const LsOperator op(s);
  if (!op.ok()) return std::nullopt;
  Eigen::Matrix<double, 6, kNumVars> rhs = Eigen::Matrix<double, 6, kNumVars>::Zero();
  for (int m = 0; m < s.n; ++m) rhs.row(m) = (vm[m] - v0).transpose();
  return op.solve<kNumVars>(rhs);
}

}  // namespace cgks
