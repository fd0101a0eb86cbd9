#pragma once

#include <array>
#include <cmath>
#include <string>

#include "cgks/core/types.hpp"

namespace cgks {

/// Maxwellian g = rho (lambda/pi)^{(K+3)/2} exp(-lambda(|u-U|^2 + xi^2)).
struct Equilibrium {
  double rho = 1.0;
  Vec3 U = Vec3::Zero();
  double lambda = 0.5;
  double K = 2.0;
  double gamma = 1.4;

  double pressure() const { return rho / (2.0 * lambda); }
};

inline double internal_dof(double gamma) { return (5.0 - 3.0 * gamma) / (gamma - 1.0); }

inline Equilibrium cons_to_equilibrium(const Conserved& w, double gamma) {
  if (!(w[0] > 0.0) || !std::isfinite(w[0]))
    throw NonPhysicalState("non-positive density " + std::to_string(w[0]), 0);
  Equilibrium eq;
  eq.rho = w[0];
  eq.U = Vec3(w[1], w[2], w[3]) / w[0];
  eq.gamma = gamma;
  eq.K = internal_dof(gamma);
  const double internal = w[4] - 0.5 * w[0] * eq.U.squaredNorm();
  if (!(internal > 0.0) || !std::isfinite(internal))
    throw NonPhysicalState("non-positive internal energy " + std::to_string(internal), 4);
  eq.lambda = (eq.K + 3.0) * w[0] / (4.0 * internal);
  return eq;
}

inline Conserved equilibrium_to_cons(const Equilibrium& eq) {
  Conserved w;
  w << eq.rho, eq.rho * eq.U.x(), eq.rho * eq.U.y(), eq.rho * eq.U.z(),
      0.5 * eq.rho * (eq.U.squaredNorm() + (eq.K + 3.0) / (2.0 * eq.lambda));
  return w;
}

/// Coefficients (s1..s5) of s1 + s2 u + s3 v + s4 w + s5 (|u|^2 + xi^2)/2.
using MicroSlope = Eigen::Matrix<double, 5, 1>;

inline constexpr int kMomentOrder = 8;  // moments u^0 .. u^7
using MomentRow = std::array<double, kMomentOrder>;

/// Normalized velocity moments of a Maxwellian (density divided out).
struct MomentTable {
  MomentRow u{}, v{}, w{};   // full-space
  MomentRow u_pos{}, u_neg{};  // u > 0 and u < 0 halves
  double xi2 = 0.0, xi4 = 0.0;
};

namespace detail {

inline void full_moments(MomentRow& m, double U, double lambda) {
  m[0] = 1.0;
  m[1] = U;
  for (int n = 0; n + 2 < kMomentOrder; ++n) m[n + 2] = U * m[n + 1] + (n + 1) / (2.0 * lambda) * m[n];
}

// Moments over u > 0. The forward recursion loses accuracy when the
// Maxwellian sits deep on the negative side; there the ratios come from a
// downward (Miller) recurrence on J_n = int_0^inf r^n exp(-2ar - r^2) dr.
inline void positive_half_moments(MomentRow& m, double U, double lambda) {
  const double sl = std::sqrt(lambda);
  const double a = -sl * U;
  if (a <= 2.0) {
    m[0] = 0.5 * std::erfc(a);
    m[1] = U * m[0] + 0.5 * std::exp(-lambda * U * U) / std::sqrt(kPi * lambda);
    for (int n = 0; n + 2 < kMomentOrder; ++n) m[n + 2] = U * m[n + 1] + (n + 1) / (2.0 * lambda) * m[n];
    return;
  }
  constexpr int kStart = 60;
  std::array<double, kStart + 2> j{};
  j[kStart + 1] = 0.0;
  j[kStart] = 1.0;
  for (int n = kStart; n >= 1; --n) {
    j[n - 1] = (2.0 * j[n + 1] + 2.0 * a * j[n]) / n;
    if (j[n - 1] > 1e200)
      for (double& x : j) x *= 1e-200;
  }
  const double base = 0.5 * std::erfc(a);
  double scale = 1.0;
  for (int n = 0; n < kMomentOrder; ++n) {
    m[n] = base * scale * (j[n] / j[0]);
    scale /= sl;
  }
}

}  // namespace detail

inline MomentTable moment_table(const Equilibrium& eq) {
  MomentTable t;
  detail::full_moments(t.u, eq.U.x(), eq.lambda);
  detail::full_moments(t.v, eq.U.y(), eq.lambda);
  detail::full_moments(t.w, eq.U.z(), eq.lambda);
  detail::positive_half_moments(t.u_pos, eq.U.x(), eq.lambda);
  MomentRow mirrored{};
  detail::positive_half_moments(mirrored, -eq.U.x(), eq.lambda);
  for (int n = 0; n < kMomentOrder; ++n) t.u_neg[n] = (n % 2 == 0 ? 1.0 : -1.0) * mirrored[n];
  t.xi2 = eq.K / (2.0 * eq.lambda);
  t.xi4 = (eq.K * eq.K + 2.0 * eq.K) / (4.0 * eq.lambda * eq.lambda);
  return t;
}

/// Which u-moment row to integrate against.
enum class Range { Full, Positive, Negative };

inline const MomentRow& u_row(const MomentTable& t, Range r) {
  switch (r) {
    case Range::Positive: return t.u_pos;
    case Range::Negative: return t.u_neg;
    default: return t.u;
  }
}

/// <u^a v^b w^c psi> over the chosen u-range.
inline Conserved moment_psi(const MomentTable& t, Range r, int a, int b, int c) {
  const MomentRow& u = u_row(t, r);
  const double m = u[a] * t.v[b] * t.w[c];
  Conserved out;
  out << m, u[a + 1] * t.v[b] * t.w[c], u[a] * t.v[b + 1] * t.w[c], u[a] * t.v[b] * t.w[c + 1],
      0.5 * (u[a + 2] * t.v[b] * t.w[c] + u[a] * t.v[b + 2] * t.w[c] + u[a] * t.v[b] * t.w[c + 2] + t.xi2 * m);
  return out;
}

/// <xi^2 u^a v^b w^c psi>.
inline Conserved moment_xi2_psi(const MomentTable& t, Range r, int a, int b, int c) {
  const MomentRow& u = u_row(t, r);
  const double m = u[a] * t.v[b] * t.w[c];
  Conserved out;
  out << t.xi2 * m, t.xi2 * u[a + 1] * t.v[b] * t.w[c], t.xi2 * u[a] * t.v[b + 1] * t.w[c],
      t.xi2 * u[a] * t.v[b] * t.w[c + 1],
      0.5 * (t.xi2 * (u[a + 2] * t.v[b] * t.w[c] + u[a] * t.v[b + 2] * t.w[c] + u[a] * t.v[b] * t.w[c + 2]) +
             t.xi4 * m);
  return out;
}

/// <s u^a v^b w^c psi> for a microslope s.
inline Conserved moment_slope_psi(const MicroSlope& s, const MomentTable& t, Range r, int a, int b, int c) {
  return s[0] * moment_psi(t, r, a, b, c) + s[1] * moment_psi(t, r, a + 1, b, c) +
         s[2] * moment_psi(t, r, a, b + 1, c) + s[3] * moment_psi(t, r, a, b, c + 1) +
         0.5 * s[4] *
             (moment_psi(t, r, a + 2, b, c) + moment_psi(t, r, a, b + 2, c) + moment_psi(t, r, a, b, c + 2) +
              moment_xi2_psi(t, r, a, b, c));
}

/// Solves <s psi> = dW / rho for s (closed-form elimination).
inline MicroSlope solve_microslope(const Equilibrium& eq, const Conserved& dW) {
  const Conserved b = dW / eq.rho;
  const Vec3& U = eq.U;
  const double lam = eq.lambda;
  const double kk = eq.K + 3.0;
  const double e2 = U.squaredNorm() + kk / (2.0 * lam);
  const Vec3 r(b[1] - U.x() * b[0], b[2] - U.y() * b[0], b[3] - U.z() * b[0]);
  const double r5 = 2.0 * b[4] - e2 * b[0];
  MicroSlope s;
  s[4] = 4.0 * lam * lam / kk * (r5 - 2.0 * U.dot(r));
  for (int i = 0; i < 3; ++i) s[i + 1] = 2.0 * lam * r[i] - U[i] * s[4];
  s[0] = b[0] - U.x() * s[1] - U.y() * s[2] - U.z() * s[3] - 0.5 * s[4] * e2;
  return s;
}

/// Time microslope from the compatibility condition <A + a_x u + a_y v + a_z w> = 0.
inline MicroSlope solve_time_slope(const Equilibrium& eq, const MomentTable& t, const MicroSlope& ax,
                                   const MicroSlope& ay, const MicroSlope& az) {
  const Conserved rhs = moment_slope_psi(ax, t, Range::Full, 1, 0, 0) + moment_slope_psi(ay, t, Range::Full, 0, 1, 0) +
                        moment_slope_psi(az, t, Range::Full, 0, 0, 1);
  return solve_microslope(eq, -eq.rho * rhs);
}

}  // namespace cgks
