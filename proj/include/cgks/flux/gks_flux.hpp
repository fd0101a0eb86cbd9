#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "cgks/kinetic/moments.hpp"

namespace cgks {

/// Orthonormal right-handed triad (n, t1, t2), stored as the rows of R so
/// that local = R * global.
struct FaceFrame {
  Mat3 R = Mat3::Identity();

  static FaceFrame from_normal(const Vec3& n) {
    const Vec3 a = n.normalized();
    Vec3 e = Vec3::UnitX();
    if (std::abs(a.x()) > std::abs(a.y()) || std::abs(a.x()) > std::abs(a.z()))
      e = std::abs(a.y()) < std::abs(a.z()) ? Vec3::UnitY() : Vec3::UnitZ();
    const Vec3 t1 = a.cross(e).normalized();
    const Vec3 t2 = a.cross(t1);
    FaceFrame f;
    f.R.row(0) = a;
    f.R.row(1) = t1;
    f.R.row(2) = t2;
    return f;
  }

  Vec3 normal() const { return R.row(0).transpose(); }

  Conserved to_local(const Conserved& w) const {
    Conserved out = w;
    out.segment<3>(1) = R * w.segment<3>(1);
    return out;
  }
  Conserved to_global(const Conserved& w) const {
    Conserved out = w;
    out.segment<3>(1) = R.transpose() * w.segment<3>(1);
    return out;
  }
  /// Rotates both the derivative direction and the momentum components.
  ConservedGrad to_local(const ConservedGrad& g) const {
    ConservedGrad out = R * g;
    out.middleCols<3>(1) = out.middleCols<3>(1) * R.transpose();
    return out;
  }
  ConservedGrad to_global(const ConservedGrad& g) const {
    ConservedGrad out = R.transpose() * g;
    out.middleCols<3>(1) = out.middleCols<3>(1) * R;
    return out;
  }
};

struct CollisionModel {
  double mu = 0.0;
  double c1 = 0.05;
  double c2 = 1.0;
};

struct CollisionTimes {
  double tau = 0.0;
  double tau_num = 0.0;
};

inline CollisionTimes collision_time(double pl, double pr, double pc, const CollisionModel& m, double dt) {
  CollisionTimes t;
  t.tau = m.mu / pc;
  t.tau_num = t.tau + m.c1 * dt + m.c2 * std::abs(pl - pr) / (pl + pr) * dt;
  return t;
}

struct InterfaceInput {
  Conserved wl, wr;      // local frame
  ConservedGrad gl, gr;  // local frame; row d is the derivative along local axis d
  double dt = 0.0;
  double gamma = 1.4;
  CollisionModel model;
};

struct FluxSample {
  Conserved full = Conserved::Zero();    // int_0^dt F dt
  Conserved half = Conserved::Zero();    // int_0^{dt/2} F dt
  Conserved point = Conserved::Zero();   // state at the point at t = dt
  Conserved point0 = Conserved::Zero();  // state at the point at t = 0
  Conserved point_half = Conserved::Zero();  // state at the point at t = dt/2
  bool point_ok = true;
};

/// W^c from the half-space parts of the two Maxwellians.
inline Conserved central_state(const Equilibrium& l, const MomentTable& tl, const Equilibrium& r,
                               const MomentTable& tr) {
  return l.rho * moment_psi(tl, Range::Positive, 0, 0, 0) + r.rho * moment_psi(tr, Range::Negative, 0, 0, 0);
}

inline Equilibrium central_state(const Equilibrium& l, const Equilibrium& r) {
  const Conserved wc = central_state(l, moment_table(l), r, moment_table(r));
  if (!is_physical(wc, l.gamma)) throw NonPhysicalState("central state is not physical", wc[0] > 0 ? 4 : 0);
  return cons_to_equilibrium(wc, l.gamma);
}

namespace detail {

// int_0^T exp(-t/tau) dt and int_0^T t exp(-t/tau) dt
inline std::pair<double, double> exp_integrals(double T, double tau) {
  if (tau <= 0.0) return {0.0, 0.0};
  const double x = T / tau;
  const double j0 = -tau * std::expm1(-x);
  double j1;
  if (x < 0.5) {
    // (1 - e^-x - x e^-x) = sum_k (-x)^k (k-1)/k!
    double term = x;  // (-x)^1 / 1!
    double sum = 0.0;
    for (int k = 2; k < 30; ++k) {
      term *= -x / k;
      sum += term * (k - 1);
    }
    j1 = tau * tau * sum;
  } else {
    j1 = tau * tau * (-std::expm1(-x)) - tau * T * std::exp(-x);
  }
  return {j0, j1};
}

struct SideData {
  Equilibrium eq;
  MomentTable t;
  std::array<MicroSlope, 3> a;
  MicroSlope A;
};

// sum_d <s_d u_d u^p psi> over the given range (p = 0 or 1 extra normal velocity)
inline Conserved directional(const std::array<MicroSlope, 3>& a, const MomentTable& t, Range r, int p) {
  return moment_slope_psi(a[0], t, r, 1 + p, 0, 0) + moment_slope_psi(a[1], t, r, p, 1, 0) +
         moment_slope_psi(a[2], t, r, p, 0, 1);
}

}  // namespace detail

/// Time-dependent gas-kinetic flux at one face point, in the face frame.
inline FluxSample gks_flux_point(const InterfaceInput& in) {
  using detail::SideData;
  SideData L, Rr;
  L.eq = cons_to_equilibrium(in.wl, in.gamma);
  Rr.eq = cons_to_equilibrium(in.wr, in.gamma);
  L.t = moment_table(L.eq);
  Rr.t = moment_table(Rr.eq);

  const Conserved wc = central_state(L.eq, L.t, Rr.eq, Rr.t);
  if (!is_physical(wc, in.gamma)) throw NonPhysicalState("central state is not physical", wc[0] > 0 ? 4 : 0);
  SideData C;
  C.eq = cons_to_equilibrium(wc, in.gamma);
  C.t = moment_table(C.eq);

  for (int d = 0; d < 3; ++d) {
    L.a[d] = solve_microslope(L.eq, in.gl.row(d).transpose());
    Rr.a[d] = solve_microslope(Rr.eq, in.gr.row(d).transpose());
    const Conserved dwc = L.eq.rho * moment_slope_psi(L.a[d], L.t, Range::Positive, 0, 0, 0) +
                          Rr.eq.rho * moment_slope_psi(Rr.a[d], Rr.t, Range::Negative, 0, 0, 0);
    C.a[d] = solve_microslope(C.eq, dwc);
  }
  C.A = solve_time_slope(C.eq, C.t, C.a[0], C.a[1], C.a[2]);

  const double pl = L.eq.pressure(), pr = Rr.eq.pressure(), pc = C.eq.pressure();
  const CollisionTimes ct = collision_time(pl, pr, pc, in.model, in.dt);
  const double tau = ct.tau, taun = ct.tau_num;
  const bool kinetic = taun > 0.0;
  if (kinetic) {
    L.A = solve_time_slope(L.eq, L.t, L.a[0], L.a[1], L.a[2]);
    Rr.A = solve_time_slope(Rr.eq, Rr.t, Rr.a[0], Rr.a[1], Rr.a[2]);
  }

  // central (equilibrium) moments
  const Conserved c_u = C.eq.rho * moment_psi(C.t, Range::Full, 1, 0, 0);
  const Conserved c_au = C.eq.rho * detail::directional(C.a, C.t, Range::Full, 1);
  const Conserved c_A = C.eq.rho * moment_slope_psi(C.A, C.t, Range::Full, 1, 0, 0);

  // kinetic (upwind) moments
  Conserved k_u = Conserved::Zero(), k_au = Conserved::Zero(), k_A = Conserved::Zero();
  if (kinetic) {
    k_u = L.eq.rho * moment_psi(L.t, Range::Positive, 1, 0, 0) + Rr.eq.rho * moment_psi(Rr.t, Range::Negative, 1, 0, 0);
    k_au = L.eq.rho * detail::directional(L.a, L.t, Range::Positive, 1) +
           Rr.eq.rho * detail::directional(Rr.a, Rr.t, Range::Negative, 1);
    k_A = L.eq.rho * moment_slope_psi(L.A, L.t, Range::Positive, 1, 0, 0) +
          Rr.eq.rho * moment_slope_psi(Rr.A, Rr.t, Range::Negative, 1, 0, 0);
  }

  auto integrate = [&](double T) {
    const auto [j0, j1] = detail::exp_integrals(T, taun);
    const double q1 = T - j0;
    const double q2 = j1 + tau * j0 - tau * T;
    const double q3 = 0.5 * T * T - tau * T + tau * j0;
    Conserved f = q1 * c_u + q2 * c_au + q3 * c_A;
    if (kinetic) f += j0 * k_u - (tau * j0 + j1) * k_au - tau * j0 * k_A;
    return f;
  };

  FluxSample out;
  out.full = integrate(in.dt);
  out.half = integrate(0.5 * in.dt);

  // state at the point from the psi-moments of f
  const Conserved c_0 = wc;
  const Conserved c_a0 = C.eq.rho * detail::directional(C.a, C.t, Range::Full, 0);
  const Conserved c_A0 = C.eq.rho * moment_slope_psi(C.A, C.t, Range::Full, 0, 0, 0);
  Conserved k_0 = Conserved::Zero(), k_a0 = Conserved::Zero(), k_A0 = Conserved::Zero();
  if (kinetic) {
    k_0 = wc;
    k_a0 = L.eq.rho * detail::directional(L.a, L.t, Range::Positive, 0) +
           Rr.eq.rho * detail::directional(Rr.a, Rr.t, Range::Negative, 0);
    k_A0 = L.eq.rho * moment_slope_psi(L.A, L.t, Range::Positive, 0, 0, 0) +
           Rr.eq.rho * moment_slope_psi(Rr.A, Rr.t, Range::Negative, 0, 0, 0);
  }
  auto state_at = [&](double t) {
    if (!kinetic) return Conserved(c_0 + t * c_A0);
    const double e = std::exp(-t / taun);
    const double c1 = 1.0 - e, c2 = (t + tau) * e - tau, c3 = t - tau + tau * e;
    return Conserved(c1 * c_0 + c2 * c_a0 + c3 * c_A0 + e * (k_0 - (tau + t) * k_a0 - tau * k_A0));
  };
  out.point = state_at(in.dt);
  out.point0 = state_at(0.0);
  out.point_half = state_at(0.5 * in.dt);
  out.point_ok = is_physical(out.point, in.gamma) && is_physical(out.point0, in.gamma);
  return out;
}

/// Fits F(t) = F0 + t F_t to the two time integrals.
inline std::pair<Conserved, Conserved> flux_linear_fit(const Conserved& full, const Conserved& half, double dt) {
  const Conserved ft = 4.0 * (full - 2.0 * half) / (dt * dt);
  const Conserved f0 = (4.0 * half - full) / dt;
  return {f0, ft};
}

/// Euler flux of a state along the x-axis of its frame.
inline Conserved euler_flux(const Conserved& w, double gamma) {
  const double p = pressure(w, gamma);
  const double u = w[1] / w[0];
  Conserved f;
  f << w[1], w[1] * u + p, w[2] * u, w[3] * u, (w[4] + p) * u;
  return f;
}

}  // namespace cgks
