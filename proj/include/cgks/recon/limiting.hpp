#pragma once

#include <vector>

#include "cgks/recon/poly.hpp"

namespace cgks {

/// Green-Gauss gradient scaled by the DF factor. Boundary faces take the
/// ghost mean when one is supplied (indexed by face), else the cell mean.
inline ConservedGrad green_gauss_gradient(const Mesh& mesh, Index c, const std::vector<Conserved>& mean,
                                          const std::vector<Conserved>& ghost_mean, double alpha) {
  const Cell& cell = mesh.cells[c];
  const Conserved& w0 = mean[c];
  ConservedGrad g = ConservedGrad::Zero();
  for (int i = 0; i < cell.num_faces; ++i) {
    const Index fi = cell.faces[i];
    const Face& f = mesh.faces[fi];
    const Neighbor nb = mesh.neighbor(c, i);
    const Conserved& wm = nb.valid() ? mean[nb.cell] : (ghost_mean.empty() ? w0 : ghost_mean[fi]);
    const Vec3 sn = (cell.face_sign[i] * f.area) * f.normal;
    g.noalias() += sn * (0.5 * (wm + w0)).transpose();
  }
  return (alpha / cell.volume) * g;
}

/// Per-variable smoothness indicator with exact integrals from the cell moments.
inline Conserved smoothness_indicator(const QuadPoly& p, const Cell& cell) {
  const auto& m = cell.moments;
  Mat3 M;
  M << m[3], m[6], m[8], m[6], m[4], m[7], m[8], m[7], m[5];
  const Vec3 mu(m[0], m[1], m[2]);
  const double vol = cell.volume;
  const double s1 = vol * std::cbrt(1.0 / vol);  // Omega^{-1/3} * Omega
  const double s2 = vol * std::cbrt(vol);        // Omega^{1/3} * Omega
  Conserved beta;
  for (int k = 0; k < kNumVars; ++k) {
    const auto a = p.a.col(k);
    const Vec3 cx(2 * a[4], a[7], a[9]), cy(a[7], 2 * a[5], a[8]), cz(a[9], a[8], 2 * a[6]);
    double first = 0.0;
    const std::array<std::pair<double, const Vec3*>, 3> lin{{{a[1], &cx}, {a[2], &cy}, {a[3], &cz}}};
    for (const auto& [g, c] : lin) first += g * g + 2.0 * g * c->dot(mu) + c->dot(M * *c);
    const double second = 4 * a[4] * a[4] + 4 * a[5] * a[5] + 4 * a[6] * a[6] + a[7] * a[7] + a[8] * a[8] + a[9] * a[9];
    beta[k] = s1 * first + s2 * second;
  }
  return beta;
}

inline constexpr double kWenoEps = 1e-5;

/// Two-polynomial multi-resolution combination with gamma1 = gamma2 = 1/2.
/// R = w2 (2 p2 - p1) + w1 p1 per variable. Optionally reports w2.
inline QuadPoly weno_combine(const QuadPoly& p2, const QuadPoly& p1, const Conserved& beta2, const Conserved& beta1,
                             const Conserved& mean0, Conserved* omega2 = nullptr) {
  QuadPoly r;
  for (int k = 0; k < kNumVars; ++k) {
    const double norm = mean0[k] * mean0[k] + beta1[k] + 1e-40;
    const double b1 = beta1[k] / norm, b2 = beta2[k] / norm;
    const double sigma = std::abs(b2 - b1);
    const double t1 = sigma / (kWenoEps + b1), t2 = sigma / (kWenoEps + b2);
    const double w1 = 0.5 * (1.0 + t1 * t1), w2 = 0.5 * (1.0 + t2 * t2);
    const double o2 = w2 / (w1 + w2), o1 = 1.0 - o2;
    r.a.col(k) = 2.0 * o2 * p2.a.col(k) + (o1 - o2) * p1.a.col(k);
    r.a(0, k) = mean0[k];
    if (omega2) (*omega2)[k] = o2;
  }
  return r;
}

/// DF factor of one face point from its left/right states.
inline double df_factor(const Conserved& wl, const Conserved& wr, const Vec3& n, double gamma) {
  const double pl = pressure(wl, gamma), pr = pressure(wr, gamma);
  const double cl = sound_speed(wl, gamma), cr = sound_speed(wr, gamma);
  const Vec3 ul = velocity(wl), ur = velocity(wr);
  const double unl = ul.dot(n), unr = ur.dot(n);
  const double utl = (ul - unl * n).norm(), utr = (ur - unr * n).norm();
  const double dp = std::abs(pl - pr);
  const double dn = unl / cl - unr / cr, dt = utl / cl - utr / cr;
  const double D = dp / pl + dp / pr + dn * dn + dt * dt;
  return 1.0 / (1.0 + D * D);
}

/// Cell DF factor: product over every point of every face.
template <typename Range>
double df_cell(const Range& point_alphas) {
  double a = 1.0;
  for (double v : point_alphas) a *= v;
  return a;
}

}  // namespace cgks
