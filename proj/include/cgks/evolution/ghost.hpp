#pragma once

#include <cmath>

#include "cgks/mesh/mesh.hpp"

namespace cgks {

struct GhostState {
  Conserved w;
  ConservedGrad g;
};

namespace detail {

// Gradient of x -> V w(Mx) for the reflection M, where V acts on momentum.
inline ConservedGrad mirror_gradient(const ConservedGrad& g, const Mat3& M, const Mat3& V) {
  ConservedGrad out = M * g;
  out.middleCols<3>(1) = out.middleCols<3>(1) * V.transpose();
  return out;
}

inline GhostState farfield_riemann(const Conserved& wi, const ConservedGrad& gi, const Vec3& n,
                                   const Conserved& wf, double gamma) {
  const double gm1 = gamma - 1.0;
  const Vec3 ui = velocity(wi), uf = velocity(wf);
  const double pi = pressure(wi, gamma), pf = pressure(wf, gamma);
  const double ci = std::sqrt(gamma * pi / wi[0]), cf = std::sqrt(gamma * pf / wf[0]);
  const double vni = ui.dot(n), vnf = uf.dot(n);

  GhostState out;
  out.g = gi;
  if (vni <= -ci) {  // supersonic inflow
    out.w = wf;
    out.g.setZero();
    return out;
  }
  if (vni >= ci) {  // supersonic outflow
    out.w = wi;
    return out;
  }
  const double rp = vni + 2.0 * ci / gm1;
  const double rm = vnf - 2.0 * cf / gm1;
  const double vn = 0.5 * (rp + rm);
  const double c = 0.25 * gm1 * (rp - rm);
  const bool outflow = vn > 0.0;
  const Vec3 ut = outflow ? Vec3(ui - vni * n) : Vec3(uf - vnf * n);
  const double entropy = outflow ? pi / std::pow(wi[0], gamma) : pf / std::pow(wf[0], gamma);
  const double rho = std::pow(c * c / (gamma * entropy), 1.0 / gm1);
  const double p = rho * c * c / gamma;
  out.w = primitive_to_conserved(rho, ut + vn * n, p, gamma);
  return out;
}

}  // namespace detail

/// Exterior state across a boundary face with outward unit normal n.
inline GhostState ghost_state(PatchKind kind, const Conserved& w, const ConservedGrad& g, const Vec3& n,
                              const Conserved& freestream, double gamma) {
  const Mat3 M = Mat3::Identity() - 2.0 * n * n.transpose();
  GhostState out;
  switch (kind) {
    case PatchKind::SlipWall: {
      out.w = w;
      out.w.segment<3>(1) = M * w.segment<3>(1);
      out.g = detail::mirror_gradient(g, M, M);
      return out;
    }
    case PatchKind::NoslipAdiabaticWall: {
      out.w = w;
      out.w.segment<3>(1) = -w.segment<3>(1);
      out.g = detail::mirror_gradient(g, M, -Mat3::Identity());
      return out;
    }
    case PatchKind::FarfieldRiemann:
      return detail::farfield_riemann(w, g, n, freestream, gamma);
    default:
      throw MeshError(std::string("no ghost state for boundary kind '") + to_string(kind) + "'");
  }
}

}  // namespace cgks
