#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "cgks/evolution/solver.hpp"

namespace cgks {

/// Force of the fluid on a boundary patch from the last stage-1 face integrals.
inline Vec3 patch_force(const Mesh& mesh, const Solver& solver, int patch, double dt) {
  Vec3 f = Vec3::Zero();
  for (Index fi = 0; fi < mesh.num_faces(); ++fi)
    if (mesh.faces[fi].is_boundary() && mesh.faces[fi].patch == patch)
      f += solver.face_integrals()[fi].segment<3>(1);
  return f / dt;
}

/// Recirculation length behind a body centred on the z axis with flow along +x:
/// distance from the rear point x = radius to where u_x on the symmetry line
/// turns positive. Samples the cell rows closest to the +x ray.
inline std::optional<double> wake_length(const Mesh& mesh, const std::vector<Conserved>& mean, double radius) {
  struct Sample {
    double r, ux;
  };
  double theta_min = kPi;
  for (const Cell& c : mesh.cells)
    if (c.centroid.x() > 0) theta_min = std::min(theta_min, std::abs(std::atan2(c.centroid.y(), c.centroid.x())));
  std::vector<Sample> s;
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    const Vec3& x = mesh.cells[i].centroid;
    if (x.x() > 0 && std::abs(std::atan2(x.y(), x.x())) < 1.5 * theta_min + 1e-12)
      s.push_back({std::hypot(x.x(), x.y()), velocity(mean[i]).x()});
  }
  std::sort(s.begin(), s.end(), [](const Sample& a, const Sample& b) { return a.r < b.r; });
  // average rows at equal radius (symmetric pair of cells)
  std::vector<Sample> line;
  for (const Sample& v : s) {
    if (!line.empty() && std::abs(line.back().r - v.r) < 1e-9 * v.r) {
      line.back().ux = 0.5 * (line.back().ux + v.ux);
      continue;
    }
    line.push_back(v);
  }
  if (line.empty() || line.front().ux >= 0.0) return std::nullopt;
  for (std::size_t i = 1; i < line.size(); ++i)
    if (line[i].ux >= 0.0) {
      const Sample& a = line[i - 1];
      const Sample& b = line[i];
      const double xr = a.r + (b.r - a.r) * (-a.ux) / (b.ux - a.ux);
      return xr - radius;
    }
  return std::nullopt;
}

/// Separation angle in degrees from the rear point, upper half of a cylinder
/// in +x flow: where the wall-adjacent tangential velocity reverses.
inline std::optional<double> separation_angle(const Mesh& mesh, const std::vector<Conserved>& mean, int wall_patch) {
  struct Sample {
    double theta, ut;
  };
  std::vector<Sample> s;
  for (const Face& f : mesh.faces) {
    if (!f.is_boundary() || f.patch != wall_patch) continue;
    const Vec3& x = mesh.cells[f.owner].centroid;
    const double th = std::atan2(x.y(), x.x());
    if (th <= 0.0) continue;
    const Vec3 u = velocity(mean[f.owner]);
    // counter-clockwise tangential component
    s.push_back({th, -u.x() * std::sin(th) + u.y() * std::cos(th)});
  }
  std::sort(s.begin(), s.end(), [](const Sample& a, const Sample& b) { return a.theta > b.theta; });
  // attached flow from the front runs clockwise (ut < 0); reversal marks separation
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i - 1].ut < 0.0 && s[i].ut >= 0.0) {
      const Sample& a = s[i - 1];
      const Sample& b = s[i];
      const double th = a.theta + (b.theta - a.theta) * (-a.ut) / (b.ut - a.ut);
      return th * 180.0 / kPi;
    }
  return std::nullopt;
}

}  // namespace cgks
