#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cgks/mesh/mesh.hpp"

namespace cgks {

/// Merges the boundary faces of `lower_patch` with their translated images on
/// `upper_patch` along `axis`. Each pair becomes one interior face owned by the
/// lower-plane cell; the upper-plane face is removed. `tol` is an absolute
/// distance for the centroid match.
inline void pair_periodic(Mesh& mesh, int lower_patch, int upper_patch, int axis, double tol) {
  if (axis < 0 || axis > 2) throw MeshError("periodic axis must be 0, 1 or 2");
  std::vector<Index> lower, upper;
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.faces[f];
    if (!face.is_boundary()) continue;
    if (face.patch == lower_patch) lower.push_back(f);
    if (face.patch == upper_patch) upper.push_back(f);
  }
  if (lower.empty() && upper.empty()) return;

  double lo_plane = 0.0, hi_plane = 0.0;
  for (Index f : lower) lo_plane += mesh.faces[f].centroid[axis];
  for (Index f : upper) hi_plane += mesh.faces[f].centroid[axis];
  if (!lower.empty()) lo_plane /= lower.size();
  if (!upper.empty()) hi_plane /= upper.size();
  const double length = hi_plane - lo_plane;
  Vec3 shift = Vec3::Zero();
  shift[axis] = length;

  const int t1 = (axis + 1) % 3;
  std::sort(upper.begin(), upper.end(),
            [&](Index a, Index b) { return mesh.faces[a].centroid[t1] < mesh.faces[b].centroid[t1]; });
  std::vector<char> taken(upper.size(), 0);
  std::vector<char> removed(mesh.faces.size(), 0);

  for (Index fl : lower) {
    const Vec3 target = mesh.faces[fl].centroid + shift;
    auto first = std::lower_bound(upper.begin(), upper.end(), target[t1] - tol,
                                  [&](Index a, double v) { return mesh.faces[a].centroid[t1] < v; });
    Index match = -1;
    std::size_t match_pos = 0;
    for (auto it = first; it != upper.end() && mesh.faces[*it].centroid[t1] <= target[t1] + tol; ++it) {
      const std::size_t pos = static_cast<std::size_t>(it - upper.begin());
      if (taken[pos]) continue;
      if ((mesh.faces[*it].centroid - target).norm() <= tol) {
        match = *it;
        match_pos = pos;
        break;
      }
    }
    if (match < 0)
      throw MeshError("unmatched periodic face at " + detail::describe(mesh.faces[fl].centroid));
    taken[match_pos] = 1;

    Face& a = mesh.faces[fl];
    const Face& b = mesh.faces[match];
    if (std::abs(a.area - b.area) > 1e-12 * a.area || (a.normal + b.normal).norm() > 1e-9)
      throw MeshError("periodic faces differ in area or orientation at " + detail::describe(a.centroid));
    const Index upper_cell = b.owner;
    a.neighbor = upper_cell;
    a.neighbor_offset = -shift;
    Cell& uc = mesh.cells[upper_cell];
    for (int i = 0; i < uc.num_faces; ++i) {
      if (uc.faces[i] == match) {
        uc.faces[i] = fl;
        uc.face_sign[i] = -1;
      }
    }
    removed[match] = 1;
    mesh.periodic_pairs.push_back({fl, a.neighbor_offset, b.area, b.normal});
  }
  for (std::size_t i = 0; i < upper.size(); ++i)
    if (!taken[i])
      throw MeshError("unmatched periodic face at " + detail::describe(mesh.faces[upper[i]].centroid));

  // compact the face array
  std::vector<Index> remap(mesh.faces.size(), -1);
  Index next = 0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (removed[f]) continue;
    remap[f] = next;
    if (static_cast<Index>(f) != next) mesh.faces[next] = mesh.faces[f];
    ++next;
  }
  mesh.faces.resize(next);
  for (Cell& c : mesh.cells)
    for (int i = 0; i < c.num_faces; ++i) c.faces[i] = remap[c.faces[i]];
  for (PeriodicPair& p : mesh.periodic_pairs) p.face = remap[p.face];
  mesh.patches[lower_patch].kind = PatchKind::Periodic;
  mesh.patches[upper_patch].kind = PatchKind::Periodic;
}

/// Pairs the boundary faces lying on the two bounding-box planes normal to `axis`.
inline void pair_periodic(Mesh& mesh, int axis, double tol) {
  const double lo = mesh.bbox_lo[axis], hi = mesh.bbox_hi[axis];
  int lower_patch = -1, upper_patch = -1;
  for (const Face& f : mesh.faces) {
    if (!f.is_boundary()) continue;
    if (std::abs(f.centroid[axis] - lo) <= tol) {
      if (lower_patch >= 0 && lower_patch != f.patch) throw MeshError("lower periodic plane spans several patches");
      lower_patch = f.patch;
    } else if (std::abs(f.centroid[axis] - hi) <= tol) {
      if (upper_patch >= 0 && upper_patch != f.patch) throw MeshError("upper periodic plane spans several patches");
      upper_patch = f.patch;
    }
  }
  if (lower_patch < 0 || upper_patch < 0) throw MeshError("no boundary faces on the periodic planes");
  pair_periodic(mesh, lower_patch, upper_patch, axis, tol);
  mesh.source.periodic.push_back({lower_patch, upper_patch, axis});
}

/// Geometry plus every periodic link recorded in the raw mesh.
inline Mesh assemble_mesh(const RawMesh& raw, double tol = 1e-9) {
  Mesh mesh = build_mesh(raw);
  const double scale = std::max(1.0, (mesh.bbox_hi - mesh.bbox_lo).maxCoeff());
  for (const auto& link : raw.periodic) pair_periodic(mesh, link.lower_patch, link.upper_patch, link.axis, tol * scale);
  return mesh;
}

}  // namespace cgks
