#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cgks/core/types.hpp"
#include "cgks/mesh/quadrature.hpp"

namespace cgks {

enum class CellKind : std::uint8_t { Tetrahedron, Pyramid, Prism, Hexahedron };

inline int node_count(CellKind k) {
  switch (k) {
    case CellKind::Tetrahedron: return 4;
    case CellKind::Pyramid: return 5;
    case CellKind::Prism: return 6;
    case CellKind::Hexahedron: return 8;
  }
  return 0;
}

inline int face_count(CellKind k) {
  switch (k) {
    case CellKind::Tetrahedron: return 4;
    case CellKind::Pyramid: return 5;
    case CellKind::Prism: return 5;
    case CellKind::Hexahedron: return 6;
  }
  return 0;
}

inline const char* to_string(CellKind k) {
  switch (k) {
    case CellKind::Tetrahedron: return "tet";
    case CellKind::Pyramid: return "pyramid";
    case CellKind::Prism: return "prism";
    case CellKind::Hexahedron: return "hex";
  }
  return "?";
}

enum class PatchKind : std::uint8_t { Unset, Periodic, FarfieldRiemann, SlipWall, NoslipAdiabaticWall };

inline const char* to_string(PatchKind k) {
  switch (k) {
    case PatchKind::Unset: return "unset";
    case PatchKind::Periodic: return "periodic";
    case PatchKind::FarfieldRiemann: return "farfield";
    case PatchKind::SlipWall: return "slip_wall";
    case PatchKind::NoslipAdiabaticWall: return "noslip_wall";
  }
  return "?";
}

inline PatchKind patch_kind_from_string(const std::string& s) {
  if (s == "unset") return PatchKind::Unset;
  if (s == "periodic") return PatchKind::Periodic;
  if (s == "farfield" || s == "farfield_riemann") return PatchKind::FarfieldRiemann;
  if (s == "slip_wall" || s == "slip") return PatchKind::SlipWall;
  if (s == "noslip_wall" || s == "noslip_adiabatic_wall" || s == "noslip") return PatchKind::NoslipAdiabaticWall;
  throw MeshError("unknown patch kind '" + s + "'");
}

struct BoundaryPatch {
  std::string name;
  PatchKind kind = PatchKind::Unset;
  Conserved freestream = Conserved::Zero();  // only used by far-field patches
};

/// Connectivity as read from a file or produced by a generator, before any
/// geometry is computed. Node ordering follows the usual Gmsh conventions.
struct RawMesh {
  struct Element {
    CellKind kind;
    std::array<Index, 8> nodes{};
  };
  struct BoundaryFace {
    std::array<Index, 4> nodes{};
    int num_nodes = 0;
    int patch = -1;
  };
  struct PeriodicLink {
    int lower_patch;
    int upper_patch;
    int axis;
  };

  std::vector<Vec3> nodes;
  std::vector<Element> cells;
  std::vector<BoundaryFace> boundary_faces;
  std::vector<BoundaryPatch> patches;
  std::vector<PeriodicLink> periodic;

  int find_patch(const std::string& name) const {
    for (std::size_t i = 0; i < patches.size(); ++i)
      if (patches[i].name == name) return static_cast<int>(i);
    return -1;
  }
};

struct Face {
  std::array<Index, 4> nodes{};
  int num_nodes = 0;
  Index owner = -1;
  Index neighbor = -1;  // -1 on a boundary
  int patch = -1;       // boundary patch, or the lower patch of a periodic link
  double area = 0.0;
  Vec3 normal = Vec3::Zero();  // unit, outward from the owner
  Vec3 centroid = Vec3::Zero();
  std::array<Vec3, 4> points{};
  std::array<double, 4> weights{};
  std::array<Vec3, 4> dS{};  // per-point vector area along the owner normal; sums to area * normal
  int num_points = 0;
  /// Translation that places the neighbor cell next to the owner (non-zero
  /// only across periodic links).
  Vec3 neighbor_offset = Vec3::Zero();

  bool is_boundary() const { return neighbor < 0; }
};

/// Integrals (1/|cell|) * int (x-x0)^k dV for |k| = 1, 2 in the order
/// x, y, z, x^2, y^2, z^2, xy, yz, xz.
using BasisMoments = std::array<double, 9>;

struct Cell {
  CellKind kind = CellKind::Hexahedron;
  std::array<Index, 8> nodes{};
  std::array<Index, 6> faces{};
  std::array<std::int8_t, 6> face_sign{};  // +1 when this cell owns the face
  int num_faces = 0;
  double volume = 0.0;
  Vec3 centroid = Vec3::Zero();
  BasisMoments moments{};
  double surface_area = 0.0;
};

/// A neighbor seen from a cell: id and the translation applied to its coordinates.
struct Neighbor {
  Index cell = -1;
  Vec3 offset = Vec3::Zero();
  bool valid() const { return cell >= 0; }
};

struct PeriodicPair {
  Index face;          // merged interior face (lies on the lower plane)
  Vec3 offset;         // neighbor_offset of that face
  double upper_area;   // area of the removed upper-plane face
  Vec3 upper_normal;   // its outward normal
};

struct Mesh {
  std::vector<Vec3> nodes;
  std::vector<Face> faces;
  std::vector<Cell> cells;
  std::vector<BoundaryPatch> patches;
  std::vector<PeriodicPair> periodic_pairs;
  Vec3 bbox_lo = Vec3::Zero();
  Vec3 bbox_hi = Vec3::Zero();
  RawMesh source;

  Index num_cells() const { return static_cast<Index>(cells.size()); }
  Index num_faces() const { return static_cast<Index>(faces.size()); }

  Neighbor neighbor(Index c, int local_face) const {
    const Cell& cell = cells[c];
    const Face& f = faces[cell.faces[local_face]];
    if (f.is_boundary()) return {};
    if (cell.face_sign[local_face] > 0) return {f.neighbor, f.neighbor_offset};
    return {f.owner, -f.neighbor_offset};
  }

  /// True when every face of the cell has a neighbor cell.
  bool has_full_stencil(Index c) const {
    const Cell& cell = cells[c];
    for (int i = 0; i < cell.num_faces; ++i)
      if (faces[cell.faces[i]].is_boundary()) return false;
    return true;
  }
};

namespace detail {

// Outward-oriented local faces for positively oriented elements.
inline const std::vector<std::vector<int>>& face_template(CellKind k) {
  static const std::vector<std::vector<int>> tet{{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  static const std::vector<std::vector<int>> pyr{{0, 3, 2, 1}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  static const std::vector<std::vector<int>> pri{{0, 2, 1}, {3, 4, 5}, {0, 1, 4, 3}, {1, 2, 5, 4}, {2, 0, 3, 5}};
  static const std::vector<std::vector<int>> hex{{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                                 {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  switch (k) {
    case CellKind::Tetrahedron: return tet;
    case CellKind::Pyramid: return pyr;
    case CellKind::Prism: return pri;
    case CellKind::Hexahedron: return hex;
  }
  return hex;
}

using FaceKey = std::array<Index, 4>;

inline FaceKey face_key(const Index* nodes, int n) {
  FaceKey key{-1, -1, -1, -1};
  std::copy(nodes, nodes + n, key.begin());
  std::sort(key.begin(), key.begin() + n);
  return key;
}

// Same cyclic orientation (possibly rotated) of two node loops.
inline bool same_orientation(const Index* a, const Index* b, int n) {
  int shift = -1;
  for (int i = 0; i < n; ++i)
    if (b[i] == a[0]) shift = i;
  if (shift < 0) return false;
  return b[(shift + 1) % n] == a[1];
}

inline std::string describe(const Vec3& v) {
  std::ostringstream os;
  os << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
  return os.str();
}

// Triangles of a face in its stored node order. Quads are fanned around their
// vertex mean, which encloses the same volume as the bilinear surface.
template <typename F>
void for_each_face_triangle(const Face& f, const std::vector<Vec3>& nodes, bool reversed, const Vec3& shift, F&& fn) {
  auto emit = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
    if (reversed)
      fn(a, c, b);
    else
      fn(a, b, c);
  };
  if (f.num_nodes == 3) {
    emit(nodes[f.nodes[0]] + shift, nodes[f.nodes[1]] + shift, nodes[f.nodes[2]] + shift);
    return;
  }
  std::array<Vec3, 4> q;
  Vec3 m = Vec3::Zero();
  for (int i = 0; i < 4; ++i) m += (q[i] = nodes[f.nodes[i]] + shift);
  m *= 0.25;
  for (int i = 0; i < 4; ++i) emit(m, q[i], q[(i + 1) % 4]);
}

inline void compute_face_geometry(Face& f, const std::vector<Vec3>& nodes) {
  if (f.num_nodes == 3) {
    const Vec3& a = nodes[f.nodes[0]];
    const Vec3& b = nodes[f.nodes[1]];
    const Vec3& c = nodes[f.nodes[2]];
    const Vec3 s = 0.5 * (b - a).cross(c - a);
    f.area = s.norm();
    f.normal = s / f.area;
    f.centroid = (a + b + c) / 3.0;
    f.num_points = 3;
    for (int k = 0; k < 3; ++k) {
      const auto& l = quadrature::kTrianglePoints[k];
      f.points[k] = l[0] * a + l[1] * b + l[2] * c;
      f.weights[k] = 1.0 / 3.0;
      f.dS[k] = s / 3.0;
    }
  } else {
    const Vec3& a = nodes[f.nodes[0]];
    const Vec3& b = nodes[f.nodes[1]];
    const Vec3& c = nodes[f.nodes[2]];
    const Vec3& d = nodes[f.nodes[3]];
    // vector area of any quad, planar or not
    const Vec3 s = 0.5 * (c - a).cross(d - b);
    f.area = s.norm();
    f.normal = s / f.area;
    f.num_points = 4;
    double jsum = 0.0;
    for (int k = 0; k < 4; ++k) {
      const auto& q = quadrature::kQuadPoints[k];
      f.points[k] = quadrature::bilinear(a, b, c, d, q[0], q[1]);
      f.dS[k] = quadrature::bilinear_area_vector(a, b, c, d, q[0], q[1]);
      f.weights[k] = f.dS[k].norm();
      jsum += f.weights[k];
    }
    f.centroid = Vec3::Zero();
    for (int k = 0; k < 4; ++k) {
      f.weights[k] /= jsum;
      f.centroid += f.weights[k] * f.points[k];
    }
  }
  if (!(f.area > 0.0)) throw MeshError("degenerate face with zero area at " + describe(f.centroid));
}

}  // namespace detail

/// Calls fn(p0, p1, p2, p3) for each tetrahedron of the decomposition of a cell
/// into tets from its vertex average to its (triangulated) faces. All tets are
/// positively oriented for valid star-shaped cells.
template <typename F>
void for_each_cell_tet(const Mesh& mesh, Index c, F&& fn) {
  const Cell& cell = mesh.cells[c];
  Vec3 apex = Vec3::Zero();
  const int nn = node_count(cell.kind);
  for (int i = 0; i < nn; ++i) apex += mesh.nodes[cell.nodes[i]];
  apex /= nn;
  for (int i = 0; i < cell.num_faces; ++i) {
    const Face& f = mesh.faces[cell.faces[i]];
    // a periodic face is stored on the owner's plane; the neighbor sees it shifted
    const Vec3 shift = cell.face_sign[i] < 0 ? Vec3(-f.neighbor_offset) : Vec3::Zero();
    detail::for_each_face_triangle(f, mesh.nodes, cell.face_sign[i] < 0, shift,
                                   [&](const Vec3& a, const Vec3& b, const Vec3& cc) { fn(apex, a, b, cc); });
  }
}

/// Exact basis moments of a cell about its volume centroid.
inline BasisMoments cell_basis_moments(const Mesh& mesh, Index c) {
  const Cell& cell = mesh.cells[c];
  BasisMoments m{};
  for_each_cell_tet(mesh, c, [&](const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
    if (!(quadrature::tet_volume(p0, p1, p2, p3) > 0.0))
      throw MeshError("degenerate tetrahedron in decomposition of cell " + std::to_string(c));
    const auto t = quadrature::tet_monomial_integrals(p0, p1, p2, p3, cell.centroid);
    for (int k = 0; k < 9; ++k) m[k] += t[k];
  });
  for (double& v : m) v /= cell.volume;
  return m;
}

/// Means over a neighbor cell (translated by `offset`) of the nine
/// zero-mean basis functions of the target cell. Uses the neighbor's stored
/// moments (parallel-axis shift), so nothing is persisted per stencil.
inline std::array<double, 9> neighbor_basis_means(const Mesh& mesh, Index target, const Neighbor& nb) {
  const Cell& c0 = mesh.cells[target];
  const Cell& cm = mesh.cells[nb.cell];
  const Vec3 d = cm.centroid + nb.offset - c0.centroid;
  const auto& m = cm.moments;
  const auto& m0 = c0.moments;
  return {d.x() + m[0],
          d.y() + m[1],
          d.z() + m[2],
          d.x() * d.x() + 2 * d.x() * m[0] + m[3] - m0[3],
          d.y() * d.y() + 2 * d.y() * m[1] + m[4] - m0[4],
          d.z() * d.z() + 2 * d.z() * m[2] + m[5] - m0[5],
          d.x() * d.y() + d.x() * m[1] + d.y() * m[0] + m[6] - m0[6],
          d.y() * d.z() + d.y() * m[2] + d.z() * m[1] + m[7] - m0[7],
          d.x() * d.z() + d.x() * m[2] + d.z() * m[0] + m[8] - m0[8]};
}

/// The same as integrals (means times the neighbor volume).
inline std::array<double, 9> neighbor_basis_integrals(const Mesh& mesh, Index target, const Neighbor& nb) {
  auto out = neighbor_basis_means(mesh, target, nb);
  for (double& x : out) x *= mesh.cells[nb.cell].volume;
  return out;
}

/// Same integrals evaluated directly by tetrahedral decomposition of the
/// neighbor; the cross-check for neighbor_basis_integrals.
inline std::array<double, 9> neighbor_basis_integrals_direct(const Mesh& mesh, Index target, const Neighbor& nb) {
  const Cell& c0 = mesh.cells[target];
  std::array<double, 9> out{};
  const Vec3 origin = c0.centroid - nb.offset;
  for_each_cell_tet(mesh, nb.cell, [&](const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
    const auto t = quadrature::tet_monomial_integrals(p0, p1, p2, p3, origin);
    const double vol = quadrature::tet_volume(p0, p1, p2, p3);
    for (int k = 0; k < 3; ++k) out[k] += t[k];
    for (int k = 3; k < 9; ++k) out[k] += t[k] - vol * c0.moments[k];
  });
  return out;
}

/// Integrates fn(x) over a cell with the collapsed Gauss rule on every
/// decomposition tet. Returns the integral (not the mean).
template <typename Result, typename F>
Result integrate_over_cell(const Mesh& mesh, Index c, const std::vector<quadrature::TetPoint>& rule, F&& fn,
                           Result zero) {
  Result acc = zero;
  for_each_cell_tet(mesh, c, [&](const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
    const double vol = quadrature::tet_volume(p0, p1, p2, p3);
    for (const auto& q : rule) {
      const Vec3 x = q.bary[0] * p0 + q.bary[1] * p1 + q.bary[2] * p2 + q.bary[3] * p3;
      acc += (vol * q.weight) * fn(x);
    }
  });
  return acc;
}

/// Builds faces, adjacency and all geometric fields from raw connectivity.
inline Mesh build_mesh(const RawMesh& raw) {
  Mesh mesh;
  mesh.nodes = raw.nodes;
  mesh.patches = raw.patches;
  mesh.source = raw;
  for (const Vec3& p : raw.nodes)
    if (!p.allFinite()) throw MeshError("non-finite node coordinate");

  const Index num_nodes = static_cast<Index>(raw.nodes.size());
  std::map<detail::FaceKey, Index> lookup;

  mesh.cells.resize(raw.cells.size());
  for (std::size_t ci = 0; ci < raw.cells.size(); ++ci) {
    const auto& el = raw.cells[ci];
    Cell& cell = mesh.cells[ci];
    cell.kind = el.kind;
    cell.nodes = el.nodes;
    const int nn = node_count(el.kind);
    for (int i = 0; i < nn; ++i)
      if (el.nodes[i] < 0 || el.nodes[i] >= num_nodes)
        throw MeshError("cell " + std::to_string(ci) + " references missing node " + std::to_string(el.nodes[i]));
    const auto& tmpl = detail::face_template(el.kind);
    cell.num_faces = static_cast<int>(tmpl.size());
    for (int lf = 0; lf < cell.num_faces; ++lf) {
      std::array<Index, 4> fn{-1, -1, -1, -1};
      const int n = static_cast<int>(tmpl[lf].size());
      for (int i = 0; i < n; ++i) fn[i] = el.nodes[tmpl[lf][i]];
      const auto key = detail::face_key(fn.data(), n);
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        Face f;
        f.nodes = fn;
        f.num_nodes = n;
        f.owner = static_cast<Index>(ci);
        const Index id = static_cast<Index>(mesh.faces.size());
        mesh.faces.push_back(f);
        lookup.emplace(key, id);
        cell.faces[lf] = id;
        cell.face_sign[lf] = 1;
      } else {
        Face& f = mesh.faces[it->second];
        if (f.neighbor >= 0)
          throw MeshError("face shared by more than two cells (cell " + std::to_string(ci) + ")");
        if (detail::same_orientation(f.nodes.data(), fn.data(), n))
          throw MeshError("inverted face orientation between cells " + std::to_string(f.owner) + " and " +
                          std::to_string(ci));
        f.neighbor = static_cast<Index>(ci);
        cell.faces[lf] = it->second;
        cell.face_sign[lf] = -1;
      }
    }
  }

  for (const auto& bf : raw.boundary_faces) {
    const auto key = detail::face_key(bf.nodes.data(), bf.num_nodes);
    auto it = lookup.find(key);
    if (it == lookup.end()) continue;  // surface element not on any cell face
    Face& f = mesh.faces[it->second];
    if (f.neighbor < 0) f.patch = bf.patch;
  }
  int default_patch = -1;
  for (Face& f : mesh.faces) {
    if (f.neighbor >= 0 || f.patch >= 0) continue;
    if (default_patch < 0) {
      default_patch = static_cast<int>(mesh.patches.size());
      mesh.patches.push_back({"default", PatchKind::Unset, Conserved::Zero()});
    }
    f.patch = default_patch;
  }

  for (Face& f : mesh.faces) detail::compute_face_geometry(f, mesh.nodes);

  for (std::size_t ci = 0; ci < mesh.cells.size(); ++ci) {
    Cell& cell = mesh.cells[ci];
    double vol = 0.0;
    Vec3 moment = Vec3::Zero();
    for_each_cell_tet(mesh, static_cast<Index>(ci),
                      [&](const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
                        const double v = quadrature::tet_volume(p0, p1, p2, p3);
                        vol += v;
                        moment += v * (p0 + p1 + p2 + p3) / 4.0;
                      });
    if (!(vol > 0.0)) throw MeshError("non-positive volume in cell " + std::to_string(ci));
    cell.volume = vol;
    cell.centroid = moment / vol;
    cell.surface_area = 0.0;
    for (int i = 0; i < cell.num_faces; ++i) {
      const Face& f = mesh.faces[cell.faces[i]];
      cell.surface_area += f.area;
      if ((f.centroid - cell.centroid).dot(f.normal) * cell.face_sign[i] <= 0.0)
        throw MeshError("inverted face orientation in cell " + std::to_string(ci));
    }
    cell.moments = cell_basis_moments(mesh, static_cast<Index>(ci));
  }

  if (!mesh.nodes.empty()) {
    mesh.bbox_lo = mesh.bbox_hi = mesh.nodes.front();
    for (const Vec3& p : mesh.nodes) {
      mesh.bbox_lo = mesh.bbox_lo.cwiseMin(p);
      mesh.bbox_hi = mesh.bbox_hi.cwiseMax(p);
    }
  }
  return mesh;
}

/// Alias matching the geometry pass name used throughout the docs.
inline Mesh compute_geometry(const RawMesh& raw) { return build_mesh(raw); }

}  // namespace cgks
