#pragma once

#include <array>
#include <map>
#include <string>

#include "cgks/mesh/periodic.hpp"

namespace cgks {

enum class BoxStyle { Hex, Tet6 };

struct BoxSpec {
  Vec3 lower = Vec3::Zero();
  Vec3 upper = Vec3::Ones();
  std::array<int, 3> n{10, 10, 10};
  BoxStyle style = BoxStyle::Hex;
  std::array<bool, 3> periodic{true, true, true};
  bool kuhn_flip_x = false;  // Tet6: split along the (-1,1,1) diagonal instead of (1,1,1)

  static BoxSpec cube(double lo, double hi, int n, BoxStyle style) {
    BoxSpec s;
    s.lower = Vec3::Constant(lo);
    s.upper = Vec3::Constant(hi);
    s.n = {n, n, n};
    s.style = style;
    return s;
  }
};

inline const std::array<std::string, 6>& box_patch_names() {
  static const std::array<std::string, 6> names{"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"};
  return names;
}

/// Connectivity for a structured box. Patches are xmin, xmax, ymin, ymax,
/// zmin, zmax (ids 0..5); periodic axes are recorded as links.
inline RawMesh gen_box_raw(const BoxSpec& spec) {
  for (int a = 0; a < 3; ++a) {
    if (spec.n[a] < 1) throw MeshError("box needs at least one cell per axis");
    if (!(spec.upper[a] > spec.lower[a])) throw MeshError("box upper corner must exceed lower corner");
  }
  RawMesh raw;
  const int nx = spec.n[0], ny = spec.n[1], nz = spec.n[2];
  auto node_id = [&](int i, int j, int k) { return static_cast<Index>(i + (nx + 1) * (j + (ny + 1) * k)); };
  raw.nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1) * (nz + 1));
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const Vec3 t(double(i) / nx, double(j) / ny, double(k) / nz);
        Vec3 p = spec.lower + (spec.upper - spec.lower).cwiseProduct(t);
        if (i == nx) p.x() = spec.upper.x();
        if (j == ny) p.y() = spec.upper.y();
        if (k == nz) p.z() = spec.upper.z();
        raw.nodes.push_back(p);
      }

  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        auto corner = [&](int dx, int dy, int dz) { return node_id(i + dx, j + dy, k + dz); };
        if (spec.style == BoxStyle::Hex) {
          raw.cells.push_back({CellKind::Hexahedron,
                               {corner(0, 0, 0), corner(1, 0, 0), corner(1, 1, 0), corner(0, 1, 0), corner(0, 0, 1),
                                corner(1, 0, 1), corner(1, 1, 1), corner(0, 1, 1)}});
        } else {
          // Kuhn subdivision: one tet per monotone path from (0,0,0) to (1,1,1)
          static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
          for (const auto& p : perms) {
            std::array<int, 3> d{0, 0, 0};
            std::array<Index, 4> v{};
            const int fx = spec.kuhn_flip_x ? 1 : 0;
            v[0] = corner(fx, 0, 0);
            for (int s = 0; s < 3; ++s) {
              d[p[s]] = 1;
              v[s + 1] = corner(d[0] ^ fx, d[1], d[2]);
            }
            if (quadrature::tet_volume(raw.nodes[v[0]], raw.nodes[v[1]], raw.nodes[v[2]], raw.nodes[v[3]]) < 0)
              std::swap(v[1], v[2]);
            raw.cells.push_back({CellKind::Tetrahedron, {v[0], v[1], v[2], v[3], 0, 0, 0, 0}});
          }
        }
      }

  for (const auto& name : box_patch_names()) raw.patches.push_back({name, PatchKind::Unset, Conserved::Zero()});

  // boundary faces: cell faces seen once, tagged by the box plane they lie on
  std::map<detail::FaceKey, std::pair<int, std::array<Index, 4>>> seen;
  for (const auto& el : raw.cells) {
    for (const auto& lf : detail::face_template(el.kind)) {
      std::array<Index, 4> fn{-1, -1, -1, -1};
      const int n = static_cast<int>(lf.size());
      for (int i = 0; i < n; ++i) fn[i] = el.nodes[lf[i]];
      const auto key = detail::face_key(fn.data(), n);
      auto it = seen.find(key);
      if (it == seen.end())
        seen.emplace(key, std::make_pair(n, fn));
      else
        seen.erase(it);
    }
  }
  const Vec3 h = (spec.upper - spec.lower).cwiseQuotient(Vec3(nx, ny, nz));
  for (const auto& [key, val] : seen) {
    const auto& [n, fn] = val;
    Vec3 c = Vec3::Zero();
    for (int i = 0; i < n; ++i) c += raw.nodes[fn[i]];
    c /= n;
    int patch = -1;
    for (int a = 0; a < 3 && patch < 0; ++a) {
      if (std::abs(c[a] - spec.lower[a]) < 1e-6 * h[a]) patch = 2 * a;
      if (std::abs(c[a] - spec.upper[a]) < 1e-6 * h[a]) patch = 2 * a + 1;
    }
    raw.boundary_faces.push_back({fn, n, patch});
  }
  for (int a = 0; a < 3; ++a) {
    if (!spec.periodic[a]) continue;
    raw.patches[2 * a].kind = PatchKind::Periodic;
    raw.patches[2 * a + 1].kind = PatchKind::Periodic;
    raw.periodic.push_back({2 * a, 2 * a + 1, a});
  }
  return raw;
}

inline Mesh gen_box(const BoxSpec& spec) {
  const double h = (spec.upper - spec.lower).cwiseQuotient(Vec3(spec.n[0], spec.n[1], spec.n[2])).minCoeff();
  Mesh mesh = build_mesh(gen_box_raw(spec));
  for (const auto& link : mesh.source.periodic)
    pair_periodic(mesh, link.lower_patch, link.upper_patch, link.axis, 1e-6 * h);
  return mesh;
}

}  // namespace cgks
