#pragma once

#include <random>
#include <string>

#include "cgks/mesh/box.hpp"

namespace cgks::fixture {

inline RawMesh single_hex_raw(const Vec3& lo = Vec3::Zero(), const Vec3& hi = Vec3::Ones()) {
  BoxSpec s;
  s.lower = lo;
  s.upper = hi;
  s.n = {1, 1, 1};
  s.periodic = {false, false, false};
  return gen_box_raw(s);
}

inline Mesh unit_cube() { return build_mesh(single_hex_raw()); }

inline Mesh unit_cube_tets() {
  BoxSpec s;
  s.n = {1, 1, 1};
  s.style = BoxStyle::Tet6;
  s.periodic = {false, false, false};
  return build_mesh(gen_box_raw(s));
}

/// Two unit cubes side by side along x.
inline Mesh two_cubes() {
  BoxSpec s;
  s.upper = Vec3(2, 1, 1);
  s.n = {2, 1, 1};
  s.periodic = {false, false, false};
  return build_mesh(gen_box_raw(s));
}

/// Hybrid mesh of [0,1]^3 on an n^3 lattice: some columns split into prisms,
/// a checkerboard of hexes split into six center pyramids, the rest hexes.
/// Interior nodes are jittered by up to `jitter` cell widths; the boundary
/// planes stay flat so the mesh can be made periodic.
inline RawMesh mixed_raw(int n = 4, double jitter = 0.12, unsigned seed = 7) {
  BoxSpec s;
  s.n = {n, n, n};
  s.periodic = {false, false, false};
  RawMesh box = gen_box_raw(s);
  const double h = 1.0 / n;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-jitter * h, jitter * h);
  auto node_id = [&](int i, int j, int k) { return static_cast<Index>(i + (n + 1) * (j + (n + 1) * k)); };
  // jitter is periodic in the lattice index so opposite boundary planes match
  std::vector<Vec3> jit(static_cast<std::size_t>(n) * n * n);
  for (Vec3& d : jit) d = Vec3(u(rng), u(rng), u(rng));
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        Vec3& p = box.nodes[node_id(i, j, k)];
        const Vec3& d = jit[(i % n) + n * ((j % n) + n * (k % n))];
        if (i > 0 && i < n) p.x() += d.x();
        if (j > 0 && j < n) p.y() += d.y();
        if (k > 0 && k < n) p.z() += d.z();
      }

  RawMesh raw;
  raw.nodes = box.nodes;
  raw.patches = box.patches;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const auto& hex = box.cells[i + n * (j + n * k)].nodes;
        if ((i + 2 * j) % 3 == 0) {
          raw.cells.push_back({CellKind::Prism, {hex[0], hex[1], hex[2], hex[4], hex[5], hex[6], 0, 0}});
          raw.cells.push_back({CellKind::Prism, {hex[0], hex[2], hex[3], hex[4], hex[6], hex[7], 0, 0}});
        } else if ((i + j + k) % 2 == 1) {
          Vec3 c = Vec3::Zero();
          for (int v = 0; v < 8; ++v) c += raw.nodes[hex[v]];
          const Index apex = static_cast<Index>(raw.nodes.size());
          raw.nodes.push_back(c / 8.0);
          for (const auto& f : detail::face_template(CellKind::Hexahedron)) {
            // hex faces point outward; pyramid bases must point away from the apex
            raw.cells.push_back({CellKind::Pyramid, {hex[f[0]], hex[f[3]], hex[f[2]], hex[f[1]], apex, 0, 0, 0}});
          }
        } else {
          raw.cells.push_back({CellKind::Hexahedron, hex});
        }
      }
  // boundary faces: reuse the generic tagging by recomputing from the new cells
  std::map<detail::FaceKey, std::pair<int, std::array<Index, 4>>> seen;
  for (const auto& el : raw.cells)
    for (const auto& lf : detail::face_template(el.kind)) {
      std::array<Index, 4> fn{-1, -1, -1, -1};
      const int m = static_cast<int>(lf.size());
      for (int q = 0; q < m; ++q) fn[q] = el.nodes[lf[q]];
      const auto key = detail::face_key(fn.data(), m);
      auto it = seen.find(key);
      if (it == seen.end())
        seen.emplace(key, std::make_pair(m, fn));
      else
        seen.erase(it);
    }
  for (const auto& [key, val] : seen) {
    Vec3 c = Vec3::Zero();
    for (int q = 0; q < val.first; ++q) c += raw.nodes[val.second[q]];
    c /= val.first;
    int patch = -1;
    for (int a = 0; a < 3 && patch < 0; ++a) {
      if (std::abs(c[a]) < 1e-9) patch = 2 * a;
      if (std::abs(c[a] - 1.0) < 1e-9) patch = 2 * a + 1;
    }
    raw.boundary_faces.push_back({val.second, val.first, patch});
  }
  return raw;
}

inline Mesh mixed_mesh(int n = 4, bool periodic = false) {
  RawMesh raw = mixed_raw(n);
  if (periodic)
    for (int a = 0; a < 3; ++a) {
      raw.patches[2 * a].kind = raw.patches[2 * a + 1].kind = PatchKind::Periodic;
      raw.periodic.push_back({2 * a, 2 * a + 1, a});
    }
  return assemble_mesh(raw);
}

}  // namespace cgks::fixture
