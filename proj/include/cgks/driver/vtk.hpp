#pragma once

#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>

#include "cgks/evolution/solver.hpp"

namespace cgks {

inline int vtk_cell_type(CellKind k) {
  switch (k) {
    case CellKind::Tetrahedron: return 10;
    case CellKind::Pyramid: return 14;
    case CellKind::Prism: return 13;
    case CellKind::Hexahedron: return 12;
  }
  return 0;
}

/// Legacy ASCII unstructured grid with cell data rho, U, p, Mach, alpha.
inline void write_vtk(const Mesh& mesh, const FlowState& st, double gamma, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << std::setprecision(12);
  out << "# vtk DataFile Version 3.0\ncgks t=" << st.time << " step=" << st.step << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.nodes.size() << " double\n";
  for (const Vec3& p : mesh.nodes) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';

  std::size_t size = 0;
  for (const Cell& c : mesh.cells) size += 1 + node_count(c.kind);
  out << "CELLS " << mesh.cells.size() << ' ' << size << '\n';
  for (const Cell& c : mesh.cells) {
    const int n = node_count(c.kind);
    out << n;
    for (int i = 0; i < n; ++i) out << ' ' << c.nodes[i];
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.cells.size() << '\n';
  for (const Cell& c : mesh.cells) out << vtk_cell_type(c.kind) << '\n';

  const std::size_t nc = mesh.cells.size();
  out << "CELL_DATA " << nc << '\n';
  auto scalar = [&](const char* name, auto&& f) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t c = 0; c < nc; ++c) out << f(c) << '\n';
  };
  scalar("rho", [&](std::size_t c) { return st.mean[c][0]; });
  out << "VECTORS U double\n";
  for (std::size_t c = 0; c < nc; ++c) {
    const Vec3 u = velocity(st.mean[c]);
    out << u.x() << ' ' << u.y() << ' ' << u.z() << '\n';
  }
  scalar("p", [&](std::size_t c) { return pressure(st.mean[c], gamma); });
  scalar("Mach", [&](std::size_t c) { return velocity(st.mean[c]).norm() / sound_speed(st.mean[c], gamma); });
  scalar("alpha", [&](std::size_t c) { return st.alpha.empty() ? 1.0 : st.alpha[c]; });
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace cgks
