#pragma once

#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>

#include "cgks/mesh/periodic.hpp"

namespace cgks {

namespace detail {

inline std::string msh_error(const std::string& path, std::size_t line, const std::string& what) {
  return path + ":" + std::to_string(line) + ": " + what;
}

}  // namespace detail

/// Reads the ASCII MSH 2.2 subset: $PhysicalNames, $Nodes, $Elements.
/// Triangles and quads become boundary faces grouped by physical tag.
inline RawMesh read_msh_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path);

  RawMesh raw;
  std::map<int, std::string> physical_names;
  std::unordered_map<long, Index> node_ids;
  std::map<int, int> patch_of_tag;
  struct PendingElement {
    int type;
    int tag;
    std::vector<long> nodes;
    std::size_t line;
  };
  std::vector<PendingElement> elements;

  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  bool saw_format = false;
  while (next_line()) {
    if (line == "$MeshFormat") {
      if (!next_line()) break;
      std::istringstream ls(line);
      double version = 0;
      int file_type = -1;
      ls >> version >> file_type;
      if (version < 2.0 || version >= 3.0 || file_type != 0)
        throw MeshError(detail::msh_error(path, lineno, "only ASCII MSH version 2.x is supported"));
      saw_format = true;
    } else if (line == "$PhysicalNames") {
      next_line();
      const int n = std::stoi(line);
      for (int i = 0; i < n && next_line(); ++i) {
        std::istringstream ls(line);
        int dim = 0, tag = 0;
        ls >> dim >> tag;
        std::string rest;
        std::getline(ls, rest);
        const auto a = rest.find('"'), b = rest.rfind('"');
        physical_names[tag] = (a != std::string::npos && b > a) ? rest.substr(a + 1, b - a - 1) : rest;
      }
    } else if (line == "$Nodes") {
      next_line();
      const long n = std::stol(line);
      raw.nodes.reserve(n);
      for (long i = 0; i < n; ++i) {
        if (!next_line()) throw MeshError(detail::msh_error(path, lineno, "truncated $Nodes section"));
        std::istringstream ls(line);
        long id;
        double x, y, z;
        if (!(ls >> id >> x >> y >> z)) throw MeshError(detail::msh_error(path, lineno, "malformed node line"));
        node_ids[id] = static_cast<Index>(raw.nodes.size());
        raw.nodes.emplace_back(x, y, z);
      }
    } else if (line == "$Elements") {
      next_line();
      const long n = std::stol(line);
      for (long i = 0; i < n; ++i) {
        if (!next_line()) throw MeshError(detail::msh_error(path, lineno, "truncated $Elements section"));
        std::istringstream ls(line);
        long id;
        int type, ntags;
        if (!(ls >> id >> type >> ntags)) throw MeshError(detail::msh_error(path, lineno, "malformed element line"));
        std::vector<int> tags(ntags);
        for (int& t : tags) ls >> t;
        int count = 0;
        switch (type) {
          case 1: count = 2; break;   // line
          case 15: count = 1; break;  // point
          case 2: count = 3; break;
          case 3: count = 4; break;
          case 4: count = 4; break;
          case 5: count = 8; break;
          case 6: count = 6; break;
          case 7: count = 5; break;
          default:
            throw MeshError(detail::msh_error(path, lineno, "unsupported element type " + std::to_string(type)));
        }
        if (type == 1 || type == 15) continue;
        PendingElement el{type, ntags > 0 ? tags[0] : 0, std::vector<long>(count), lineno};
        for (long& v : el.nodes)
          if (!(ls >> v)) throw MeshError(detail::msh_error(path, lineno, "element has too few nodes"));
        elements.push_back(std::move(el));
      }
    }
  }
  if (!saw_format) throw MeshError(path + ": missing $MeshFormat header");

  for (const auto& el : elements) {
    std::array<Index, 8> nodes{};
    for (std::size_t i = 0; i < el.nodes.size(); ++i) {
      auto it = node_ids.find(el.nodes[i]);
      if (it == node_ids.end())
        throw MeshError(detail::msh_error(path, el.line, "element references missing node " + std::to_string(el.nodes[i])));
      nodes[i] = it->second;
    }
    if (el.type == 2 || el.type == 3) {
      auto pit = patch_of_tag.find(el.tag);
      if (pit == patch_of_tag.end()) {
        auto nit = physical_names.find(el.tag);
        const std::string name = nit != physical_names.end() ? nit->second : "patch_" + std::to_string(el.tag);
        pit = patch_of_tag.emplace(el.tag, static_cast<int>(raw.patches.size())).first;
        raw.patches.push_back({name, PatchKind::Unset, Conserved::Zero()});
      }
      RawMesh::BoundaryFace bf;
      bf.num_nodes = static_cast<int>(el.nodes.size());
      std::copy(nodes.begin(), nodes.begin() + bf.num_nodes, bf.nodes.begin());
      std::fill(bf.nodes.begin() + bf.num_nodes, bf.nodes.end(), -1);
      bf.patch = pit->second;
      raw.boundary_faces.push_back(bf);
      continue;
    }
    CellKind kind = CellKind::Tetrahedron;
    if (el.type == 5) kind = CellKind::Hexahedron;
    if (el.type == 6) kind = CellKind::Prism;
    if (el.type == 7) kind = CellKind::Pyramid;
    raw.cells.push_back({kind, nodes});
  }
  return raw;
}

inline Mesh read_msh(const std::string& path) { return build_mesh(read_msh_raw(path)); }

/// Native text format:
///   cgksmesh 1
///   nodes N            then N lines "x y z"
///   cells M            then M lines "<kind> n0 n1 ..."
///   patches P          then per patch "name kind F" followed by F lines "k n0 .. n{k-1}"
///   periodic L         then L lines "lower upper axis"
///   end
inline void write_native(const RawMesh& raw, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file " + path);
  out << "cgksmesh 1\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "nodes " << raw.nodes.size() << "\n";
  for (const Vec3& p : raw.nodes) out << p.x() << " " << p.y() << " " << p.z() << "\n";
  out << "cells " << raw.cells.size() << "\n";
  for (const auto& c : raw.cells) {
    out << to_string(c.kind);
    for (int i = 0; i < node_count(c.kind); ++i) out << " " << c.nodes[i];
    out << "\n";
  }
  std::vector<std::vector<const RawMesh::BoundaryFace*>> by_patch(raw.patches.size());
  for (const auto& bf : raw.boundary_faces)
    if (bf.patch >= 0 && bf.patch < static_cast<int>(raw.patches.size())) by_patch[bf.patch].push_back(&bf);
  out << "patches " << raw.patches.size() << "\n";
  for (std::size_t p = 0; p < raw.patches.size(); ++p) {
    out << raw.patches[p].name << " " << to_string(raw.patches[p].kind) << " " << by_patch[p].size() << "\n";
    for (const auto* bf : by_patch[p]) {
      out << bf->num_nodes;
      for (int i = 0; i < bf->num_nodes; ++i) out << " " << bf->nodes[i];
      out << "\n";
    }
  }
  out << "periodic " << raw.periodic.size() << "\n";
  for (const auto& l : raw.periodic) out << l.lower_patch << " " << l.upper_patch << " " << l.axis << "\n";
  out << "end\n";
  if (!out) throw MeshError("error while writing " + path);
}

inline void write_native(const Mesh& mesh, const std::string& path) { write_native(mesh.source, path); }

inline RawMesh read_native_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path);
  auto fail = [&](const std::string& what) { return MeshError(path + ": " + what); };
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "cgksmesh") throw fail("missing cgksmesh header");
  if (version != 1) throw fail("unsupported cgksmesh version " + std::to_string(version));
  RawMesh raw;
  std::size_t n = 0;
  if (!(in >> word >> n) || word != "nodes") throw fail("expected nodes section");
  raw.nodes.resize(n);
  for (Vec3& p : raw.nodes)
    if (!(in >> p.x() >> p.y() >> p.z())) throw fail("truncated nodes section");
  if (!(in >> word >> n) || word != "cells") throw fail("expected cells section");
  raw.cells.resize(n);
  for (auto& c : raw.cells) {
    if (!(in >> word)) throw fail("truncated cells section");
    if (word == "tet") c.kind = CellKind::Tetrahedron;
    else if (word == "pyramid") c.kind = CellKind::Pyramid;
    else if (word == "prism") c.kind = CellKind::Prism;
    else if (word == "hex") c.kind = CellKind::Hexahedron;
    else throw fail("unknown cell kind '" + word + "'");
    for (int i = 0; i < node_count(c.kind); ++i)
      if (!(in >> c.nodes[i])) throw fail("truncated cell");
  }
  if (!(in >> word >> n) || word != "patches") throw fail("expected patches section");
  raw.patches.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::string kind;
    std::size_t nf = 0;
    if (!(in >> raw.patches[p].name >> kind >> nf)) throw fail("truncated patch header");
    raw.patches[p].kind = patch_kind_from_string(kind);
    for (std::size_t f = 0; f < nf; ++f) {
      RawMesh::BoundaryFace bf;
      bf.nodes.fill(-1);
      if (!(in >> bf.num_nodes) || bf.num_nodes < 3 || bf.num_nodes > 4) throw fail("bad boundary face");
      for (int i = 0; i < bf.num_nodes; ++i) in >> bf.nodes[i];
      bf.patch = static_cast<int>(p);
      raw.boundary_faces.push_back(bf);
    }
  }
  if (!(in >> word >> n) || word != "periodic") throw fail("expected periodic section");
  for (std::size_t i = 0; i < n; ++i) {
    RawMesh::PeriodicLink l{};
    if (!(in >> l.lower_patch >> l.upper_patch >> l.axis)) throw fail("truncated periodic section");
    raw.periodic.push_back(l);
  }
  if (!(in >> word) || word != "end") throw fail("missing end marker");
  return raw;
}

/// Reads either format, detected from the first line.
inline Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path);
  std::string first;
  std::getline(in, first);
  in.close();
  if (first.rfind("cgksmesh", 0) == 0) return assemble_mesh(read_native_raw(path));
  return read_msh(path);
}

}  // namespace cgks
