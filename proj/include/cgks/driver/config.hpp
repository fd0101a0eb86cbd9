#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgks/evolution/solver.hpp"
#include "cgks/mesh/box.hpp"

namespace cgks {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PrimitiveState {
  double rho = 1.0;
  Vec3 u = Vec3::Zero();
  double p = 1.0;
  Conserved conserved(double gamma) const { return primitive_to_conserved(rho, u, p, gamma); }
};

struct PeriodicLink {
  std::string lower, upper;
  int axis = 0;
};

struct CaseConfig {
  // mesh
  std::string mesh_source = "box";  // box | file
  std::string mesh_file;
  BoxSpec box;
  std::vector<PeriodicLink> periodic_links;  // file meshes only
  std::map<std::string, PatchKind> patch_kinds;
  std::optional<PrimitiveState> freestream;

  // initial condition
  std::string initial = "uniform";  // uniform | sine | sod
  PrimitiveState uniform;
  PrimitiveState left{1.0, Vec3::Zero(), 1.0}, right{0.125, Vec3::Zero(), 0.1};
  double interface_x = 0.5;

  // physics and scheme
  SolverOptions solver;

  // time
  double end_time = 0.0;
  long max_steps = 0;  // 0: unlimited

  // output
  std::string output_dir = ".";
  std::string prefix = "case";
  long vtk_every = 0;  // 0: final state only, < 0: never
  long log_every = 1;

  std::string source_path;  // config file, for resolving relative paths
};

namespace detail {

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

inline std::vector<double> numbers(const std::string& key, const std::string& s) {
  std::vector<double> out;
  for (const auto& w : words(s)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(w, &used));
      if (used != w.size()) throw std::invalid_argument(w);
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': '" + w + "' is not a number");
    }
  }
  return out;
}

inline Vec3 vec3(const std::string& key, const std::string& s) {
  const auto v = numbers(key, s);
  if (v.size() == 1) return Vec3::Constant(v[0]);
  if (v.size() != 3) throw ConfigError("key '" + key + "' needs 1 or 3 numbers");
  return Vec3(v[0], v[1], v[2]);
}

inline bool boolean(const std::string& key, const std::string& s) {
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + s + "'");
}

inline int axis_index(const std::string& key, const std::string& s) {
  if (s == "x" || s == "0") return 0;
  if (s == "y" || s == "1") return 1;
  if (s == "z" || s == "2") return 2;
  throw ConfigError("key '" + key + "': unknown axis '" + s + "'");
}

// "rho u v w p"
inline PrimitiveState primitive(const std::string& key, const std::string& s) {
  const auto v = numbers(key, s);
  if (v.size() != 5) throw ConfigError("key '" + key + "' needs five numbers: rho u v w p");
  return {v[0], Vec3(v[1], v[2], v[3]), v[4]};
}

class Reader {
 public:
  explicit Reader(const boost::property_tree::ptree& pt) : pt_(pt) {}

  std::optional<std::string> get(const std::string& path) {
    used_.push_back(path);
    if (auto v = pt_.get_optional<std::string>(path)) return *v;
    return std::nullopt;
  }
  template <typename T>
  void number(const std::string& path, T& out) {
    if (auto v = get(path)) {
      const auto n = numbers(path, *v);
      if (n.size() != 1) throw ConfigError("key '" + path + "' needs one number");
      out = static_cast<T>(n[0]);
    }
  }
  void flag(const std::string& path, bool& out) {
    if (auto v = get(path)) out = boolean(path, *v);
  }
  void text(const std::string& path, std::string& out) {
    if (auto v = get(path)) out = *v;
  }
  void primitive_state(const std::string& path, PrimitiveState& out) {
    if (auto v = get(path)) out = primitive(path, *v);
  }

  // unknown keys are errors
  void check_all_used(const std::vector<std::string>& free_sections) const {
    for (const auto& [section, body] : pt_) {
      const bool free = std::find(free_sections.begin(), free_sections.end(), section) != free_sections.end();
      if (body.empty()) throw ConfigError("key '" + section + "' outside a section");
      for (const auto& [key, value] : body) {
        const std::string path = section + "." + key;
        if (!free && std::find(used_.begin(), used_.end(), path) == used_.end())
          throw ConfigError("unknown key '" + path + "'");
      }
    }
  }

 private:
  const boost::property_tree::ptree& pt_;
  std::vector<std::string> used_;
};

}  // namespace detail

/// Reads an INI case file. See cases/ for documented examples.
inline CaseConfig parse_config(std::istream& in, const std::string& source_path = "") {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  CaseConfig c;
  c.source_path = source_path;
  detail::Reader r(pt);

  r.text("mesh.source", c.mesh_source);
  if (c.mesh_source == "box") {
    c.box.periodic = {false, false, false};
    if (auto v = r.get("mesh.style")) {
      if (*v == "hex")
        c.box.style = BoxStyle::Hex;
      else if (*v == "tet")
        c.box.style = BoxStyle::Tet6;
      else
        throw ConfigError("mesh.style: expected hex or tet, got '" + *v + "'");
    }
    if (auto v = r.get("mesh.cells")) {
      const auto n = detail::numbers("mesh.cells", *v);
      if (n.size() != 1 && n.size() != 3) throw ConfigError("mesh.cells needs 1 or 3 integers");
      for (int a = 0; a < 3; ++a) c.box.n[a] = static_cast<int>(n.size() == 1 ? n[0] : n[a]);
    }
    if (auto v = r.get("mesh.lower")) c.box.lower = detail::vec3("mesh.lower", *v);
    if (auto v = r.get("mesh.upper")) c.box.upper = detail::vec3("mesh.upper", *v);
    if (auto v = r.get("mesh.periodic"))
      for (const auto& w : detail::words(*v))
        if (w != "none") c.box.periodic[detail::axis_index("mesh.periodic", w)] = true;
    r.flag("mesh.kuhn_flip_x", c.box.kuhn_flip_x);
  } else if (c.mesh_source == "file") {
    r.text("mesh.file", c.mesh_file);
    if (c.mesh_file.empty()) throw ConfigError("mesh.file is required when mesh.source = file");
    if (!source_path.empty() && std::filesystem::path(c.mesh_file).is_relative())
      c.mesh_file = (std::filesystem::path(source_path).parent_path() / c.mesh_file).string();
    if (auto v = r.get("mesh.periodic")) {
      // "lower:upper:axis" entries
      for (const auto& w : detail::words(*v)) {
        const auto a = w.find(':'), b = w.rfind(':');
        if (a == std::string::npos || a == b) throw ConfigError("mesh.periodic: expected lower:upper:axis, got '" + w + "'");
        c.periodic_links.push_back(
            {w.substr(0, a), w.substr(a + 1, b - a - 1), detail::axis_index("mesh.periodic", w.substr(b + 1))});
      }
    }
  } else {
    throw ConfigError("mesh.source: expected box or file, got '" + c.mesh_source + "'");
  }

  if (auto b = pt.get_child_optional("boundary"))
    for (const auto& [name, value] : *b) {
      try {
        c.patch_kinds[name] = patch_kind_from_string(value.data());
      } catch (const std::exception& e) {
        throw ConfigError("boundary." + name + ": " + e.what());
      }
    }
  if (auto v = r.get("boundary_state.freestream")) c.freestream = detail::primitive("boundary_state.freestream", *v);

  r.text("initial.id", c.initial);
  r.primitive_state("initial.state", c.uniform);
  r.primitive_state("initial.left", c.left);
  r.primitive_state("initial.right", c.right);
  r.number("initial.interface_x", c.interface_x);
  if (c.initial != "uniform" && c.initial != "sine" && c.initial != "sod" && c.initial != "freestream")
    throw ConfigError("initial.id: expected uniform, freestream, sine or sod, got '" + c.initial + "'");
  if (c.initial == "freestream" && !c.freestream) throw ConfigError("initial.id = freestream needs boundary_state.freestream");

  SolverOptions& s = c.solver;
  r.number("physics.gamma", s.gamma);
  r.number("physics.mu", s.collision.mu);
  r.number("physics.c1", s.collision.c1);
  r.number("physics.c2", s.collision.c2);
  if (auto v = r.get("scheme.path")) {
    try {
      s.recon.path = recon_path_from_string(*v);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("scheme.path: ") + e.what());
    }
  }
  r.flag("scheme.weno", s.recon.weno);
  r.flag("scheme.df", s.df);
  r.flag("scheme.mid_stage_slopes", s.mid_stage_slopes);
  r.number("time.cfl", s.cfl);
  r.number("time.end_time", c.end_time);
  r.number("time.max_steps", c.max_steps);

  r.text("output.dir", c.output_dir);
  r.text("output.prefix", c.prefix);
  r.number("output.vtk_every", c.vtk_every);
  r.number("output.log_every", c.log_every);
  if (!source_path.empty() && std::filesystem::path(c.output_dir).is_relative())
    c.output_dir = (std::filesystem::path(source_path).parent_path() / c.output_dir).string();

  r.check_all_used({"boundary"});

  if (!(c.end_time > 0.0) && c.max_steps <= 0) throw ConfigError("time: end_time or max_steps must be positive");
  if (c.end_time < 0.0 || c.max_steps < 0) throw ConfigError("time: end_time and max_steps must not be negative");
  if (!(s.cfl > 0.0)) throw ConfigError("time.cfl must be positive");
  if (!(s.gamma > 1.0)) throw ConfigError("physics.gamma must exceed 1");
  if (s.collision.mu < 0.0 || s.collision.c1 < 0.0 || s.collision.c2 < 0.0)
    throw ConfigError("physics: mu, c1, c2 must not be negative");
  return c;
}

inline CaseConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in, path);
}

}  // namespace cgks
