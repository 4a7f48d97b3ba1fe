#include "ddmm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

namespace ddmm {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(trim(tok));
  return out;
}

struct Condition {
  int axis = 0;  // 0 = x, 1 = y
  char op = '~';
  double value = 0;
};

std::vector<Condition> parse_predicate(const std::string& text) {
  std::vector<Condition> out;
  for (const std::string& part : split(text, '&')) {
    std::istringstream ss(part);
    std::string axis, op;
    double v;
    if (!(ss >> axis >> op >> v)) throw ConfigError("cannot parse predicate '" + part + "'");
    Condition c;
    if (axis == "x")
      c.axis = 0;
    else if (axis == "y")
      c.axis = 1;
    else
      throw ConfigError("predicate axis must be x or y in '" + part + "'");
    if (op != "~" && op != "<" && op != ">") throw ConfigError("predicate operator must be ~, < or >");
    c.op = op[0];
    c.value = v;
    out.push_back(c);
  }
  return out;
}

bool matches(const Mesh& mesh, int node, const std::vector<Condition>& conds, double tol) {
  for (const auto& c : conds) {
    if (c.axis >= mesh.n) return false;
    const double x = mesh.nodes(node, c.axis);
    if (c.op == '~' && std::abs(x - c.value) > tol) return false;
    if (c.op == '<' && !(x < c.value)) return false;
    if (c.op == '>' && !(x > c.value)) return false;
  }
  return true;
}

double bbox_tol(const Mesh& mesh) {
  const Eigen::Vector2d lo = mesh.bbox_min(), hi = mesh.bbox_max();
  return 1e-7 * std::max(1.0, (hi - lo).norm());
}

// dof name -> (field, component); field 0 = u, 1 = chi, 2 = alpha
struct DofName {
  int field = 0;
  int comp = 0;
};

DofName parse_dof_name(const std::string& name, const Mesh& mesh) {
  const SpaceConfig cfg = mesh.space();
  if (mesh.n == 1) {
    if (name == "u") return {0, 0};
    if (name == "chi") return {1, 0};
  } else {
    if (name == "ux") return {0, 0};
    if (name == "uy") return {0, 1};
    static const std::map<std::string, int> sym_comp{{"chi_xx", 0}, {"chi_yy", 1}, {"chi_xy", 2}};
    const auto it = sym_comp.find(name);
    if (it != sym_comp.end() && it->second < cfg.n_chi()) return {1, it->second};
    if (name == "chi_yx" && cfg.sym == MicroSymmetry::Full) return {1, 3};
  }
  if (name == "alpha") return {2, 0};
  throw ConfigError("unknown dof name '" + name + "'");
}

// "<predicate> : <dof> = <expr>"; expr is NUMBER, "load" or "NUMBER * load"
struct BcEntry {
  std::vector<Condition> conds;
  DofName dof;
  double scale = 0, offset = 0;
};

BcEntry parse_dirichlet(const std::string& value, const Mesh& mesh) {
  const auto colon = value.find(':');
  if (colon == std::string::npos) throw ConfigError("dirichlet entry needs '<predicate> : <dof> = <value>'");
  BcEntry e;
  e.conds = parse_predicate(value.substr(0, colon));
  const std::string rhs = value.substr(colon + 1);
  const auto eq = rhs.find('=');
  if (eq == std::string::npos) throw ConfigError("dirichlet entry needs '<dof> = <value>'");
  e.dof = parse_dof_name(trim(rhs.substr(0, eq)), mesh);
  std::string expr = trim(rhs.substr(eq + 1));
  const auto star = expr.find('*');
  if (expr == "load") {
    e.scale = 1;
  } else if (star != std::string::npos) {
    if (trim(expr.substr(star + 1)) != "load")
      throw ConfigError("value expression must be '<number> * load'");
    e.scale = parse_double(trim(expr.substr(0, star)), "dirichlet value");
  } else {
    e.offset = parse_double(expr, "dirichlet value");
  }
  return e;
}

SectionProfile parse_profile(const ConfigFile& cfg) {
  SectionProfile p;
  p.base = cfg.get_double("mesh", "section", 1.0);
  for (const std::string& seg : cfg.find_all("mesh", "section_segment")) {
    std::istringstream ss(seg);
    SectionProfile::Segment s;
    if (!(ss >> s.from >> s.to >> s.value))
      throw ConfigError("section_segment needs 'from to value'");
    p.segments.push_back(s);
  }
  return p;
}

// Boundary edges (2D): edges used by exactly one element, traversed
// counterclockwise so the outward normal is the right-hand rotation.
struct BoundaryEdge {
  int n0, n1;
};

std::vector<BoundaryEdge> boundary_edges(const Mesh& mesh) {
  std::map<std::pair<int, int>, std::pair<int, int>> count;  // sorted pair -> (count, oriented n0)
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int a = 0; a < 4; ++a) {
      const int n0 = mesh.elements(e, a), n1 = mesh.elements(e, (a + 1) % 4);
      const auto key = std::minmax(n0, n1);
      auto& slot = count[{key.first, key.second}];
      slot.first++;
      if (slot.first == 1) slot.second = n0;
    }
  std::vector<BoundaryEdge> out;
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int a = 0; a < 4; ++a) {
      const int n0 = mesh.elements(e, a), n1 = mesh.elements(e, (a + 1) % 4);
      const auto key = std::minmax(n0, n1);
      if (count[{key.first, key.second}].first == 1) out.push_back({n0, n1});
    }
  return out;
}

}  // namespace

std::vector<int> select_nodes(const Mesh& mesh, const std::string& predicate) {
  const auto conds = parse_predicate(predicate);
  const double tol = bbox_tol(mesh);
  std::vector<int> out;
  for (int i = 0; i < mesh.num_nodes(); ++i)
    if (matches(mesh, i, conds, tol)) out.push_back(i);
  return out;
}

Scenario load_scenario(const std::string& path) {
  const ConfigFile cfg = ConfigFile::parse_file(path);
  return scenario_from_config(cfg, std::filesystem::path(path).parent_path().string());
}

Scenario scenario_from_config(const ConfigFile& cfg, const std::string& base_dir) {
  Scenario s;
  s.raw = cfg;
  s.name = cfg.get_string("", "name");
  s.model = cfg.get_string("", "model");
  if (s.model != "damage" && s.model != "plasticity")
    throw ConfigError("model must be damage or plasticity");
  s.units = cfg.get_string("", "units", "nondimensional");
  const int n = static_cast<int>(cfg.get_int("", "dimension"));
  const MicroSymmetry sym =
      micro_symmetry_from_string(cfg.get_string("", "micro_symmetry", "microstrain"));

  // mesh
  const std::string kind = cfg.get_string("mesh", "kind");
  if (kind == "bar") {
    if (n != 1) throw ConfigError("bar meshes are one-dimensional");
    s.mesh = build_mesh_1d(cfg.get_double("mesh", "length"),
                           static_cast<int>(cfg.get_int("mesh", "elements")), parse_profile(cfg),
                           sym);
  } else if (kind == "file") {
    if (n != 2) throw ConfigError("mesh files describe 2D meshes");
    auto resolve = [&base_dir](const std::string& p) {
      return std::filesystem::path(p).is_absolute() || base_dir.empty()
                 ? p
                 : (std::filesystem::path(base_dir) / p).string();
    };
    s.mesh = build_mesh_2d(resolve(cfg.get_string("mesh", "nodes")),
                           resolve(cfg.get_string("mesh", "elements")), sym);
  } else {
    throw ConfigError("mesh kind must be bar or file");
  }

  // material
  s.elastic.E = cfg.get_double("material", "E");
  s.elastic.nu = cfg.get_double("material", "nu", 0.0);
  s.elastic.c1 = cfg.get_double("material", "c1", 1.0);
  s.elastic.ell_chi = cfg.get_double("material", "ell_chi");
  s.elastic.validate();
  if (s.model == "damage") {
    s.damage.elastic = s.elastic;
    s.damage.w1 = cfg.get_double("material", "w1");
    s.damage.ell = cfg.get_double("material", "ell");
    s.damage.eta = cfg.get_double("material", "viscosity", 0.0);
    s.damage.stagger_tol = cfg.get_double("material", "stagger_tol", 1e-8);
    s.damage.max_stagger = static_cast<int>(cfg.get_int("material", "max_stagger", 5000));
    s.damage.validate();
  } else {
    s.plastic.elastic = s.elastic;
    s.plastic.sigma_y = cfg.get_double("material", "sigma_y");
    s.plastic.A_phi = cfg.get_double("material", "A_phi");
    s.plastic.A_theta = cfg.get_double("material", "A_theta");
    s.plastic.newton_tol = cfg.get_double("material", "newton_tol", 1e-10);
    s.plastic.newton_max = static_cast<int>(cfg.get_int("material", "newton_max", 60));
    s.plastic.validate();
  }

  // loading
  const int steps = static_cast<int>(cfg.get_int("loading", "steps"));
  if (steps < 0) throw ConfigError("loading steps must be >= 0");
  s.program = LoadProgram::make(s.mesh, steps, cfg.get_double("loading", "load_max", 1.0));

  const double tol = bbox_tol(s.mesh);
  for (const std::string& entry : cfg.find_all("bc", "dirichlet")) {
    const BcEntry e = parse_dirichlet(entry, s.mesh);
    bool hit = false;
    for (int node = 0; node < s.mesh.num_nodes(); ++node) {
      if (!matches(s.mesh, node, e.conds, tol)) continue;
      hit = true;
      if (e.dof.field == 2) {
        if (e.scale != 0 || e.offset != 0)
          throw ConfigError("alpha Dirichlet values other than 0 are not supported");
        s.alpha_dirichlet_nodes.push_back(node);
      } else {
        const int dof = e.dof.field == 0 ? s.mesh.u_dof(node, e.dof.comp)
                                         : s.mesh.chi_dof(node, e.dof.comp);
        s.program.dirichlet.push_back({dof, e.scale, e.offset});
      }
    }
    if (!hit) throw ConfigError("dirichlet predicate matches no node: " + entry);
  }

  // Neumann tractions (constant; confinement pressures)
  for (const std::string& entry : cfg.find_all("bc", "neumann")) {
    const auto colon = entry.find(':');
    if (colon == std::string::npos) throw ConfigError("neumann entry needs '<predicate> : ...'");
    const auto conds = parse_predicate(entry.substr(0, colon));
    const std::string rhs = trim(entry.substr(colon + 1));
    if (s.mesh.n == 1) {
      const auto eq = rhs.find('=');
      if (eq == std::string::npos || trim(rhs.substr(0, eq)) != "force")
        throw ConfigError("1D neumann entries use 'force = <value>'");
      const double f = parse_double(trim(rhs.substr(eq + 1)), "neumann force");
      bool hit = false;
      for (int node = 0; node < s.mesh.num_nodes(); ++node)
        if (matches(s.mesh, node, conds, tol)) {
          s.program.f_const(s.mesh.u_dof(node, 0)) += f;
          hit = true;
        }
      if (!hit) throw ConfigError("neumann predicate matches no node: " + entry);
      continue;
    }
    double pressure = 0, tx = 0, ty = 0;
    bool is_pressure = false;
    for (const std::string& kv : split(rhs, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("neumann entry needs 'key = value' pairs");
      const std::string key = trim(kv.substr(0, eq));
      const double v = parse_double(trim(kv.substr(eq + 1)), "neumann value");
      if (key == "pressure") {
        pressure = v;
        is_pressure = true;
      } else if (key == "tx")
        tx = v;
      else if (key == "ty")
        ty = v;
      else
        throw ConfigError("unknown neumann key '" + key + "'");
    }
    bool hit = false;
    for (const BoundaryEdge& edge : boundary_edges(s.mesh)) {
      if (!matches(s.mesh, edge.n0, conds, tol) || !matches(s.mesh, edge.n1, conds, tol)) continue;
      hit = true;
      const Eigen::Vector2d p0 = s.mesh.nodes.row(edge.n0), p1 = s.mesh.nodes.row(edge.n1);
      const Eigen::Vector2d d = p1 - p0;
      const double len = d.norm();
      Eigen::Vector2d t(tx, ty);
      if (is_pressure) {
        const Eigen::Vector2d normal(d.y() / len, -d.x() / len);  // outward for CCW elements
        t = -pressure * normal;
      }
      for (const int node : {edge.n0, edge.n1})
        for (int c = 0; c < 2; ++c) s.program.f_const(s.mesh.u_dof(node, c)) += 0.5 * len * t(c);
    }
    if (!hit) throw ConfigError("neumann predicate matches no boundary edge: " + entry);
  }

  // data-driven options
  s.dd.seed = static_cast<std::uint64_t>(cfg.get_int("dd", "seed", 42));
  s.dd.max_iter = static_cast<int>(cfg.get_int("dd", "max_iter", 50));
  s.dd.tol_q = cfg.get_double("dd", "tol_q", s.model == "damage" ? 0.05 : 0.02);
  s.dd.fallback_fraction = cfg.get_double("dd", "fallback_fraction", 0.01);
  const std::string metric = cfg.get_string("dd", "metric", "initial");
  if (metric == "secant") {
    s.dd.schedule.secant = true;
    s.dd.schedule.activate_step = static_cast<int>(cfg.get_int("dd", "secant_from_step", 0));
    s.dd.schedule.floor = cfg.get_double("dd", "secant_floor", 1e-3);
  } else if (metric != "initial") {
    throw ConfigError("dd metric must be initial or secant");
  }
  return s;
}

}  // namespace ddmm
