#ifndef DDMM_SCENARIO_HPP
#define DDMM_SCENARIO_HPP

#include <string>
#include <vector>

#include "ddmm/config.hpp"
#include "ddmm/damage.hpp"
#include "ddmm/dd_solver.hpp"
#include "ddmm/plasticity.hpp"

namespace ddmm {

/// A fully resolved experiment setup: mesh, load program, reference model
/// parameters and data-driven options, parsed from a scenario config file.
struct Scenario {
  std::string name;
  std::string model;  // "damage" or "plasticity"
  std::string units = "nondimensional";
  Mesh mesh;
  LoadProgram program;
  DamageParams damage;
  PlasticityParams plastic;
  std::vector<int> alpha_dirichlet_nodes;
  ElasticityParams elastic;  // also the DD metric moduli
  DdOptions dd;
  ConfigFile raw;

  MetricTensors metric() const { return microstrain_metric(elastic, mesh.n); }
};

Scenario load_scenario(const std::string& path);
Scenario scenario_from_config(const ConfigFile& cfg, const std::string& base_dir);

/// Nodes matched by a coordinate predicate string such as
/// "x ~ 0 & y > 2.5" (tolerance for ~ is 1e-7 of the bounding-box diagonal).
std::vector<int> select_nodes(const Mesh& mesh, const std::string& predicate);

}  // namespace ddmm

#endif
