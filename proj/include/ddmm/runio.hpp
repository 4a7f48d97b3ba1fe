#ifndef DDMM_RUNIO_HPP
#define DDMM_RUNIO_HPP

#include <string>
#include <vector>

#include "ddmm/dd_solver.hpp"
#include "ddmm/reference.hpp"
#include "ddmm/scenario.hpp"

namespace ddmm {

/// Run directory layout:
///   meta.json             n, symmetry, steps, seed, metric moduli, kind
///   summary.csv           per-step time series (seed recorded in the header)
///   weights.csv           material point weights and parent elements
///   steps/points_KKKKK.csv   per-point states, dataset column convention
///   steps/material_KKKKK.csv (dd runs) assigned data plus datum ids
///   steps/nodes_KKKKK.csv    nodal coordinates and fields
struct RunMeta {
  std::string scenario;
  std::string kind;  // "reference" or "dd"
  std::string mode;  // damage | plasticity | micromorphic | cauchy
  SpaceConfig cfg;
  int steps = 0;
  int points = 0;
  int nodes = 0;
  std::uint64_t seed = 0;
  std::string units;
  ElasticityParams metric_params;
};

void write_reference_run(const std::string& dir, const Scenario& scenario, const ReferenceRun& run);
void write_dd_run(const std::string& dir, const Scenario& scenario,
                  const std::vector<DdStepRecord>& steps, const MaterialDataSet& data,
                  const std::string& mode);

RunMeta read_run_meta(const std::string& dir);

/// Per-step state series re-read from a run directory (both kinds).
struct RunSeries {
  RunMeta meta;
  Eigen::VectorXd load_factor, reaction;  // per step
  Eigen::VectorXd rel_distance;           // dd runs; zero for references
  std::vector<Eigen::MatrixXd> Z;         // mechanical per-point states
  std::vector<Eigen::VectorXd> q;
  std::vector<Eigen::MatrixXd> nodal;     // columns: x[,y], fields...
  std::vector<std::string> nodal_columns;
  Eigen::VectorXd weights;                // per point
  Eigen::VectorXi element;                // parent element per point
};
RunSeries read_run(const std::string& dir, bool load_nodal = true);

ReferenceRun reference_run_from_series(const RunSeries& s);

std::string step_file(const std::string& dir, const std::string& prefix, int step);

}  // namespace ddmm

#endif
