#ifndef DDMM_REFERENCE_HPP
#define DDMM_REFERENCE_HPP

#include <string>
#include <vector>

#include "ddmm/dataset.hpp"
#include "ddmm/element_ops.hpp"

namespace ddmm {

/// One converged load step of a reference constitutive solve.
struct ReferenceStep {
  int step = 0;
  double load_factor = 0;
  Eigen::VectorXd fields;  // nodal (u, chi), combined layout
  Eigen::VectorXd alpha;   // nodal damage; empty for plasticity runs
  Eigen::MatrixXd Z;       // M x z_dim generalized states
  Eigen::VectorXd q;       // per-point internal variable (alpha or kappa)
  double reaction = 0;
  int inner_iterations = 0;
  bool converged = true;
  // Per-step energy audit (damage model): stored energy, dissipation
  // increment and external work increment.
  double energy = 0, dissipation_inc = 0, work_inc = 0;
};

struct ReferenceRun {
  SpaceConfig cfg;
  std::vector<ReferenceStep> steps;
  std::string units = "nondimensional";
};

/// Flattens a reference run into a material data set, keeping sampling
/// points with id % stride == 0 and all load steps of kept points.
MaterialDataSet export_dataset(const ReferenceRun& run, int stride);
void export_dataset(const ReferenceRun& run, int stride, const std::string& path);

}  // namespace ddmm

#endif
