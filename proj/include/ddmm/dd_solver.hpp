#ifndef DDMM_DD_SOLVER_HPP
#define DDMM_DD_SOLVER_HPP

#include <memory>
#include <unordered_map>
#include <optional>
#include <random>
#include <vector>

#include "ddmm/nn_index.hpp"
#include "ddmm/projection.hpp"

namespace ddmm {

struct MetricSchedule {
  bool secant = false;
  int activate_step = 0;  // secant factors applied from this step on
  double floor = 1e-3;
};

struct DdOptions {
  std::uint64_t seed = 42;
  int max_iter = 50;
  double tol_q = std::numeric_limits<double>::infinity();
  double fallback_fraction = 0.01;
  // Warm start of a new load step: keep the previous assignments, advance
  // each assigned datum along its source trajectory (same sampling point,
  // next load step), or run the first assignment pass on linearly
  // extrapolated states.
  enum class WarmStart { Hold, Advance, Extrapolate };
  WarmStart warm_start = WarmStart::Advance;
  // Relative slack for the seeded random draw among near-optimal candidates
  // in the very first assignment pass (the single shared data set is read
  // with no a-priori assignment; an exact argmin would start every point on
  // the same datum).
  double init_slack = 0.5;
  MetricSchedule schedule;
};

/// Converged state of one load step.
struct DdStepRecord {
  int step = 0;
  double load_factor = 0;
  Eigen::VectorXd fields;  // nodal (u, chi), combined layout
  Eigen::VectorXd lambda;
  Eigen::MatrixXd Z;         // mechanical states z*
  Eigen::VectorXi assignment;  // datum id per material point
  Eigen::VectorXd q;           // assigned internal-variable tags
  double distance_sq = 0;      // global ||z* - y*||^2
  double state_norm_sq = 0;    // global ||z*||^2
  int iterations = 0;
  bool converged = false;
  double reaction = 0;  // balance residual summed over driven Dirichlet dofs
  double residual_u = 0, residual_chi = 0;
  std::vector<double> iteration_distances;  // squared, one per fixed-point pass

  double relative_distance() const {
    return state_norm_sq > 0 ? std::sqrt(distance_sq / state_norm_sq) : 0.0;
  }
};

/// Alternating nearest-datum / equilibrium-projection solver over a load
/// history, with warm starts and the per-point irreversibility window.
class DdSolver {
 public:
  DdSolver(const Mesh& mesh, const LoadProgram& program, const MaterialDataSet& data,
           const MetricTensors& metric, DdOptions options);

  /// One assignment pass plus one projection from the given states.
  struct FixedPoint {
    Eigen::VectorXi assignment;
    ProjectionResult projection;
    double distance_sq = 0;
    bool assignments_unchanged = false;
  };
  FixedPoint fixed_point_step(const Eigen::MatrixXd& states, const Eigen::VectorXi& previous,
                              int step);

  DdStepRecord solve_step(int step);
  std::vector<DdStepRecord> solve_history();

  const Mesh& mesh() const { return *mesh_; }
  const std::vector<ElementOps>& ops() const { return ops_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& q_prev() const { return q_prev_; }
  const MetricTensors& metric() const { return metric_; }
  const Eigen::VectorXd& metric_scale() const { return scale_; }

 private:
  Eigen::VectorXi nearest_pass(const Eigen::MatrixXd& states, const Eigen::VectorXi& hints,
                               int step);
  Eigen::VectorXi initial_assignment(const Eigen::MatrixXd& states, int step);
  Eigen::MatrixXd gather(const Eigen::VectorXi& assignment) const;
  void refresh_metric(int step);

  const Mesh* mesh_;
  const LoadProgram* program_;
  const MaterialDataSet* data_;
  MetricTensors metric_;
  DdOptions options_;
  std::vector<ElementOps> ops_;
  Eigen::VectorXd weights_;
  DofPartition partition_;
  std::unique_ptr<NnIndex> index_;
  std::optional<ProjectionSystem> system_;
  Eigen::VectorXd scale_;  // per-point metric factors (secant schedule)
  bool scale_active_ = false;
  Eigen::VectorXd q_prev_;
  Eigen::VectorXi assignment_;
  Eigen::MatrixXd state_prev_, state_prev2_;  // for the extrapolated warm start
  std::unordered_map<long, int> row_of_;      // (src_point, src_step) -> row
  std::mt19937_64 rng_;
  std::vector<int> order_;
};

/// Standard (Cauchy) data-driven solver: phase space reduced to
/// (eps, sig + tau), only compatibility and stress balance enforced.
/// Records embed the reduced state into the full column convention with the
/// combined stress stored in the sig block and all other blocks zero.
std::vector<DdStepRecord> solve_history_cauchy(const Mesh& mesh, const LoadProgram& program,
                                               const MaterialDataSet& data,
                                               const MetricTensors& metric,
                                               const DdOptions& options);

}  // namespace ddmm

#endif
