#ifndef DDMM_PROJECTION_HPP
#define DDMM_PROJECTION_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>

#include "ddmm/assembly.hpp"

namespace ddmm {

/// The coupled SPD system behind the equilibrium projection. The same
/// factorization serves the (u, chi) solve driven by assigned strain data and
/// the multiplier solve driven by assigned stress data and loads, and is
/// reused across fixed-point iterations at a fixed metric.
class ProjectionSystem {
 public:
  /// `scale` optionally carries a per-point metric factor (secant schedule);
  /// it is copied. Throws SingularSystemError when constraints leave rigid
  /// modes (reports the number of zero pivots).
  static ProjectionSystem assemble(const Mesh& mesh, const std::vector<ElementOps>& ops,
                                   const MetricTensors& metric, const Eigen::VectorXd* scale,
                                   const DofPartition& partition);

  /// Nodal (u, chi) from assigned strain blocks; returns the full combined
  /// vector including prescribed values (partition state applies).
  Eigen::VectorXd solve_displacement(const Eigen::MatrixXd& eps_star,
                                     const Eigen::MatrixXd& gam_star,
                                     const Eigen::MatrixXd& zet_star,
                                     const DofPartition& partition) const;

  /// Multipliers (lambda_u, lambda_chi) from assigned stress blocks and
  /// loads; zero at constrained dofs.
  Eigen::VectorXd solve_multiplier(const Eigen::MatrixXd& sig_star, const Eigen::MatrixXd& tau_star,
                                   const Eigen::MatrixXd& mu_star, const Eigen::VectorXd& f_ext,
                                   const DofPartition& partition) const;

  /// Plain micromorphic elastic solve: loads + Dirichlet data only.
  Eigen::VectorXd solve_elastic(const Eigen::VectorXd& f_ext, const DofPartition& partition) const;

  const MetricTensors& metric() const { return *metric_; }
  const Eigen::VectorXd& scale() const { return scale_; }
  double scale_at(int point) const { return scale_.size() ? scale_(point) : 1.0; }

 private:
  Eigen::VectorXd solve_free(const Eigen::VectorXd& rhs) const;

  const Mesh* mesh_ = nullptr;
  const std::vector<ElementOps>* ops_ = nullptr;
  std::shared_ptr<const MetricTensors> metric_;
  Eigen::VectorXd scale_;
  Eigen::SparseMatrix<double> K_;
  // held by pointer: Eigen solver objects are pinned in place
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> factorization_;
};

/// Mechanical state z* and multipliers for a full set of assigned data.
struct ProjectionResult {
  Eigen::VectorXd fields;  // full combined (u, chi), prescribed values included
  Eigen::VectorXd lambda;  // full combined, zero at constrained dofs
  Eigen::MatrixXd Z;       // M x z_dim mechanical states
  double residual_u = 0, residual_chi = 0;  // free-dof balance residual norms
};

/// Solves both linear systems and assembles z* via the state update
/// (kinematics from the fields, stresses from data plus metric times the
/// multiplier gradients).
ProjectionResult project(const ProjectionSystem& system, const Mesh& mesh,
                         const std::vector<ElementOps>& ops, const Eigen::MatrixXd& Ystar,
                         const Eigen::VectorXd& f_ext, const DofPartition& partition);

}  // namespace ddmm

#endif
