#ifndef DDMM_DAMAGE_HPP
#define DDMM_DAMAGE_HPP

#include <Eigen/Sparse>

#include "ddmm/phase_space.hpp"
#include "ddmm/reference.hpp"

namespace ddmm {

/// Gradient damage with micromorphic elasticity: quadratic dissipation
/// w(alpha) = w1 alpha^2 and damaged tensors (1 - alpha)^2 {C, D, A}.
struct DamageParams {
  ElasticityParams elastic;
  double w1 = 1.0;       // energy density dissipated at full damage
  double ell = 0.1;      // damage length scale
  double eta = 0.0;      // per-step damage rate penalty (viscosity)
  double stagger_tol = 1e-8;
  int max_stagger = 5000;
  // Keeps the damaged stiffness factor (1 - alpha)^2 strictly positive.
  double alpha_cap = 1.0 - 1e-4;

  void validate() const;
};

/// Staggered solve of a load history: alternating linear solves with damaged
/// moduli and bound-constrained damage updates honoring irreversibility.
/// `alpha_dirichlet_nodes` pins alpha = 0 at the listed nodes.
ReferenceRun damage_solve_history(const Mesh& mesh, const LoadProgram& program,
                                  const DamageParams& params,
                                  const std::vector<int>& alpha_dirichlet_nodes = {});

/// min 1/2 x'Hx - g'x subject to lower <= x <= upper (componentwise; equal
/// bounds pin a dof). Primal-dual active set on an SPD H.
Eigen::VectorXd solve_bound_qp(const Eigen::SparseMatrix<double>& H, const Eigen::VectorXd& g,
                               const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                               const Eigen::VectorXd& x0, bool* converged = nullptr);

}  // namespace ddmm

#endif
