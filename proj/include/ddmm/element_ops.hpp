#ifndef DDMM_ELEMENT_OPS_HPP
#define DDMM_ELEMENT_OPS_HPP

#include <Eigen/Dense>
#include <vector>

#include "ddmm/mesh.hpp"

namespace ddmm {

/// Discrete operators of one material point. The B/N matrices act on the
/// element-local dof vectors gathered from the full nodal vectors, so
/// prescribed (Dirichlet) values enter through the gather; the g_u/g_chi
/// offsets are those same operators applied to the prescribed part only.
struct ElementOps {
  int point = 0;    // material point id
  int element = 0;  // parent element
  double weight = 0;

  Eigen::MatrixXd B_eps;   // n_eps  x (n * nodes_per_element)
  Eigen::MatrixXd B_gam;   // n_chi  x (n * nodes_per_element)
  Eigen::MatrixXd N_chi;   // n_chi  x (n_chi * nodes_per_element)
  Eigen::MatrixXd B_zeta;  // n_zeta x (n_chi * nodes_per_element)

  // Scalar-field interpolation at this point (used by the damage solver).
  Eigen::RowVectorXd N_scalar;  // 1 x nodes_per_element
  Eigen::MatrixXd B_scalar;     // n x nodes_per_element

  std::vector<int> u_dofs;    // combined dof ids
  std::vector<int> chi_dofs;  // combined dof ids

  Eigen::VectorXd gather_u(const Eigen::VectorXd& full) const;
  Eigen::VectorXd gather_chi(const Eigen::VectorXd& full) const;
  Eigen::VectorXd gather_scalar(const Eigen::VectorXd& nodal, const Mesh& mesh) const;

  /// Dirichlet offsets: operators applied to the prescribed part of the
  /// combined dof vector.
  Eigen::VectorXd g_u(const Eigen::VectorXd& prescribed) const { return B_eps * gather_u(prescribed); }
  Eigen::VectorXd g_chi(const Eigen::VectorXd& prescribed) const {
    return B_zeta * gather_chi(prescribed);
  }
};

ElementOps element_operators(const Mesh& mesh, int material_point, MicroSymmetry sym);

/// Operators for every material point, in point order.
std::vector<ElementOps> all_element_operators(const Mesh& mesh);

/// Generalized strains at one point from full nodal vectors (combined dof
/// layout): eps = B_eps u, gam = B_gam u - N_chi chi, zet = B_zeta chi.
struct StrainState {
  Eigen::VectorXd eps, gam, zet;
};
StrainState evaluate_strains(const ElementOps& ops, const Eigen::VectorXd& full_dofs);

}  // namespace ddmm

#endif
