#ifndef DDMM_ASSEMBLY_HPP
#define DDMM_ASSEMBLY_HPP

#include <Eigen/Sparse>
#include <vector>

#include "ddmm/element_ops.hpp"
#include "ddmm/phase_space.hpp"

namespace ddmm {

/// Balance residual over the full combined dof space:
///   u rows:   sum_e w_e (B_eps^T sig_e + B_gam^T tau_e) - f_ext
///   chi rows: sum_e w_e (B_zeta^T mu_e - N_chi^T tau_e) - m_ext
/// Stress rows are per material point. Element contributions are computed in
/// parallel into per-element buffers and merged in fixed element order, so
/// the result is bit-stable for any worker count.
Eigen::VectorXd assemble_balance_residual(const Mesh& mesh, const std::vector<ElementOps>& ops,
                                          const Eigen::MatrixXd& sig, const Eigen::MatrixXd& tau,
                                          const Eigen::MatrixXd& mu, const Eigen::VectorXd& f_ext);

/// Coupled block stiffness over free dofs, in the symmetric normalization
///   [ B_eps^T C B_eps + B_gam^T D B_gam    -B_gam^T D N_chi                    ]
///   [ -N_chi^T D B_gam                     B_zeta^T A B_zeta + N_chi^T D N_chi ]
/// summed with the point weights. `scale` optionally multiplies all blocks of
/// a point (per-point metric/damage factor); `Cuu_override` replaces the
/// scaled C in the B_eps^T C B_eps term (algorithmic tangents).
Eigen::SparseMatrix<double> assemble_stiffness(const Mesh& mesh, const std::vector<ElementOps>& ops,
                                               const ModuliSet& base, const Eigen::VectorXd* scale,
                                               const std::vector<Eigen::MatrixXd>* Cuu_override,
                                               const DofPartition& partition);

/// Right-hand side of the displacement-type solve with Dirichlet elimination:
/// data terms for (eps*, gam*, zet*) (null pointers mean zero) plus external
/// forces, with the prescribed-value lift applied.
Eigen::VectorXd assemble_displacement_rhs(const Mesh& mesh, const std::vector<ElementOps>& ops,
                                          const ModuliSet& base, const Eigen::VectorXd* scale,
                                          const DofPartition& partition,
                                          const Eigen::MatrixXd* eps_star,
                                          const Eigen::MatrixXd* gam_star,
                                          const Eigen::MatrixXd* zet_star,
                                          const Eigen::VectorXd* f_ext);

}  // namespace ddmm

#endif
