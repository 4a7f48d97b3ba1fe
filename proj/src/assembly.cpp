#include "ddmm/assembly.hpp"

#include "ddmm/parallel.hpp"

namespace ddmm {

Eigen::VectorXd assemble_balance_residual(const Mesh& mesh, const std::vector<ElementOps>& ops,
                                          const Eigen::MatrixXd& sig, const Eigen::MatrixXd& tau,
                                          const Eigen::MatrixXd& mu, const Eigen::VectorXd& f_ext) {
  const int M = mesh.num_points();
  if (sig.rows() != M || tau.rows() != M || mu.rows() != M)
    throw MismatchError("assemble_balance_residual: stresses required at every material point");
  if (f_ext.size() != mesh.total_dofs())
    throw MismatchError("assemble_balance_residual: load vector size mismatch");

  const int ne = mesh.num_elements();
  const int ppe = mesh.points_per_element();
  std::vector<Eigen::VectorXd> local_u(ne), local_chi(ne);
  par::parallel_for(ne, [&](std::int64_t e) {
    Eigen::VectorXd ru = Eigen::VectorXd::Zero(ops[e * ppe].u_dofs.size());
    Eigen::VectorXd rc = Eigen::VectorXd::Zero(ops[e * ppe].chi_dofs.size());
    for (int g = 0; g < ppe; ++g) {
      const ElementOps& op = ops[e * ppe + g];
      ru.noalias() += op.weight * (op.B_eps.transpose() * sig.row(op.point).transpose() +
                                   op.B_gam.transpose() * tau.row(op.point).transpose());
      rc.noalias() += op.weight * (op.B_zeta.transpose() * mu.row(op.point).transpose() -
                                   op.N_chi.transpose() * tau.row(op.point).transpose());
    }
    local_u[e] = std::move(ru);
    local_chi[e] = std::move(rc);
  });

  Eigen::VectorXd r = -f_ext;
  for (int e = 0; e < ne; ++e) {
    const ElementOps& op = ops[e * ppe];
    for (size_t i = 0; i < op.u_dofs.size(); ++i) r(op.u_dofs[i]) += local_u[e](i);
    for (size_t i = 0; i < op.chi_dofs.size(); ++i) r(op.chi_dofs[i]) += local_chi[e](i);
  }
  return r;
}

namespace {

struct PointMaterial {
  const ModuliSet& base;
  const Eigen::VectorXd* scale;
  const std::vector<Eigen::MatrixXd>* Cuu_override;

  double s(int p) const { return scale ? (*scale)(p) : 1.0; }
  Eigen::MatrixXd Cuu(int p) const {
    if (Cuu_override) return (*Cuu_override)[p];
    return s(p) * base.C;
  }
};

}  // namespace

Eigen::SparseMatrix<double> assemble_stiffness(const Mesh& mesh, const std::vector<ElementOps>& ops,
                                               const ModuliSet& base, const Eigen::VectorXd* scale,
                                               const std::vector<Eigen::MatrixXd>* Cuu_override,
                                               const DofPartition& partition) {
  const int ne = mesh.num_elements();
  const int ppe = mesh.points_per_element();
  const PointMaterial mat{base, scale, Cuu_override};

  std::vector<Eigen::MatrixXd> local(ne);
  par::parallel_for(ne, [&](std::int64_t e) {
    const ElementOps& first = ops[e * ppe];
    const int nu = static_cast<int>(first.u_dofs.size());
    const int nc = static_cast<int>(first.chi_dofs.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nu + nc, nu + nc);
    for (int g = 0; g < ppe; ++g) {
      const ElementOps& op = ops[e * ppe + g];
      const double w = op.weight;
      const double s = mat.s(op.point);
      const Eigen::MatrixXd DBg = (s * base.D) * op.B_gam;
      const Eigen::MatrixXd DNc = (s * base.D) * op.N_chi;
      K.topLeftCorner(nu, nu).noalias() += w * (op.B_eps.transpose() * mat.Cuu(op.point) * op.B_eps);
      K.topLeftCorner(nu, nu).noalias() += w * (op.B_gam.transpose() * DBg);
      K.topRightCorner(nu, nc).noalias() -= w * (op.B_gam.transpose() * DNc);
      K.bottomLeftCorner(nc, nu).noalias() -= w * (op.N_chi.transpose() * DBg);
      K.bottomRightCorner(nc, nc).noalias() +=
          w * (op.B_zeta.transpose() * (s * base.A) * op.B_zeta + op.N_chi.transpose() * DNc);
    }
    local[e] = std::move(K);
  });

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(ne) * 400);
  for (int e = 0; e < ne; ++e) {
    const ElementOps& op = ops[e * ppe];
    const int nu = static_cast<int>(op.u_dofs.size());
    const int nc = static_cast<int>(op.chi_dofs.size());
    std::vector<int> dofs(nu + nc);
    for (int i = 0; i < nu; ++i) dofs[i] = op.u_dofs[i];
    for (int i = 0; i < nc; ++i) dofs[nu + i] = op.chi_dofs[i];
    for (int i = 0; i < nu + nc; ++i) {
      const int fi = partition.full_to_free[dofs[i]];
      if (fi < 0) continue;
      for (int j = 0; j < nu + nc; ++j) {
        const int fj = partition.full_to_free[dofs[j]];
        if (fj < 0) continue;
        trips.emplace_back(fi, fj, local[e](i, j));
      }
    }
  }
  Eigen::SparseMatrix<double> K(partition.free_count(), partition.free_count());
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

Eigen::VectorXd assemble_displacement_rhs(const Mesh& mesh, const std::vector<ElementOps>& ops,
                                          const ModuliSet& base, const Eigen::VectorXd* scale,
                                          const DofPartition& partition,
                                          const Eigen::MatrixXd* eps_star,
                                          const Eigen::MatrixXd* gam_star,
                                          const Eigen::MatrixXd* zet_star,
                                          const Eigen::VectorXd* f_ext) {
  const int ne = mesh.num_elements();
  const int ppe = mesh.points_per_element();
  const PointMaterial mat{base, scale, nullptr};
  const Eigen::VectorXd& xbar = partition.prescribed;

  std::vector<Eigen::VectorXd> local_u(ne), local_chi(ne);
  par::parallel_for(ne, [&](std::int64_t e) {
    const ElementOps& first = ops[e * ppe];
    Eigen::VectorXd ru = Eigen::VectorXd::Zero(first.u_dofs.size());
    Eigen::VectorXd rc = Eigen::VectorXd::Zero(first.chi_dofs.size());
    for (int g = 0; g < ppe; ++g) {
      const ElementOps& op = ops[e * ppe + g];
      const double w = op.weight;
      const double s = mat.s(op.point);
      const StrainState lift = evaluate_strains(op, xbar);
      Eigen::VectorXd de = -lift.eps;
      Eigen::VectorXd dg = -lift.gam;
      Eigen::VectorXd dz = -lift.zet;
      if (eps_star) de += eps_star->row(op.point).transpose();
      if (gam_star) dg += gam_star->row(op.point).transpose();
      if (zet_star) dz += zet_star->row(op.point).transpose();
      const Eigen::VectorXd Cde = s * (base.C * de);
      const Eigen::VectorXd Ddg = s * (base.D * dg);
      const Eigen::VectorXd Adz = s * (base.A * dz);
      ru.noalias() += w * (op.B_eps.transpose() * Cde + op.B_gam.transpose() * Ddg);
      rc.noalias() += w * (op.B_zeta.transpose() * Adz - op.N_chi.transpose() * Ddg);
    }
    local_u[e] = std::move(ru);
    local_chi[e] = std::move(rc);
  });

  Eigen::VectorXd full = Eigen::VectorXd::Zero(mesh.total_dofs());
  if (f_ext) full = *f_ext;
  for (int e = 0; e < ne; ++e) {
    const ElementOps& op = ops[e * ppe];
    for (size_t i = 0; i < op.u_dofs.size(); ++i) full(op.u_dofs[i]) += local_u[e](i);
    for (size_t i = 0; i < op.chi_dofs.size(); ++i) full(op.chi_dofs[i]) += local_chi[e](i);
  }
  return partition.restrict(full);
}

}  // namespace ddmm
