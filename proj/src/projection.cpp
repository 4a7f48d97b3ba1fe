#include "ddmm/projection.hpp"

#include "ddmm/parallel.hpp"

namespace ddmm {

ProjectionSystem ProjectionSystem::assemble(const Mesh& mesh, const std::vector<ElementOps>& ops,
                                            const MetricTensors& metric,
                                            const Eigen::VectorXd* scale,
                                            const DofPartition& partition) {
  ProjectionSystem s;
  s.mesh_ = &mesh;
  s.ops_ = &ops;
  s.metric_ = std::make_shared<MetricTensors>(metric);
  if (scale) {
    if (scale->size() != mesh.num_points())
      throw MismatchError("metric scale vector must have one entry per material point");
    s.scale_ = *scale;
  }
  s.K_ = assemble_stiffness(mesh, ops, metric.moduli(), scale ? &s.scale_ : nullptr, nullptr,
                            partition);
  s.factorization_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
  s.factorization_->compute(s.K_);
  if (s.factorization_->info() != Eigen::Success)
    throw SingularSystemError("projection system factorization failed");
  const Eigen::VectorXd d = s.factorization_->vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  int null_dim = 0;
  for (int i = 0; i < d.size(); ++i)
    if (!(d(i) > 1e-12 * dmax)) ++null_dim;
  if (null_dim > 0)
    throw SingularSystemError("projection system is constraint-deficient (null-space dimension " +
                              std::to_string(null_dim) + ")");
  return s;
}

Eigen::VectorXd ProjectionSystem::solve_free(const Eigen::VectorXd& rhs) const {
  return factorization_->solve(rhs);
}

Eigen::VectorXd ProjectionSystem::solve_displacement(const Eigen::MatrixXd& eps_star,
                                                     const Eigen::MatrixXd& gam_star,
                                                     const Eigen::MatrixXd& zet_star,
                                                     const DofPartition& partition) const {
  const Eigen::VectorXd rhs =
      assemble_displacement_rhs(*mesh_, *ops_, metric_->moduli(), scale_.size() ? &scale_ : nullptr,
                                partition, &eps_star, &gam_star, &zet_star, nullptr);
  return partition.expand(solve_free(rhs));
}

Eigen::VectorXd ProjectionSystem::solve_multiplier(const Eigen::MatrixXd& sig_star,
                                                   const Eigen::MatrixXd& tau_star,
                                                   const Eigen::MatrixXd& mu_star,
                                                   const Eigen::VectorXd& f_ext,
                                                   const DofPartition& partition) const {
  const Eigen::VectorXd r =
      assemble_balance_residual(*mesh_, *ops_, sig_star, tau_star, mu_star, f_ext);
  return partition.expand_zero(solve_free(-partition.restrict(r)));
}

Eigen::VectorXd ProjectionSystem::solve_elastic(const Eigen::VectorXd& f_ext,
                                                const DofPartition& partition) const {
  const Eigen::VectorXd rhs =
      assemble_displacement_rhs(*mesh_, *ops_, metric_->moduli(), scale_.size() ? &scale_ : nullptr,
                                partition, nullptr, nullptr, nullptr, &f_ext);
  return partition.expand(solve_free(rhs));
}

ProjectionResult project(const ProjectionSystem& system, const Mesh& mesh,
                         const std::vector<ElementOps>& ops, const Eigen::MatrixXd& Ystar,
                         const Eigen::VectorXd& f_ext, const DofPartition& partition) {
  const SpaceConfig cfg = mesh.space();
  const int M = mesh.num_points();
  if (Ystar.rows() != M || Ystar.cols() != cfg.z_dim())
    throw MismatchError("assigned data must cover every material point");

  const auto eps_star = Ystar.middleCols(cfg.off_eps(), cfg.n_eps());
  const auto gam_star = Ystar.middleCols(cfg.off_gam(), cfg.n_chi());
  const auto zet_star = Ystar.middleCols(cfg.off_zet(), cfg.n_zeta());
  const auto sig_star = Ystar.middleCols(cfg.off_sig(), cfg.n_eps());
  const auto tau_star = Ystar.middleCols(cfg.off_tau(), cfg.n_chi());
  const auto mu_star = Ystar.middleCols(cfg.off_mu(), cfg.n_zeta());

  ProjectionResult out;
  out.fields = system.solve_displacement(eps_star, gam_star, zet_star, partition);
  out.lambda = system.solve_multiplier(sig_star, tau_star, mu_star, f_ext, partition);

  const MetricTensors& m = system.metric();
  out.Z.resize(M, cfg.z_dim());
  par::parallel_for(M, [&](std::int64_t e) {
    const ElementOps& op = ops[e];
    const double s = system.scale_at(static_cast<int>(e));
    const StrainState strains = evaluate_strains(op, out.fields);
    const Eigen::VectorXd lu = op.gather_u(out.lambda);
    const Eigen::VectorXd lc = op.gather_chi(out.lambda);
    const Eigen::VectorXd sig = sig_star.row(e).transpose() + s * (m.C() * (op.B_eps * lu));
    const Eigen::VectorXd tau =
        tau_star.row(e).transpose() + s * (m.D() * (op.B_gam * lu - op.N_chi * lc));
    const Eigen::VectorXd mu = mu_star.row(e).transpose() + s * (m.A() * (op.B_zeta * lc));
    out.Z.row(e).segment(cfg.off_eps(), cfg.n_eps()) = strains.eps;
    out.Z.row(e).segment(cfg.off_gam(), cfg.n_chi()) = strains.gam;
    out.Z.row(e).segment(cfg.off_zet(), cfg.n_zeta()) = strains.zet;
    out.Z.row(e).segment(cfg.off_sig(), cfg.n_eps()) = sig;
    out.Z.row(e).segment(cfg.off_tau(), cfg.n_chi()) = tau;
    out.Z.row(e).segment(cfg.off_mu(), cfg.n_zeta()) = mu;
  });

  const Eigen::VectorXd r = assemble_balance_residual(
      mesh, ops, out.Z.middleCols(cfg.off_sig(), cfg.n_eps()),
      out.Z.middleCols(cfg.off_tau(), cfg.n_chi()), out.Z.middleCols(cfg.off_mu(), cfg.n_zeta()),
      f_ext);
  double ru = 0, rc = 0;
  for (int i = 0; i < mesh.total_dofs(); ++i) {
    if (partition.is_constrained[i]) continue;
    if (i < mesh.u_dofs())
      ru += r(i) * r(i);
    else
      rc += r(i) * r(i);
  }
  out.residual_u = std::sqrt(ru);
  out.residual_chi = std::sqrt(rc);
  return out;
}

}  // namespace ddmm
