#include "ddmm/plasticity.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "ddmm/assembly.hpp"
#include "ddmm/parallel.hpp"

namespace ddmm {

namespace {

const double kSqrt32 = std::sqrt(1.5);
const double kSqrt6 = std::sqrt(6.0);

Mandel6 identity6() {
  Mandel6 i;
  i << 1, 1, 1, 0, 0, 0;
  return i;
}

double trace(const Mandel6& v) { return v(0) + v(1) + v(2); }

Mandel6 deviator(const Mandel6& v) {
  Mandel6 d = v;
  const double p = trace(v) / 3.0;
  d(0) -= p;
  d(1) -= p;
  d(2) -= p;
  return d;
}

}  // namespace

void PlasticityParams::validate() const {
  elastic.validate();
  if (!(sigma_y >= 0)) throw ConfigError("yield strength must be >= 0");
  if (!(A_phi >= 0)) throw ConfigError("friction coefficient must be >= 0");
  if (!(A_theta >= 0 && A_theta <= A_phi))
    throw ConfigError("dilation coefficient must lie in [0, A_phi]");
  for (int i = 0; i < 4; ++i)
    if (a[i] != 0)
      throw ConfigError("a1..a4 must vanish in the validated regime (general couplings are "
                        "housed but not solved)");
}

double dp_yield(const Mandel6& sig, const PlasticityParams& p) {
  return kSqrt32 * deviator(sig).norm() + p.A_phi * trace(sig) - p.sigma_y;
}

double dp_potential(const Mandel6& sig, const PlasticityParams& p) {
  return kSqrt32 * deviator(sig).norm() + p.A_theta * trace(sig) - p.sigma_y;
}

Mandel6 plane_strain_to_3d(const Eigen::Vector3d& v) {
  Mandel6 out = Mandel6::Zero();
  out(0) = v(0);
  out(1) = v(1);
  out(3) = v(2);
  return out;
}

Eigen::Vector3d in_plane(const Mandel6& v) { return Eigen::Vector3d(v(0), v(1), v(3)); }

ReturnMapResult dp_return_map(const Mandel6& eps_total, const Mandel6& eps_p_prev,
                              const PlasticityParams& p) {
  const double G = p.elastic.shear_modulus();
  const double K = p.bulk_modulus();
  const Mandel6 i6 = identity6();
  const Tangent6 Ivol = i6 * i6.transpose() / 3.0;
  const Tangent6 Idev = Tangent6::Identity() - Ivol;
  const Tangent6 C_el = 3.0 * K * Ivol + 2.0 * G * Idev;

  ReturnMapResult out;
  const Mandel6 eps_e_tr = eps_total - eps_p_prev;
  const Mandel6 sig_tr = C_el * eps_e_tr;
  const double f_tr = dp_yield(sig_tr, p);
  if (f_tr <= 0) {
    out.sig = sig_tr;
    out.eps_p = eps_p_prev;
    out.tangent = C_el;
    return out;
  }
  out.plastic = true;

  const Mandel6 s_tr = deviator(sig_tr);
  const double r_tr = s_tr.norm();
  const double den = 3.0 * G + 9.0 * K * p.A_phi * p.A_theta;
  const double dlam = f_tr / den;

  if (r_tr - kSqrt6 * G * dlam >= 0) {
    const Mandel6 n = s_tr / r_tr;
    const Mandel6 deps_p = dlam * (kSqrt32 * n + p.A_theta * i6);
    out.sig = sig_tr - 2.0 * G * kSqrt32 * dlam * n - 3.0 * K * p.A_theta * dlam * i6;
    out.eps_p = eps_p_prev + deps_p;
    out.dkappa = std::sqrt(2.0 / 3.0) * deps_p.norm();
    out.dlambda = dlam;
    const Mandel6 flow = kSqrt6 * G * n + 3.0 * K * p.A_theta * i6;
    const Mandel6 grad = kSqrt6 * G * n + 3.0 * K * p.A_phi * i6;
    out.tangent = C_el - flow * grad.transpose() / den -
                  (kSqrt6 * G * dlam) * (2.0 * G / r_tr) * (Idev - n * n.transpose());
    return out;
  }

  // Apex projection: deviatoric trial collapses, return to tr sig = sigma_y / A_phi.
  out.apex = true;
  if (!(p.A_phi > 0)) throw Error("apex return undefined for vanishing friction");
  out.sig = (p.sigma_y / (3.0 * p.A_phi)) * i6;
  const Mandel6 eps_e_new = out.sig(0) / (3.0 * K) * i6;
  const Mandel6 deps_p = eps_e_tr - eps_e_new;
  out.eps_p = eps_p_prev + deps_p;
  out.dkappa = std::sqrt(2.0 / 3.0) * deps_p.norm();
  out.dlambda = deps_p.norm();
  out.tangent = 1e-8 * C_el;  // keeps the Newton matrix regular at the apex
  return out;
}

ReferenceRun plastic_solve_history(const Mesh& mesh, const LoadProgram& program,
                                   const PlasticityParams& params) {
  params.validate();
  if (mesh.n != 2)
    throw ConfigError("the plasticity reference solver is implemented for plane strain");
  const SpaceConfig cfg = mesh.space();
  const ModuliSet base = microstrain_moduli(params.elastic, mesh.n);
  const auto ops = all_element_operators(mesh);
  const int M = mesh.num_points();
  DofPartition partition = DofPartition::make(mesh, program);

  Eigen::MatrixXd eps_p = Eigen::MatrixXd::Zero(M, 6);
  Eigen::VectorXd kappa = Eigen::VectorXd::Zero(M);
  Eigen::VectorXd fields = Eigen::VectorXd::Zero(mesh.total_dofs());

  ReferenceRun run;
  run.cfg = cfg;
  run.steps.reserve(program.steps());

  std::vector<Eigen::MatrixXd> tangents(M);
  std::vector<ReturnMapResult> maps(M);
  for (int k = 0; k < program.steps(); ++k) {
    partition.set_load_factor(program, program.factors[k]);
    const Eigen::VectorXd f_ext = program.external_forces(k);
    // keep prescribed values current in the iterate
    fields = partition.expand(partition.restrict(fields));

    const double f_ref = std::max(f_ext.norm(), 1e-12);
    bool converged = false;
    int it = 0;
    for (; it < params.newton_max; ++it) {
      Eigen::MatrixXd sig(M, cfg.n_eps()), tau(M, cfg.n_chi()), mu(M, cfg.n_zeta());
      par::parallel_for(M, [&](std::int64_t e) {
        const StrainState st = evaluate_strains(ops[e], fields);
        maps[e] = dp_return_map(plane_strain_to_3d(st.eps), eps_p.row(e).transpose(), params);
        sig.row(e) = in_plane(maps[e].sig).transpose();
        tau.row(e) = (base.D * st.gam).transpose();
        mu.row(e) = (base.A * st.zet).transpose();
        Eigen::MatrixXd t(3, 3);
        const int idx[3] = {0, 1, 3};
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) t(a, b) = maps[e].tangent(idx[a], idx[b]);
        tangents[e] = t;
      });
      const Eigen::VectorXd r = assemble_balance_residual(mesh, ops, sig, tau, mu, f_ext);
      const Eigen::VectorXd r_free = partition.restrict(r);
      if (r_free.norm() <= params.newton_tol * f_ref) {
        converged = true;
        break;
      }
      const Eigen::SparseMatrix<double> K =
          assemble_stiffness(mesh, ops, base, nullptr, &tangents, partition);
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(K);
      if (lu.info() != Eigen::Success)
        throw SingularSystemError("plasticity Newton: factorization failed at step " +
                                  std::to_string(k + 1));
      const Eigen::VectorXd delta = lu.solve(-r_free);
      fields = partition.expand(partition.restrict(fields) + delta);
    }
    if (!converged)
      throw Error("plasticity Newton did not converge at step " + std::to_string(k + 1) +
                  " (flagged point/step)");

    // Commit plastic state and export.
    ReferenceStep rec;
    rec.step = k + 1;
    rec.load_factor = program.factors[k];
    rec.fields = fields;
    rec.inner_iterations = it;
    rec.converged = converged;
    rec.Z.resize(M, cfg.z_dim());
    rec.q.resize(M);
    par::parallel_for(M, [&](std::int64_t e) {
      const StrainState st = evaluate_strains(ops[e], fields);
      const ReturnMapResult& rm = maps[e];
      eps_p.row(e) = rm.eps_p.transpose();
      kappa(e) += rm.dkappa;
      rec.Z.row(e).segment(cfg.off_eps(), cfg.n_eps()) = st.eps;
      rec.Z.row(e).segment(cfg.off_gam(), cfg.n_chi()) = st.gam;
      rec.Z.row(e).segment(cfg.off_zet(), cfg.n_zeta()) = st.zet;
      rec.Z.row(e).segment(cfg.off_sig(), cfg.n_eps()) = in_plane(rm.sig);
      rec.Z.row(e).segment(cfg.off_tau(), cfg.n_chi()) = base.D * st.gam;
      rec.Z.row(e).segment(cfg.off_mu(), cfg.n_zeta()) = base.A * st.zet;
      rec.q(e) = kappa(e);
    });
    const Eigen::VectorXd r = assemble_balance_residual(
        mesh, ops, rec.Z.middleCols(cfg.off_sig(), cfg.n_eps()),
        rec.Z.middleCols(cfg.off_tau(), cfg.n_chi()), rec.Z.middleCols(cfg.off_mu(), cfg.n_zeta()),
        f_ext);
    rec.reaction = reaction_force(mesh, program, r);
    run.steps.push_back(std::move(rec));
  }
  return run;
}

}  // namespace ddmm
