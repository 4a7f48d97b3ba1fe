#include "ddmm/damage.hpp"

#include <Eigen/SparseCholesky>

#include "ddmm/assembly.hpp"
#include "ddmm/parallel.hpp"

namespace ddmm {

void DamageParams::validate() const {
  elastic.validate();
  if (!(w1 > 0)) throw ConfigError("damage threshold w1 must be positive");
  if (!(ell >= 0)) throw ConfigError("damage length scale must be >= 0");
  if (!(eta >= 0)) throw ConfigError("damage viscosity must be >= 0");
  if (!(alpha_cap > 0 && alpha_cap < 1)) throw ConfigError("alpha cap must lie in (0, 1)");
}

Eigen::VectorXd solve_bound_qp(const Eigen::SparseMatrix<double>& H, const Eigen::VectorXd& g,
                               const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                               const Eigen::VectorXd& x0, bool* converged) {
  const int n = static_cast<int>(g.size());
  Eigen::VectorXd x = x0.cwiseMax(lower).cwiseMin(upper);
  std::vector<int> state(n, 0);  // -1 at lower, +1 at upper, 0 free
  for (int i = 0; i < n; ++i) {
    if (upper(i) - lower(i) <= 0)
      state[i] = -1;
    else if (x(i) <= lower(i))
      state[i] = -1;
  }
  if (converged) *converged = false;

  for (int iter = 0; iter < 100; ++iter) {
    std::vector<int> free_ids;
    std::vector<int> full_to_red(n, -1);
    for (int i = 0; i < n; ++i)
      if (state[i] == 0) {
        full_to_red[i] = static_cast<int>(free_ids.size());
        free_ids.push_back(i);
      }
    for (int i = 0; i < n; ++i) x(i) = state[i] < 0 ? lower(i) : (state[i] > 0 ? upper(i) : x(i));

    if (!free_ids.empty()) {
      std::vector<Eigen::Triplet<double>> trips;
      Eigen::VectorXd rhs(free_ids.size());
      for (size_t r = 0; r < free_ids.size(); ++r) rhs(r) = g(free_ids[r]);
      for (int col = 0; col < H.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(H, col); it; ++it) {
          const int ri = full_to_red[it.row()], ci = full_to_red[it.col()];
          if (ri >= 0 && ci >= 0)
            trips.emplace_back(ri, ci, it.value());
          else if (ri >= 0)
            rhs(ri) -= it.value() * x(it.col());
        }
      Eigen::SparseMatrix<double> Hff(free_ids.size(), free_ids.size());
      Hff.setFromTriplets(trips.begin(), trips.end());
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> llt(Hff);
      if (llt.info() != Eigen::Success)
        throw SingularSystemError("bound-constrained solve: reduced system not SPD");
      const Eigen::VectorXd xf = llt.solve(rhs);
      for (size_t r = 0; r < free_ids.size(); ++r) x(free_ids[r]) = xf(r);
    }

    const Eigen::VectorXd grad = H * x - g;
    bool changed = false;
    const double tol = 1e-12 * (1.0 + grad.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
      if (upper(i) - lower(i) <= 0) continue;  // pinned
      if (state[i] == 0) {
        if (x(i) < lower(i)) {
          state[i] = -1;
          changed = true;
        } else if (x(i) > upper(i)) {
          state[i] = 1;
          changed = true;
        }
      } else if (state[i] < 0 && grad(i) < -tol) {
        state[i] = 0;
        changed = true;
      } else if (state[i] > 0 && grad(i) > tol) {
        state[i] = 0;
        changed = true;
      }
    }
    if (!changed) {
      if (converged) *converged = true;
      return x.cwiseMax(lower).cwiseMin(upper);
    }
  }
  return x.cwiseMax(lower).cwiseMin(upper);
}

namespace {

double point_alpha(const ElementOps& op, const Mesh& mesh, const Eigen::VectorXd& alpha) {
  return op.N_scalar * op.gather_scalar(alpha, mesh);
}

// Scalar-field mass contribution of one material point. Summing w N'N over
// the 2x2 Gauss points is already consistent for quads; the single-point 1D
// rule under-integrates the quadratic, so the exact two-node mass is used.
Eigen::MatrixXd point_scalar_mass(const ElementOps& op, const Mesh& mesh) {
  if (mesh.n == 1) {
    Eigen::MatrixXd m(2, 2);
    m << 1.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3;
    return op.weight * m;
  }
  return op.weight * (op.N_scalar.transpose() * op.N_scalar);
}

}  // namespace

ReferenceRun damage_solve_history(const Mesh& mesh, const LoadProgram& program,
                                  const DamageParams& params,
                                  const std::vector<int>& alpha_dirichlet_nodes) {
  params.validate();
  const SpaceConfig cfg = mesh.space();
  const ModuliSet base = microstrain_moduli(params.elastic, mesh.n);
  const auto ops = all_element_operators(mesh);
  const int M = mesh.num_points();
  const int N = mesh.num_nodes();
  DofPartition partition = DofPartition::make(mesh, program);

  // Damage bounds; Dirichlet nodes are pinned by equal bounds.
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(N);
  std::vector<char> alpha_pinned(N, 0);
  for (int nid : alpha_dirichlet_nodes) alpha_pinned.at(nid) = 1;

  // Gradient part of the damage Hessian is constant.
  std::vector<Eigen::Triplet<double>> grad_trips;
  const int npe = mesh.nodes_per_element();
  for (const auto& op : ops) {
    const Eigen::MatrixXd local =
        op.weight * params.w1 * params.ell * params.ell * (op.B_scalar.transpose() * op.B_scalar);
    for (int a = 0; a < npe; ++a)
      for (int b = 0; b < npe; ++b)
        grad_trips.emplace_back(mesh.elements(op.element, a), mesh.elements(op.element, b),
                                local(a, b));
  }
  Eigen::SparseMatrix<double> H_grad(N, N);
  H_grad.setFromTriplets(grad_trips.begin(), grad_trips.end());

  ReferenceRun run;
  run.cfg = cfg;
  run.steps.reserve(program.steps());

  Eigen::VectorXd fields = Eigen::VectorXd::Zero(mesh.total_dofs());
  Eigen::VectorXd fields_prev = fields;
  Eigen::VectorXd r_prev = Eigen::VectorXd::Zero(mesh.total_dofs());
  Eigen::VectorXd f_prev = Eigen::VectorXd::Zero(mesh.total_dofs());

  for (int k = 0; k < program.steps(); ++k) {
    partition.set_load_factor(program, program.factors[k]);
    const Eigen::VectorXd f_ext = program.external_forces(k);
    const Eigen::VectorXd alpha_step_prev = alpha;

    Eigen::VectorXd scale(M), psi0(M);
    bool converged = false;
    int stag = 0;
    for (; stag < params.max_stagger; ++stag) {
      // (i) elastic solve with damaged moduli
      par::parallel_for(M, [&](std::int64_t e) {
        const double a = point_alpha(ops[e], mesh, alpha);
        scale(e) = (1.0 - a) * (1.0 - a);
      });
      Eigen::SparseMatrix<double> K =
          assemble_stiffness(mesh, ops, base, &scale, nullptr, partition);
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> llt(K);
      if (llt.info() != Eigen::Success)
        throw SingularSystemError("damage elastic solve: factorization failed");
      const Eigen::VectorXd rhs = assemble_displacement_rhs(mesh, ops, base, &scale, partition,
                                                            nullptr, nullptr, nullptr, &f_ext);
      fields = partition.expand(llt.solve(rhs));

      // (ii) damage update: bound-constrained quadratic problem
      par::parallel_for(M, [&](std::int64_t e) {
        const StrainState s = evaluate_strains(ops[e], fields);
        psi0(e) = 0.5 * (s.eps.dot(base.C * s.eps) + s.gam.dot(base.D * s.gam) +
                         s.zet.dot(base.A * s.zet));
      });
      std::vector<Eigen::Triplet<double>> trips;
      Eigen::VectorXd g = Eigen::VectorXd::Zero(N);
      for (const auto& op : ops) {
        const double c = 2.0 * psi0(op.point) + 2.0 * params.w1 + params.eta;
        const Eigen::MatrixXd local = c * point_scalar_mass(op, mesh);
        const double a_prev = point_alpha(op, mesh, alpha_step_prev);
        const Eigen::VectorXd gl =
            op.weight * (2.0 * psi0(op.point) + params.eta * a_prev) * op.N_scalar.transpose();
        for (int a = 0; a < npe; ++a) {
          g(mesh.elements(op.element, a)) += gl(a);
          for (int b = 0; b < npe; ++b)
            trips.emplace_back(mesh.elements(op.element, a), mesh.elements(op.element, b),
                               local(a, b));
        }
      }
      Eigen::SparseMatrix<double> H(N, N);
      H.setFromTriplets(trips.begin(), trips.end());
      H += H_grad;

      Eigen::VectorXd lower = alpha_step_prev;
      Eigen::VectorXd upper = Eigen::VectorXd::Constant(N, params.alpha_cap);
      for (int i = 0; i < N; ++i)
        if (alpha_pinned[i]) lower(i) = upper(i) = 0.0;
      bool qp_ok = false;
      const Eigen::VectorXd alpha_new = solve_bound_qp(H, g, lower, upper, alpha, &qp_ok);

      const double delta = (alpha_new - alpha).cwiseAbs().maxCoeff();
      alpha = alpha_new;
      if (qp_ok && delta < params.stagger_tol) {
        converged = true;
        ++stag;
        break;
      }
    }

    ReferenceStep rec;
    rec.step = k + 1;
    rec.load_factor = program.factors[k];
    rec.fields = fields;
    rec.alpha = alpha;
    rec.inner_iterations = stag;
    rec.converged = converged;
    rec.Z.resize(M, cfg.z_dim());
    rec.q.resize(M);
    par::parallel_for(M, [&](std::int64_t e) {
      const ElementOps& op = ops[e];
      const double a = point_alpha(op, mesh, alpha);
      const double s = (1.0 - a) * (1.0 - a);
      const StrainState st = evaluate_strains(op, fields);
      rec.Z.row(e).segment(cfg.off_eps(), cfg.n_eps()) = st.eps;
      rec.Z.row(e).segment(cfg.off_gam(), cfg.n_chi()) = st.gam;
      rec.Z.row(e).segment(cfg.off_zet(), cfg.n_zeta()) = st.zet;
      rec.Z.row(e).segment(cfg.off_sig(), cfg.n_eps()) = s * (base.C * st.eps);
      rec.Z.row(e).segment(cfg.off_tau(), cfg.n_chi()) = s * (base.D * st.gam);
      rec.Z.row(e).segment(cfg.off_mu(), cfg.n_zeta()) = s * (base.A * st.zet);
      rec.q(e) = a;
    });

    const Eigen::VectorXd r = assemble_balance_residual(
        mesh, ops, rec.Z.middleCols(cfg.off_sig(), cfg.n_eps()),
        rec.Z.middleCols(cfg.off_tau(), cfg.n_chi()), rec.Z.middleCols(cfg.off_mu(), cfg.n_zeta()),
        f_ext);
    rec.reaction = reaction_force(mesh, program, r);

    // Energy audit: stored energy, dissipation increment, trapezoidal work.
    double energy = 0, dissipation = 0;
    for (const auto& op : ops) {
      const double a = point_alpha(op, mesh, alpha);
      const double a0 = point_alpha(op, mesh, alpha_step_prev);
      const Eigen::VectorXd grad_a = op.B_scalar * op.gather_scalar(alpha, mesh);
      energy += op.weight * ((1 - a) * (1 - a) * psi0(op.point) +
                             0.5 * params.w1 * params.ell * params.ell * grad_a.squaredNorm());
      // rate-independent part plus the viscous penalty actually dissipated
      dissipation += op.weight * (params.w1 * (a * a - a0 * a0) + params.eta * (a - a0) * (a - a0));
    }
    double work = 0;
    for (int i = 0; i < mesh.total_dofs(); ++i) {
      const double du = fields(i) - fields_prev(i);
      if (partition.is_constrained[i])
        work += 0.5 * (r(i) + r_prev(i) + f_ext(i) + f_prev(i)) * du;  // reaction work
      else
        work += 0.5 * (f_ext(i) + f_prev(i)) * du;
    }
    rec.energy = energy;
    rec.dissipation_inc = dissipation;
    rec.work_inc = work;
    fields_prev = fields;
    r_prev = r;
    f_prev = f_ext;
    run.steps.push_back(std::move(rec));
  }
  return run;
}

}  // namespace ddmm
