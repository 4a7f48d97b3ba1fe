#include "ddmm/dd_solver.hpp"

#include <algorithm>
#include <random>

#include "ddmm/parallel.hpp"

namespace ddmm {

DdSolver::DdSolver(const Mesh& mesh, const LoadProgram& program, const MaterialDataSet& data,
                   const MetricTensors& metric, DdOptions options)
    : mesh_(&mesh),
      program_(&program),
      data_(&data),
      metric_(metric),
      options_(options),
      rng_(options.seed) {
  if (!(data.cfg == mesh.space()))
    throw MismatchError("dataset configuration does not match the mesh");
  if (!(options_.tol_q >= 0)) throw ConfigError("tol_q must be >= 0");
  ops_ = all_element_operators(mesh);
  weights_.resize(mesh.num_points());
  for (int e = 0; e < mesh.num_points(); ++e) weights_(e) = ops_[e].weight;
  partition_ = DofPartition::make(mesh, program);
  index_ = std::make_unique<NnIndex>(NnIndex::build(data, metric, options.seed));
  index_->fallback_fraction = options_.fallback_fraction;
  scale_ = Eigen::VectorXd::Ones(mesh.num_points());
  q_prev_ = Eigen::VectorXd::Zero(mesh.num_points());
  assignment_ = Eigen::VectorXi::Constant(mesh.num_points(), -1);
  order_.resize(mesh.num_points());
  for (int e = 0; e < mesh.num_points(); ++e) order_[e] = e;
  row_of_.reserve(data.size());
  for (int r = 0; r < data.size(); ++r)
    row_of_[(static_cast<long>(data.src_point(r)) << 24) | data.src_step(r)] = r;
}

Eigen::VectorXi DdSolver::initial_assignment(const Eigen::MatrixXd& states, int step) {
  const int M = mesh_->num_points();
  // candidates: the earliest exported load states inside the window (virgin
  // data); the random near-tie draw below spreads the start across sampling
  // points without seeding the irreversibility ratchet ahead
  const int first_step = data_->src_step.minCoeff();
  std::vector<int> admissible;
  for (int r = 0; r < data_->size(); ++r)
    if (data_->src_step(r) == first_step && data_->q(r) >= 0 && data_->q(r) <= options_.tol_q)
      admissible.push_back(r);
  if (admissible.empty())
    for (int r = 0; r < data_->size(); ++r)
      if (data_->q(r) >= 0 && data_->q(r) <= options_.tol_q) admissible.push_back(r);
  if (admissible.empty())
    throw StarvationError("step " + std::to_string(step) +
                          ": no datum admissible for the initial assignment");
  Eigen::VectorXi out(M);
  std::vector<double> d2(admissible.size());
  for (int e = 0; e < M; ++e) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < admissible.size(); ++i) {
      d2[i] = local_distance_sq(states.row(e).transpose(),
                                data_->Z.row(admissible[i]).transpose(), metric_, data_->cfg);
      best = std::min(best, d2[i]);
    }
    const double cut = best * (1.0 + options_.init_slack) + 1e-300;
    std::vector<int> ties;
    for (size_t i = 0; i < admissible.size(); ++i)
      if (d2[i] <= cut) ties.push_back(admissible[i]);
    std::uniform_int_distribution<size_t> pick(0, ties.size() - 1);
    out(e) = ties[pick(rng_)];
  }
  return out;
}

Eigen::MatrixXd DdSolver::gather(const Eigen::VectorXi& assignment) const {
  Eigen::MatrixXd Y(mesh_->num_points(), data_->cfg.z_dim());
  for (int e = 0; e < mesh_->num_points(); ++e) Y.row(e) = data_->Z.row(assignment(e));
  return Y;
}

Eigen::VectorXi DdSolver::nearest_pass(const Eigen::MatrixXd& states, const Eigen::VectorXi& hints,
                                       int step) {
  const int M = mesh_->num_points();
  // The paper reads the points in a random order; the per-point argmin is
  // order-independent, so this only fixes the traversal for reproducibility.
  std::shuffle(order_.begin(), order_.end(), rng_);
  Eigen::VectorXi out(M);
  std::vector<int> starved;
  std::vector<char> starved_flag(M, 0);
  par::parallel_for(M, [&](std::int64_t i) {
    const int e = order_[i];
    const int hint = hints.size() == M ? hints(e) : -1;
    try {
      const double s = scale_active_ ? scale_(e) : 1.0;
      const auto r = index_->nearest(states.row(e).transpose(), s, 1.0 / s, q_prev_(e),
                                     q_prev_(e) + options_.tol_q, hint);
      out(e) = r.index;
    } catch (const StarvationError&) {
      starved_flag[e] = 1;
    }
  });
  for (int e = 0; e < M; ++e)
    if (starved_flag[e]) starved.push_back(e);
  if (!starved.empty())
    throw StarvationError("step " + std::to_string(step) + ": no admissible datum for material point " +
                          std::to_string(starved.front()) + " (window [" +
                          std::to_string(q_prev_(starved.front())) + ", " +
                          std::to_string(q_prev_(starved.front()) + options_.tol_q) +
                          "]; tol_q too small or data too sparse)");
  return out;
}

void DdSolver::refresh_metric(int step) {
  const bool want_secant = options_.schedule.secant && step >= options_.schedule.activate_step &&
                           assignment_.minCoeff() >= 0;
  if (want_secant) {
    for (int e = 0; e < mesh_->num_points(); ++e)
      scale_(e) = secant_factor(data_->Z.row(assignment_(e)).transpose(), metric_, data_->cfg,
                                options_.schedule.floor);
    scale_active_ = true;
    system_.emplace(ProjectionSystem::assemble(*mesh_, ops_, metric_, &scale_, partition_));
    return;
  }
  if (!system_)
    system_.emplace(ProjectionSystem::assemble(*mesh_, ops_, metric_, nullptr, partition_));
}

DdSolver::FixedPoint DdSolver::fixed_point_step(const Eigen::MatrixXd& states,
                                                const Eigen::VectorXi& previous, int step) {
  FixedPoint fp;
  fp.assignment = nearest_pass(states, previous, step);
  fp.assignments_unchanged = previous.size() == fp.assignment.size() && previous == fp.assignment;
  const Eigen::MatrixXd Y = gather(fp.assignment);
  fp.projection = project(*system_, *mesh_, ops_, Y, program_->external_forces(step), partition_);
  fp.distance_sq = global_distance_sq(fp.projection.Z, Y, metric_, data_->cfg, weights_,
                                      scale_active_ ? &scale_ : nullptr);
  return fp;
}

DdStepRecord DdSolver::solve_step(int step) {
  partition_.set_load_factor(*program_, program_->factors.at(step));
  refresh_metric(step);
  const Eigen::VectorXd f_ext = program_->external_forces(step);

  // Warm start: previous assignments, advanced along the data trajectories,
  // or refreshed through a pass over linearly extrapolated states. The first
  // step draws admissible data at random: the points read a single shared
  // set with no a-priori assignment, and an undeformed state gives every
  // point the same query, which would collapse the start onto one datum.
  Eigen::VectorXi warm = assignment_;
  if (assignment_.minCoeff() < 0) {
    const Eigen::MatrixXd Yz = Eigen::MatrixXd::Zero(mesh_->num_points(), data_->cfg.z_dim());
    const ProjectionResult p0 = project(*system_, *mesh_, ops_, Yz, f_ext, partition_);
    warm = initial_assignment(p0.Z, step);
  } else if (options_.warm_start == DdOptions::WarmStart::Advance && assignment_.minCoeff() >= 0) {
    for (int e = 0; e < warm.size(); ++e) {
      // guess that each point's material keeps following its assigned
      // datum's source trajectory, one load step at a time
      const int r = assignment_(e);
      const auto it = row_of_.find(
          (static_cast<long>(data_->src_point(r)) << 24) | (data_->src_step(r) + 1));
      if (it == row_of_.end()) continue;
      const double dq = data_->q(it->second) - q_prev_(e);
      if (dq >= 0 && dq <= options_.tol_q) warm(e) = it->second;
    }
  } else if (options_.warm_start == DdOptions::WarmStart::Extrapolate && state_prev_.size() > 0) {
    const Eigen::MatrixXd guess =
        state_prev2_.size() > 0 ? (2.0 * state_prev_ - state_prev2_).eval() : state_prev_;
    warm = nearest_pass(guess, assignment_, step);
  }
  const Eigen::MatrixXd Y0 = gather(warm);
  ProjectionResult proj = project(*system_, *mesh_, ops_, Y0, f_ext, partition_);

  DdStepRecord rec;
  rec.step = step;
  rec.load_factor = program_->factors[step];
  Eigen::VectorXi prev = warm;
  Eigen::MatrixXd states = proj.Z;
  double distance_sq = 0;
  rec.converged = false;
  for (int it = 0; it < options_.max_iter; ++it) {
    Eigen::VectorXi guess = prev;
    if (it > 0 && options_.warm_start == DdOptions::WarmStart::Advance) {
      // lagging points re-propose their trajectory's next row; the
      // assignment pass keeps or rejects each proposal
      for (int e = 0; e < guess.size(); ++e) {
        const int r = prev(e);
        if (data_->src_step(r) > step) continue;  // catch-up only
        const auto itr = row_of_.find(
            (static_cast<long>(data_->src_point(r)) << 24) | (data_->src_step(r) + 1));
        if (itr == row_of_.end()) continue;
        const double dq = data_->q(itr->second) - q_prev_(e);
        if (dq >= 0 && dq <= options_.tol_q) guess(e) = itr->second;
      }
      if (guess != prev) {
        const ProjectionResult pg = project(*system_, *mesh_, ops_, gather(guess),
                                            program_->external_forces(step), partition_);
        states = pg.Z;
      }
    }
    FixedPoint fp = fixed_point_step(states, guess, step);
    rec.iterations = it + 1;
    distance_sq = fp.distance_sq;
    rec.iteration_distances.push_back(fp.distance_sq);
    states = fp.projection.Z;
    proj = std::move(fp.projection);
    // converged when an assignment pass reproduces the previous pass
    if (fp.assignment == prev) {
      prev = fp.assignment;
      rec.converged = true;
      break;
    }
    prev = fp.assignment;
  }

  rec.fields = proj.fields;
  rec.lambda = proj.lambda;
  rec.Z = states;
  rec.assignment = prev;
  rec.q.resize(prev.size());
  for (int e = 0; e < prev.size(); ++e) rec.q(e) = data_->q(prev(e));
  rec.distance_sq = distance_sq;
  rec.state_norm_sq =
      global_distance_sq(states, Eigen::MatrixXd::Zero(states.rows(), states.cols()), metric_,
                         data_->cfg, weights_, scale_active_ ? &scale_ : nullptr);
  rec.residual_u = proj.residual_u;
  rec.residual_chi = proj.residual_chi;
  const SpaceConfig cfg = data_->cfg;
  const Eigen::VectorXd r = assemble_balance_residual(
      *mesh_, ops_, states.middleCols(cfg.off_sig(), cfg.n_eps()),
      states.middleCols(cfg.off_tau(), cfg.n_chi()), states.middleCols(cfg.off_mu(), cfg.n_zeta()),
      f_ext);
  rec.reaction = reaction_force(*mesh_, *program_, r);

  assignment_ = prev;
  q_prev_ = rec.q;
  state_prev2_ = state_prev_;
  state_prev_ = rec.Z;
  return rec;
}

std::vector<DdStepRecord> DdSolver::solve_history() {
  std::vector<DdStepRecord> out;
  out.reserve(program_->steps());
  for (int k = 0; k < program_->steps(); ++k) out.push_back(solve_step(k));
  return out;
}

// ---------------------------------------------------------------------------
// Cauchy subcase: phase space (eps, sig + tau), stress balance only.

namespace {

struct CauchySolver {
  const Mesh& mesh;
  const LoadProgram& program;
  const MaterialDataSet& data;
  const MetricTensors& metric;
  const DdOptions& options;

  SpaceConfig cfg;
  int ne = 0;  // n_eps
  std::vector<ElementOps> ops;
  Eigen::VectorXd weights;
  Eigen::MatrixXd Zc;  // reduced data (eps, sig+tau)
  std::unique_ptr<NnIndex> index;

  // u-only partition
  std::vector<int> full_to_free;
  std::vector<int> free_to_full;
  Eigen::VectorXd prescribed;
  Eigen::SparseMatrix<double> K;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> llt;

  Eigen::VectorXd q_prev;
  Eigen::VectorXi assignment;
  std::mt19937_64 rng;
  std::vector<int> order;
  std::unordered_map<long, int> row_of;

  CauchySolver(const Mesh& mesh_, const LoadProgram& program_, const MaterialDataSet& data_,
               const MetricTensors& metric_, const DdOptions& options_)
      : mesh(mesh_), program(program_), data(data_), metric(metric_), options(options_),
        rng(options_.seed) {
    cfg = mesh.space();
    ne = cfg.n_eps();
    ops = all_element_operators(mesh);
    const int M = mesh.num_points();
    weights.resize(M);
    for (int e = 0; e < M; ++e) weights(e) = ops[e].weight;

    Zc.resize(data.size(), 2 * ne);
    Zc.leftCols(ne) = data.Z.middleCols(cfg.off_eps(), ne);
    Zc.rightCols(ne) = data.Z.middleCols(cfg.off_sig(), ne) + data.Z.middleCols(cfg.off_tau(), ne);
    index = std::make_unique<NnIndex>(NnIndex::build_blocks(Zc, data.q, {metric.C()}, options.seed));
    index->fallback_fraction = options.fallback_fraction;

    const int nu = mesh.u_dofs();
    std::vector<char> constrained(nu, 0);
    for (const auto& d : program.dirichlet)
      if (d.dof < nu) constrained[d.dof] = 1;
    full_to_free.assign(nu, -1);
    for (int i = 0; i < nu; ++i)
      if (!constrained[i]) {
        full_to_free[i] = static_cast<int>(free_to_full.size());
        free_to_full.push_back(i);
      }
    prescribed = Eigen::VectorXd::Zero(nu);

    std::vector<Eigen::Triplet<double>> trips;
    for (const auto& op : ops) {
      const Eigen::MatrixXd Ke = op.weight * (op.B_eps.transpose() * metric.C() * op.B_eps);
      for (size_t i = 0; i < op.u_dofs.size(); ++i) {
        const int fi = full_to_free[op.u_dofs[i]];
        if (fi < 0) continue;
        for (size_t j = 0; j < op.u_dofs.size(); ++j) {
          const int fj = full_to_free[op.u_dofs[j]];
          if (fj >= 0) trips.emplace_back(fi, fj, Ke(i, j));
        }
      }
    }
    K.resize(static_cast<int>(free_to_full.size()), static_cast<int>(free_to_full.size()));
    K.setFromTriplets(trips.begin(), trips.end());
    llt.compute(K);
    if (llt.info() != Eigen::Success)
      throw SingularSystemError("Cauchy projection system factorization failed");
    const Eigen::VectorXd dv = llt.vectorD();
    const double dmax = dv.cwiseAbs().maxCoeff();
    int null_dim = 0;
    for (int i = 0; i < dv.size(); ++i)
      if (!(dv(i) > 1e-12 * dmax)) ++null_dim;
    if (null_dim > 0)
      throw SingularSystemError("Cauchy projection system is constraint-deficient (null-space dimension " +
                                std::to_string(null_dim) + ")");

    q_prev = Eigen::VectorXd::Zero(M);
    assignment = Eigen::VectorXi::Constant(M, -1);
    order.resize(M);
    for (int e = 0; e < M; ++e) order[e] = e;
    row_of.reserve(data.size());
    for (int r = 0; r < data.size(); ++r)
      row_of[(static_cast<long>(data.src_point(r)) << 24) | data.src_step(r)] = r;
  }

  Eigen::VectorXd gather_u(const ElementOps& op, const Eigen::VectorXd& full) const {
    Eigen::VectorXd v(op.u_dofs.size());
    for (size_t i = 0; i < op.u_dofs.size(); ++i) v(i) = full(op.u_dofs[i]);
    return v;
  }

  // One projection: (u, lambda, states) from assigned reduced data.
  struct Proj {
    Eigen::VectorXd u, lambda;   // u-space, full sized
    Eigen::MatrixXd Zs;          // M x 2*ne reduced mechanical states
    double residual = 0;
  };

  Proj project_assigned(const Eigen::MatrixXd& Ystar, int step) const {
    const int M = mesh.num_points();
    const Eigen::VectorXd f_ext = program.external_forces(step);
    Eigen::VectorXd rhs_d = Eigen::VectorXd::Zero(free_to_full.size());
    Eigen::VectorXd rhs_l = Eigen::VectorXd::Zero(free_to_full.size());
    for (const auto& op : ops) {
      const Eigen::VectorXd xbar = gather_u(op, prescribed);
      const Eigen::VectorXd de = Ystar.row(op.point).head(ne).transpose() - op.B_eps * xbar;
      const Eigen::VectorXd ru = op.weight * (op.B_eps.transpose() * (metric.C() * de));
      const Eigen::VectorXd rl =
          op.weight * (op.B_eps.transpose() * Ystar.row(op.point).tail(ne).transpose());
      for (size_t i = 0; i < op.u_dofs.size(); ++i) {
        const int fi = full_to_free[op.u_dofs[i]];
        if (fi < 0) continue;
        rhs_d(fi) += ru(i);
        rhs_l(fi) -= rl(i);
      }
    }
    for (size_t i = 0; i < free_to_full.size(); ++i) rhs_l(i) += f_ext(free_to_full[i]);

    Proj p;
    const Eigen::VectorXd uf = llt.solve(rhs_d);
    const Eigen::VectorXd lf = llt.solve(rhs_l);
    p.u = prescribed;
    p.lambda = Eigen::VectorXd::Zero(mesh.u_dofs());
    for (size_t i = 0; i < free_to_full.size(); ++i) {
      p.u(free_to_full[i]) = uf(i);
      p.lambda(free_to_full[i]) = lf(i);
    }
    p.Zs.resize(M, 2 * ne);
    for (const auto& op : ops) {
      p.Zs.row(op.point).head(ne) = (op.B_eps * gather_u(op, p.u)).transpose();
      p.Zs.row(op.point).tail(ne) =
          Ystar.row(op.point).tail(ne) +
          (metric.C() * (op.B_eps * gather_u(op, p.lambda))).transpose();
    }
    return p;
  }

  Eigen::VectorXd residual_vector(const Eigen::MatrixXd& Zs, int step) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(mesh.u_dofs());
    for (const auto& op : ops) {
      const Eigen::VectorXd rl =
          op.weight * (op.B_eps.transpose() * Zs.row(op.point).tail(ne).transpose());
      for (size_t i = 0; i < op.u_dofs.size(); ++i) r(op.u_dofs[i]) += rl(i);
    }
    r -= program.external_forces(step).head(mesh.u_dofs());
    return r;
  }

  double distance_sq(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) const {
    double sum = 0;
    for (int e = 0; e < A.rows(); ++e) {
      const Eigen::VectorXd de = (A.row(e).head(ne) - B.row(e).head(ne)).transpose();
      const Eigen::VectorXd ds = (A.row(e).tail(ne) - B.row(e).tail(ne)).transpose();
      sum += 0.5 * weights(e) * (de.dot(metric.C() * de) + ds.dot(metric.C_inv() * ds));
    }
    return sum;
  }

  Eigen::VectorXi nearest_pass(const Eigen::MatrixXd& states, const Eigen::VectorXi& hints,
                               int step) {
    const int M = mesh.num_points();
    std::shuffle(order.begin(), order.end(), rng);
    Eigen::VectorXi out(M);
    std::vector<char> starved(M, 0);
    par::parallel_for(M, [&](std::int64_t i) {
      const int e = order[i];
      try {
        const auto r = index->nearest(states.row(e).transpose(), 1.0, 1.0, q_prev(e),
                                      q_prev(e) + options.tol_q, hints.size() == M ? hints(e) : -1);
        out(e) = r.index;
      } catch (const StarvationError&) {
        starved[e] = 1;
      }
    });
    for (int e = 0; e < M; ++e)
      if (starved[e])
        throw StarvationError("step " + std::to_string(step) +
                              ": no admissible datum for material point " + std::to_string(e));
    return out;
  }

  DdStepRecord solve_step(int step) {
    prescribed.setZero();
    for (const auto& d : program.dirichlet)
      if (d.dof < mesh.u_dofs()) prescribed(d.dof) = d.offset + d.scale * program.factors[step];

    Eigen::VectorXi warm = assignment;
    if (assignment.minCoeff() < 0) {
      const Proj p0 = project_assigned(Eigen::MatrixXd::Zero(mesh.num_points(), 2 * ne), step);
      const int first_step = data.src_step.minCoeff();
      std::vector<int> admissible;
      for (int r = 0; r < data.size(); ++r)
        if (data.src_step(r) == first_step && data.q(r) >= 0 && data.q(r) <= options.tol_q)
          admissible.push_back(r);
      if (admissible.empty())
        for (int r = 0; r < data.size(); ++r)
          if (data.q(r) >= 0 && data.q(r) <= options.tol_q) admissible.push_back(r);
      if (admissible.empty())
        throw StarvationError("no datum admissible for the initial assignment");
      std::vector<double> d2(admissible.size());
      for (int e = 0; e < mesh.num_points(); ++e) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < admissible.size(); ++i) {
          const Eigen::VectorXd de = p0.Zs.row(e).head(ne) - Zc.row(admissible[i]).head(ne);
          const Eigen::VectorXd ds = p0.Zs.row(e).tail(ne) - Zc.row(admissible[i]).tail(ne);
          d2[i] = 0.5 * (de.dot(metric.C() * de) + ds.dot(metric.C_inv() * ds));
          best = std::min(best, d2[i]);
        }
        const double cut = best * (1.0 + options.init_slack) + 1e-300;
        std::vector<int> ties;
        for (size_t i = 0; i < admissible.size(); ++i)
          if (d2[i] <= cut) ties.push_back(admissible[i]);
        std::uniform_int_distribution<size_t> pick(0, ties.size() - 1);
        warm(e) = ties[pick(rng)];
      }
    } else if (options.warm_start == DdOptions::WarmStart::Advance && assignment.minCoeff() >= 0) {
      for (int e = 0; e < warm.size(); ++e) {
        const int r = assignment(e);
        const auto it = row_of.find(
            (static_cast<long>(data.src_point(r)) << 24) | (data.src_step(r) + 1));
        if (it == row_of.end()) continue;
        const double dq = data.q(it->second) - q_prev(e);
        if (dq >= 0 && dq <= options.tol_q) warm(e) = it->second;
      }
    }
    Eigen::MatrixXd Y0 = Eigen::MatrixXd::Zero(mesh.num_points(), 2 * ne);
    for (int e = 0; e < warm.size(); ++e) Y0.row(e) = Zc.row(warm(e));
    Proj proj = project_assigned(Y0, step);

    DdStepRecord rec;
    rec.step = step;
    rec.load_factor = program.factors[step];
    Eigen::VectorXi prev = warm;
    double dist = 0;
    for (int it = 0; it < options.max_iter; ++it) {
      Eigen::VectorXi guess = prev;
      if (it > 0 && options.warm_start == DdOptions::WarmStart::Advance) {
        for (int e = 0; e < guess.size(); ++e) {
          const int r = prev(e);
          if (data.src_step(r) > step) continue;  // catch-up only
          const auto itr = row_of.find(
              (static_cast<long>(data.src_point(r)) << 24) | (data.src_step(r) + 1));
          if (itr == row_of.end()) continue;
          const double dq = data.q(itr->second) - q_prev(e);
          if (dq >= 0 && dq <= options.tol_q) guess(e) = itr->second;
        }
        if (guess != prev) {
          Eigen::MatrixXd Yg(mesh.num_points(), 2 * ne);
          for (int e = 0; e < guess.size(); ++e) Yg.row(e) = Zc.row(guess(e));
          proj = project_assigned(Yg, step);
        }
      }
      const Eigen::VectorXi next = nearest_pass(proj.Zs, guess, step);
      rec.iterations = it + 1;
      Eigen::MatrixXd Y(mesh.num_points(), 2 * ne);
      for (int e = 0; e < next.size(); ++e) Y.row(e) = Zc.row(next(e));
      proj = project_assigned(Y, step);
      dist = distance_sq(proj.Zs, Y);
      rec.iteration_distances.push_back(dist);
      if (next == prev) {
        prev = next;
        rec.converged = true;
        break;
      }
      prev = next;
    }

    // Embed the reduced state into the full column convention.
    const int M = mesh.num_points();
    rec.Z = Eigen::MatrixXd::Zero(M, cfg.z_dim());
    rec.Z.middleCols(cfg.off_eps(), ne) = proj.Zs.leftCols(ne);
    rec.Z.middleCols(cfg.off_sig(), ne) = proj.Zs.rightCols(ne);
    rec.fields = Eigen::VectorXd::Zero(mesh.total_dofs());
    rec.fields.head(mesh.u_dofs()) = proj.u;
    rec.lambda = Eigen::VectorXd::Zero(mesh.total_dofs());
    rec.lambda.head(mesh.u_dofs()) = proj.lambda;
    rec.assignment = prev;
    rec.q.resize(M);
    for (int e = 0; e < M; ++e) rec.q(e) = data.q(prev(e));
    rec.distance_sq = dist;
    rec.state_norm_sq = distance_sq(proj.Zs, Eigen::MatrixXd::Zero(M, 2 * ne));
    const Eigen::VectorXd r = residual_vector(proj.Zs, step);
    double rn = 0;
    for (int i = 0; i < mesh.u_dofs(); ++i)
      if (full_to_free[i] >= 0) rn += r(i) * r(i);
    rec.residual_u = std::sqrt(rn);
    Eigen::VectorXd r_combined = Eigen::VectorXd::Zero(mesh.total_dofs());
    r_combined.head(mesh.u_dofs()) = r;
    rec.reaction = reaction_force(mesh, program, r_combined);

    assignment = prev;
    q_prev = rec.q;
    return rec;
  }
};

}  // namespace

std::vector<DdStepRecord> solve_history_cauchy(const Mesh& mesh, const LoadProgram& program,
                                               const MaterialDataSet& data,
                                               const MetricTensors& metric,
                                               const DdOptions& options) {
  CauchySolver solver(mesh, program, data, metric, options);
  std::vector<DdStepRecord> out;
  out.reserve(program.steps());
  for (int k = 0; k < program.steps(); ++k) out.push_back(solver.solve_step(k));
  return out;
}

}  // namespace ddmm
