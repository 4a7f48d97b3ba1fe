#include "ddmm/phase_space.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "ddmm/parallel.hpp"

namespace ddmm {

namespace {

Eigen::MatrixXd spd_chol(const Eigen::MatrixXd& M, const char* name) {
  if (M.rows() != M.cols() || M.rows() == 0) throw NotSpdError(std::string(name) + ": not square");
  if (!M.isApprox(M.transpose(), 1e-12)) throw NotSpdError(std::string(name) + ": not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw NotSpdError(std::string(name) + ": Cholesky factorization failed (not positive definite)");
  Eigen::MatrixXd L = llt.matrixL();
  for (int i = 0; i < L.rows(); ++i)
    if (!(L(i, i) > 0) || !std::isfinite(L(i, i)))
      throw NotSpdError(std::string(name) + ": non-positive pivot");
  return L;
}

}  // namespace

MetricTensors MetricTensors::make(Eigen::MatrixXd C, Eigen::MatrixXd D, Eigen::MatrixXd A) {
  MetricTensors m;
  m.C_chol_ = spd_chol(C, "metric C");
  m.D_chol_ = spd_chol(D, "metric D");
  m.A_chol_ = spd_chol(A, "metric A");
  m.C_inv_ = C.llt().solve(Eigen::MatrixXd::Identity(C.rows(), C.cols()));
  m.D_inv_ = D.llt().solve(Eigen::MatrixXd::Identity(D.rows(), D.cols()));
  m.A_inv_ = A.llt().solve(Eigen::MatrixXd::Identity(A.rows(), A.cols()));
  m.m_ = {std::move(C), std::move(D), std::move(A)};
  return m;
}

MetricTensors MetricTensors::scaled(double s) const {
  if (!(s > 0)) throw NotSpdError("metric scale must be positive");
  return make(s * m_.C, s * m_.D, s * m_.A);
}

void ElasticityParams::validate() const {
  if (!(E > 0)) throw ConfigError("Young's modulus must be positive");
  if (!(nu > -1 && nu < 0.5)) throw ConfigError("Poisson ratio must lie in (-1, 0.5)");
  if (!(c1 >= 1)) throw ConfigError("micromorphic constant c1 must be >= 1");
  if (!(ell_chi >= 0)) throw ConfigError("micromorphic length scale must be >= 0");
}

ModuliSet microstrain_moduli(const ElasticityParams& p, int n) {
  p.validate();
  ModuliSet m;
  if (n == 1) {
    m.C = Eigen::MatrixXd::Constant(1, 1, p.E);
  } else if (n == 2) {
    const double lam = p.lambda(), G = p.shear_modulus();
    m.C = Eigen::MatrixXd::Zero(3, 3);
    m.C << lam + 2 * G, lam, 0, lam, lam + 2 * G, 0, 0, 0, 2 * G;
  } else {
    throw ConfigError("unsupported spatial dimension " + std::to_string(n));
  }
  m.D = p.c1 * m.C;
  const int ne = static_cast<int>(m.C.rows());
  m.A = Eigen::MatrixXd::Zero(n * ne, n * ne);
  for (int k = 0; k < n; ++k)
    m.A.block(k * ne, k * ne, ne, ne) = p.c1 * p.ell_chi * p.ell_chi * m.C;
  return m;
}

MetricTensors microstrain_metric(const ElasticityParams& p, int n) {
  ModuliSet m = microstrain_moduli(p, n);
  return MetricTensors::make(std::move(m.C), std::move(m.D), std::move(m.A));
}

double local_distance_sq(const Eigen::VectorXd& z, const Eigen::VectorXd& y,
                         const MetricTensors& m, const SpaceConfig& cfg) {
  return local_distance_sq_scaled(z, y, m, cfg, 1.0);
}

double local_distance_sq_scaled(const Eigen::VectorXd& z, const Eigen::VectorXd& y,
                                const MetricTensors& m, const SpaceConfig& cfg, double scale) {
  if (z.size() != cfg.z_dim() || y.size() != cfg.z_dim())
    throw MismatchError("phase vector size does not match configuration");
  const Eigen::VectorXd d = z - y;
  const auto seg = [&d](int off, int len) { return d.segment(off, len); };
  const auto de = seg(cfg.off_eps(), cfg.n_eps());
  const auto dg = seg(cfg.off_gam(), cfg.n_chi());
  const auto dz = seg(cfg.off_zet(), cfg.n_zeta());
  const auto ds = seg(cfg.off_sig(), cfg.n_eps());
  const auto dt = seg(cfg.off_tau(), cfg.n_chi());
  const auto dm = seg(cfg.off_mu(), cfg.n_zeta());
  const double strain = de.dot(m.C() * de) + dg.dot(m.D() * dg) + dz.dot(m.A() * dz);
  const double stress = ds.dot(m.C_inv() * ds) + dt.dot(m.D_inv() * dt) + dm.dot(m.A_inv() * dm);
  return 0.5 * (scale * strain + stress / scale);
}

double global_distance_sq(const Eigen::MatrixXd& states, const Eigen::MatrixXd& data,
                          const MetricTensors& m, const SpaceConfig& cfg,
                          const Eigen::VectorXd& weights, const Eigen::VectorXd* scale) {
  const auto M = states.rows();
  if (data.rows() != M || weights.size() != M)
    throw MismatchError("global_distance_sq: one entry per material point required");
  std::vector<double> local(M);
  par::parallel_for(M, [&](std::int64_t e) {
    const double s = scale ? (*scale)(e) : 1.0;
    local[e] = local_distance_sq_scaled(states.row(e), data.row(e), m, cfg, s);
  });
  double sum = 0;  // fixed-order reduction keeps results worker-count independent
  for (auto i = 0; i < M; ++i) sum += weights(i) * local[i];
  return sum;
}

double secant_factor(const Eigen::VectorXd& z, const MetricTensors& base, const SpaceConfig& cfg,
                     double floor) {
  if (!(floor > 0 && floor <= 1)) throw ConfigError("secant floor must lie in (0, 1]");
  const auto eps = z.segment(cfg.off_eps(), cfg.n_eps());
  const auto sig = z.segment(cfg.off_sig(), cfg.n_eps());
  const double denom = eps.dot(base.C() * eps);
  if (!(denom > 0)) return 1.0;
  return std::clamp(sig.dot(eps) / denom, floor, 1.0);
}

MetricTensors secant_metric(const Eigen::VectorXd& z, const MetricTensors& base,
                            const SpaceConfig& cfg, double floor) {
  return base.scaled(secant_factor(z, base, cfg, floor));
}

}  // namespace ddmm
