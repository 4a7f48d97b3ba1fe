#include "oracles.hpp"

namespace ddmm::oracle {

namespace {

Eigen::Matrix2d sym_from_mandel(const Eigen::VectorXd& v, int off) {
  Eigen::Matrix2d t;
  const double s = v(off + 2) / std::sqrt(2.0);
  t << v(off), s, s, v(off + 1);
  return t;
}

// explicit index contraction eps : C : eps with
// C_ijkl = lam d_ij d_kl + G (d_ik d_jl + d_il d_jk)
double strain_energy_loops(const Eigen::Matrix2d& e, double lam, double G) {
  double acc = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const double C = lam * (i == j) * (k == l) + G * ((i == k) * (j == l) + (i == l) * (j == k));
          acc += e(i, j) * C * e(k, l);
        }
  return acc;
}

// sig : C^-1 : sig via the closed-form in-plane compliance
double stress_energy_closed_form(const Eigen::Matrix2d& s, double lam, double G) {
  const double t = s.trace();
  const Eigen::Matrix2d dev = s - 0.5 * t * Eigen::Matrix2d::Identity();
  return dev.squaredNorm() / (2 * G) + t * t / (4 * (lam + G));
}

}  // namespace

double distance_sq_by_tensor_loops(const Eigen::VectorXd& z, const Eigen::VectorXd& y,
                                   const ElasticityParams& p, const SpaceConfig& cfg) {
  const Eigen::VectorXd d = z - y;
  if (cfg.n == 1) {
    const double E = p.E, c1 = p.c1, l2 = p.ell_chi * p.ell_chi;
    const double eps = d(0), gam = d(1), zet = d(2), sig = d(3), tau = d(4), mu = d(5);
    return 0.5 * (E * eps * eps + sig * sig / E + c1 * E * gam * gam + tau * tau / (c1 * E) +
                  c1 * l2 * E * zet * zet + mu * mu / (c1 * l2 * E));
  }
  if (cfg.sym != MicroSymmetry::Microstrain)
    throw std::runtime_error("oracle handles the microstrain configuration");
  const double lam = p.lambda(), G = p.shear_modulus();
  const double lam_d = p.c1 * lam, G_d = p.c1 * G;
  const double a = p.c1 * p.ell_chi * p.ell_chi;

  double acc = 0;
  acc += strain_energy_loops(sym_from_mandel(d, cfg.off_eps()), lam, G);
  acc += stress_energy_closed_form(sym_from_mandel(d, cfg.off_sig()), lam, G);
  acc += strain_energy_loops(sym_from_mandel(d, cfg.off_gam()), lam_d, G_d);
  acc += stress_energy_closed_form(sym_from_mandel(d, cfg.off_tau()), lam_d, G_d);
  for (int k = 0; k < 2; ++k) {
    acc += strain_energy_loops(sym_from_mandel(d, cfg.off_zet() + 3 * k), a * lam, a * G);
    acc += stress_energy_closed_form(sym_from_mandel(d, cfg.off_mu() + 3 * k), a * lam, a * G);
  }
  return 0.5 * acc;
}

}  // namespace ddmm::oracle
