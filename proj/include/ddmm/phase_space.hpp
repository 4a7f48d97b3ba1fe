#ifndef DDMM_PHASE_SPACE_HPP
#define DDMM_PHASE_SPACE_HPP

#include <Eigen/Dense>

#include "ddmm/core.hpp"

namespace ddmm {

/// One material point's generalized strain/stress coordinates plus the
/// internal-variable tag and provenance.
struct PhasePoint {
  Eigen::VectorXd z;  // [eps | gam | zet | sig | tau | mu], Mandel components
  double q = 0;
  int source_point = -1;
  int source_step = -1;
};

/// Generalized elasticity blocks. Plain containers with no definiteness
/// requirement; reference models may use a vanishing micro-gradient block.
struct ModuliSet {
  Eigen::MatrixXd C;  // n_eps  x n_eps
  Eigen::MatrixXd D;  // n_chi  x n_chi
  Eigen::MatrixXd A;  // n_zeta x n_zeta
};

/// SPD metric blocks with cached Cholesky factors and inverses.
class MetricTensors {
 public:
  static MetricTensors make(Eigen::MatrixXd C, Eigen::MatrixXd D, Eigen::MatrixXd A);

  const Eigen::MatrixXd& C() const { return m_.C; }
  const Eigen::MatrixXd& D() const { return m_.D; }
  const Eigen::MatrixXd& A() const { return m_.A; }
  const Eigen::MatrixXd& C_inv() const { return C_inv_; }
  const Eigen::MatrixXd& D_inv() const { return D_inv_; }
  const Eigen::MatrixXd& A_inv() const { return A_inv_; }
  const Eigen::MatrixXd& C_chol() const { return C_chol_; }  // lower factors
  const Eigen::MatrixXd& D_chol() const { return D_chol_; }
  const Eigen::MatrixXd& A_chol() const { return A_chol_; }

  const ModuliSet& moduli() const { return m_; }
  MetricTensors scaled(double s) const;

 private:
  ModuliSet m_;
  Eigen::MatrixXd C_inv_, D_inv_, A_inv_;
  Eigen::MatrixXd C_chol_, D_chol_, A_chol_;
};

struct ElasticityParams {
  double E = 1.0;
  double nu = 0.0;
  double c1 = 1.0;
  double ell_chi = 0.1;

  void validate() const;
  double lambda() const { return E * nu / ((1 + nu) * (1 - 2 * nu)); }
  double shear_modulus() const { return E / (2 * (1 + nu)); }
};

/// Isotropic moduli (1D or plane strain) for the microstrain family:
/// D = c1 C and A = block-diagonal copies of c1 ell_chi^2 C, one per
/// gradient direction.
ModuliSet microstrain_moduli(const ElasticityParams& p, int n);
MetricTensors microstrain_metric(const ElasticityParams& p, int n);

/// Local squared distance between phase vectors:
/// 1/2 (C de.de + C^-1 ds.ds + D dg.dg + D^-1 dt.dt + A dz.dz + A^-1 dm.dm).
double local_distance_sq(const Eigen::VectorXd& z, const Eigen::VectorXd& y,
                         const MetricTensors& m, const SpaceConfig& cfg);

/// Weighted sum of local squared distances. `scale` optionally carries a
/// per-point metric factor s_e (metric s*C scales the strain terms by s and
/// the stress terms by 1/s).
double global_distance_sq(const Eigen::MatrixXd& states, const Eigen::MatrixXd& data,
                          const MetricTensors& m, const SpaceConfig& cfg,
                          const Eigen::VectorXd& weights, const Eigen::VectorXd* scale = nullptr);

double local_distance_sq_scaled(const Eigen::VectorXd& z, const Eigen::VectorXd& y,
                                const MetricTensors& m, const SpaceConfig& cfg, double scale);

/// Secant factor inferred from a datum: clamp((sig.eps)/(C eps.eps), floor, 1),
/// or 1 when the strain energy vanishes.
double secant_factor(const Eigen::VectorXd& z, const MetricTensors& base, const SpaceConfig& cfg,
                     double floor);

/// Uniformly rescaled metric s * base with s the secant factor of z.
MetricTensors secant_metric(const Eigen::VectorXd& z, const MetricTensors& base,
                            const SpaceConfig& cfg, double floor);

}  // namespace ddmm

#endif
