#ifndef DDMM_PLASTICITY_HPP
#define DDMM_PLASTICITY_HPP

#include "ddmm/phase_space.hpp"
#include "ddmm/reference.hpp"

namespace ddmm {

/// Non-associative Drucker-Prager plasticity with micromorphic elasticity.
/// The independent-yield-function family; with a1..a4 = 0 only the classical
/// plastic strain evolves while the relative-strain and micro-gradient
/// responses stay elastic (the validated regime).
struct PlasticityParams {
  ElasticityParams elastic;
  double sigma_y = 1.0;   // yield strength
  double A_phi = 0.0;     // friction coefficient
  double A_theta = 0.0;   // dilation coefficient, in [0, A_phi]
  double a[6] = {0, 0, 0, 0, 0, 0};  // micromorphic couplings

  double newton_tol = 1e-10;
  int newton_max = 60;

  void validate() const;
  double bulk_modulus() const { return elastic.lambda() + 2.0 * elastic.shear_modulus() / 3.0; }
};

using Mandel6 = Eigen::Matrix<double, 6, 1>;   // (xx, yy, zz, s2*xy, s2*yz, s2*zx)
using Tangent6 = Eigen::Matrix<double, 6, 6>;

double dp_yield(const Mandel6& sig, const PlasticityParams& p);
double dp_potential(const Mandel6& sig, const PlasticityParams& p);

struct ReturnMapResult {
  Mandel6 sig = Mandel6::Zero();
  Mandel6 eps_p = Mandel6::Zero();
  double dkappa = 0;
  double dlambda = 0;
  bool plastic = false;
  bool apex = false;
  Tangent6 tangent = Tangent6::Zero();  // algorithmic d sig / d eps
};

/// Radial return onto f = 0 along the non-associative flow direction
/// sqrt(3/2) dev sig / |dev sig| + A_theta I, with an apex projection when
/// the deviatoric trial collapses.
ReturnMapResult dp_return_map(const Mandel6& eps_total, const Mandel6& eps_p_prev,
                              const PlasticityParams& p);

/// Global Newton over a load history with the local return map, algorithmic
/// tangents and an unsymmetric direct solve.
ReferenceRun plastic_solve_history(const Mesh& mesh, const LoadProgram& program,
                                   const PlasticityParams& params);

/// Embeds a plane-strain Mandel 3-vector into the 3D Mandel 6-vector.
Mandel6 plane_strain_to_3d(const Eigen::Vector3d& eps2d);
Eigen::Vector3d in_plane(const Mandel6& v);

}  // namespace ddmm

#endif
