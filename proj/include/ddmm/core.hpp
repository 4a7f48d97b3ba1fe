#ifndef DDMM_CORE_HPP
#define DDMM_CORE_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ddmm/errors.hpp"

namespace ddmm {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

enum class MicroSymmetry { Full, Microstrain };

std::string to_string(MicroSymmetry s);
MicroSymmetry micro_symmetry_from_string(const std::string& s);

/// Dimensions of the generalized kinematic/static vectors for a spatial
/// dimension n and a micro-deformation symmetry class.
///
/// A phase vector z is laid out as [eps | gam | zet | sig | tau | mu].
/// Strain-like and stress-like symmetric tensors use Mandel components
/// (sqrt(2)-scaled shear) so that plain dot products equal tensor
/// contractions; full (non-symmetric) tensors store all n^2 components
/// unscaled, which has the same property.
struct SpaceConfig {
  int n = 1;
  MicroSymmetry sym = MicroSymmetry::Microstrain;

  int n_eps() const { return n * (n + 1) / 2; }
  int n_chi() const { return sym == MicroSymmetry::Full ? n * n : n * (n + 1) / 2; }
  // One n-vector gradient per micro-deformation component, grouped by
  // gradient direction: zet = [d(chi)/dx_1 | ... | d(chi)/dx_n].
  int n_zeta() const { return n_chi() * n; }

  int strain_dim() const { return n_eps() + n_chi() + n_zeta(); }
  int z_dim() const { return 2 * strain_dim(); }

  // Block offsets inside a phase vector.
  int off_eps() const { return 0; }
  int off_gam() const { return n_eps(); }
  int off_zet() const { return n_eps() + n_chi(); }
  int off_sig() const { return strain_dim(); }
  int off_tau() const { return strain_dim() + n_eps(); }
  int off_mu() const { return strain_dim() + n_eps() + n_chi(); }

  bool operator==(const SpaceConfig&) const = default;
};

/// Per-component factor turning engineering (plain tensor) components into
/// the internal Mandel representation, for one symmetric-tensor block.
/// n=1: {1};  n=2: {1, 1, sqrt(2)} for (xx, yy, xy).
std::vector<double> mandel_scales_sym(int n);

/// Scales for a micro-deformation block (identity for the full symmetry,
/// Mandel for microstrain).
std::vector<double> mandel_scales_chi(const SpaceConfig& cfg);

/// Scales for the whole phase vector, block by block.
std::vector<double> mandel_scales_z(const SpaceConfig& cfg);

/// Component names used in CSV headers, e.g. "eps_xx" or "zet_xy_y".
std::vector<std::string> component_names_z(const SpaceConfig& cfg);

}  // namespace ddmm

#endif
