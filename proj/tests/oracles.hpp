// Independent brute-force oracles used by the tests. These deliberately share
// no code with the implementation paths they check.
#ifndef DDMM_TESTS_ORACLES_HPP
#define DDMM_TESTS_ORACLES_HPP

#include <random>

#include "ddmm/dataset.hpp"
#include "ddmm/phase_space.hpp"

namespace ddmm::oracle {

/// Filtered argmin of the local metric distance by direct loop; ties broken
/// by lowest index. Returns -1 when nothing is admissible.
inline int brute_force_nn(const MaterialDataSet& data, const Eigen::VectorXd& z,
                          const MetricTensors& metric, double scale, double q_lo, double q_hi) {
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < data.size(); ++i) {
    if (data.q(i) < q_lo || data.q(i) > q_hi) continue;
    const double d2 =
        local_distance_sq_scaled(z, data.Z.row(i).transpose(), metric, data.cfg, scale);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

/// Tensor-contraction distance evaluated by explicit index loops on the
/// un-vectorized tensors (1D and 2D microstrain).
double distance_sq_by_tensor_loops(const Eigen::VectorXd& z, const Eigen::VectorXd& y,
                                   const ElasticityParams& p, const SpaceConfig& cfg);

inline Eigen::VectorXd random_phase_vector(std::mt19937_64& rng, const SpaceConfig& cfg,
                                           double amplitude = 1.0) {
  std::normal_distribution<double> n(0.0, amplitude);
  Eigen::VectorXd z(cfg.z_dim());
  for (int i = 0; i < z.size(); ++i) z(i) = n(rng);
  return z;
}

}  // namespace ddmm::oracle

#endif
