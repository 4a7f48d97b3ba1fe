#ifndef DDMM_NN_INDEX_HPP
#define DDMM_NN_INDEX_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ddmm/dataset.hpp"
#include "ddmm/phase_space.hpp"

namespace ddmm {

/// Exact nearest-neighbor index under the phase-space metric with an
/// admissibility window on q.
///
/// Coordinates are whitened per block (strain blocks by sqrt(1/2) L^T with
/// M = L L^T, stress blocks by sqrt(1/2) L^-1) so the Euclidean distance of
/// whitened vectors equals the metric distance. A per-query metric factor s
/// (metric s * base) enters as coordinate weights: s on the strain half,
/// 1/s on the stress half, keeping searches exact without a rebuild.
///
/// Queries against a window with few admissible data fall back to a direct
/// scan over the admissible ids (tree pruning loses its value there); both
/// paths return the same argmin with ties broken by lowest datum id.
class NnIndex {
 public:
  /// Whitened metric: one entry per block of the coordinate vector.
  struct Block {
    int offset = 0;
    Eigen::MatrixXd W;  // whitening factor applied to this block
  };

  NnIndex(Eigen::MatrixXd whitened, Eigen::VectorXd q, std::vector<Block> blocks, int strain_dim,
          std::uint64_t seed);

  /// Index over the full generalized phase space.
  static NnIndex build(const MaterialDataSet& data, const MetricTensors& metric,
                       std::uint64_t seed = 0);

  /// Index over a reduced space (e.g. the Cauchy pair (eps, sig+tau)); rows
  /// of `Z` are raw block coordinates, `strain_blocks` of them strain-like
  /// with metric matrices `Ms` (strain first, then the paired inverse-metric
  /// stress blocks).
  static NnIndex build_blocks(const Eigen::MatrixXd& Z, const Eigen::VectorXd& q,
                              const std::vector<Eigen::MatrixXd>& strain_metrics,
                              std::uint64_t seed = 0);

  Eigen::VectorXd whiten(const Eigen::VectorXd& z) const;

  struct Result {
    int index = -1;
    double d2 = 0;  // metric squared distance (includes the query scale)
  };

  /// Exact filtered nearest neighbor; `hint` (a datum id or -1) seeds the
  /// search radius. The two scales weight the strain and stress halves of the
  /// squared distance (a per-point metric factor s enters as (s, 1/s); a
  /// uniform rescaling of the whole form as (s, s), which cannot change the
  /// argmin). Throws StarvationError when no datum lies in [q_lo, q_hi].
  Result nearest(const Eigen::VectorXd& z_raw, double strain_scale, double stress_scale,
                 double q_lo, double q_hi, int hint = -1) const;

  int count_admissible(double q_lo, double q_hi) const;
  int size() const { return static_cast<int>(points_.rows()); }
  std::uint64_t seed() const { return seed_; }

  double fallback_fraction = 0.01;

 private:
  struct Node {
    int left = -1, right = -1;  // children, or leaf when left < 0
    int begin = 0, end = 0;     // leaf range into perm_
    int dim = 0;
    double split = 0;
  };

  int build_node(int begin, int end, std::vector<double>& lo, std::vector<double>& hi);
  void search(int node, const double* q, const double* w, double rd, std::vector<double>& off,
              double q_lo, double q_hi, double& best_d2, int& best_id) const;
  double point_dist2(const double* q, const double* w, int id, double cutoff) const;

  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> points_;
  Eigen::VectorXd q_;
  std::vector<Block> blocks_;
  int strain_dim_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<int> perm_;
  std::vector<Node> nodes_;
  std::vector<int> by_q_;  // ids sorted by (q, id)
};

}  // namespace ddmm

#endif
