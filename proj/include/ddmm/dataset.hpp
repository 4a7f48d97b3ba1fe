#ifndef DDMM_DATASET_HPP
#define DDMM_DATASET_HPP

#include <Eigen/Dense>
#include <string>

#include "ddmm/core.hpp"

namespace ddmm {

/// Columnar store of phase points with the internal-variable tag q and
/// provenance (sampling point, load step). Shared by all material points.
struct MaterialDataSet {
  SpaceConfig cfg;
  Eigen::MatrixXd Z;  // |D| x z_dim, Mandel components
  Eigen::VectorXd q;
  Eigen::VectorXi src_point, src_step;
  std::string units = "nondimensional";

  int size() const { return static_cast<int>(Z.rows()); }
  void validate() const;
};

/// Irreversibility window per material point: a datum is admissible when
/// 0 <= q - q_prev <= tol_q.
struct HistoryFilter {
  Eigen::VectorXd q_prev;
  double tol_q = std::numeric_limits<double>::infinity();

  double lo(int point) const { return q_prev(point); }
  double hi(int point) const { return q_prev(point) + tol_q; }
};

/// Reads a dataset file plus its JSON sidecar (`<path>.json`). Engineering
/// (unscaled) components on disk are converted to Mandel internally. Keeps
/// sampling points whose id is divisible by `stride`.
MaterialDataSet load_dataset(const std::string& path, int stride = 1);

/// Writes the dataset file and sidecar, converting back to engineering
/// components.
void save_dataset(const MaterialDataSet& data, const std::string& path,
                  const std::string& seed_note = "");

/// Subset with src_point % stride == 0 (all load steps of kept points).
MaterialDataSet stride_dataset(const MaterialDataSet& data, int stride);

}  // namespace ddmm

#endif
