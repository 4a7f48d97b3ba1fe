#ifndef DDMM_COMPARE_HPP
#define DDMM_COMPARE_HPP

#include "ddmm/runio.hpp"

namespace ddmm {

/// Per-step comparison of a data-driven run against a reference run on the
/// same mesh; all norms use the run's phase-space metric.
struct ComparisonReport {
  Eigen::VectorXd load_factor;
  Eigen::VectorXd rel_distance;    // ||z* - y*|| / ||z*||
  Eigen::VectorXd err_vs_ref;      // ||z* - z_ref|| / ||z_ref||
  Eigen::VectorXd reaction_dd, reaction_ref;
  Eigen::VectorXd l2_u, l2_chi, l2_q;  // relative nodal/point profile errors
  double jaccard_top_decile = 0;       // element overlap of the final q field

  int steps() const { return static_cast<int>(load_factor.size()); }
};

ComparisonReport compare_runs(const RunSeries& dd, const RunSeries& ref);
ComparisonReport compare_dirs(const std::string& dd_dir, const std::string& ref_dir);
void write_report(const ComparisonReport& report, const std::string& path);

/// Jaccard overlap of the top-decile element sets of two per-point fields.
double jaccard_top_decile(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                          const Eigen::VectorXi& element);

}  // namespace ddmm

#endif
