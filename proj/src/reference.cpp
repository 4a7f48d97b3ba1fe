#include "ddmm/reference.hpp"

namespace ddmm {

MaterialDataSet export_dataset(const ReferenceRun& run, int stride) {
  if (stride < 1) throw ConfigError("export stride must be >= 1");
  if (run.steps.empty()) throw MismatchError("reference run has no steps to export");
  const int M = static_cast<int>(run.steps.front().Z.rows());
  std::vector<int> keep;
  for (int e = 0; e < M; ++e)
    if (e % stride == 0) keep.push_back(e);

  MaterialDataSet data;
  data.cfg = run.cfg;
  data.units = run.units;
  const long rows = static_cast<long>(keep.size()) * static_cast<long>(run.steps.size());
  data.Z.resize(rows, run.cfg.z_dim());
  data.q.resize(rows);
  data.src_point.resize(rows);
  data.src_step.resize(rows);
  long r = 0;
  for (const auto& step : run.steps)
    for (const int e : keep) {
      data.Z.row(r) = step.Z.row(e);
      data.q(r) = step.q(e);
      data.src_point(r) = e;
      data.src_step(r) = step.step;
      ++r;
    }
  data.validate();
  return data;
}

void export_dataset(const ReferenceRun& run, int stride, const std::string& path) {
  save_dataset(export_dataset(run, stride), path);
}

}  // namespace ddmm
