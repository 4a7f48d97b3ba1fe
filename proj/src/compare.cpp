#include "ddmm/compare.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ddmm/io.hpp"

namespace ddmm {

namespace {

double nodal_l2(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const std::vector<int>& cols) {
  double num = 0, den = 0;
  for (int c : cols) {
    num += (a.col(c) - b.col(c)).squaredNorm();
    den += b.col(c).squaredNorm();
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

double jaccard_top_decile(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                          const Eigen::VectorXi& element) {
  const int n_elem = element.maxCoeff() + 1;
  Eigen::VectorXd ea = Eigen::VectorXd::Zero(n_elem), eb = Eigen::VectorXd::Zero(n_elem);
  Eigen::VectorXd cnt = Eigen::VectorXd::Zero(n_elem);
  for (int p = 0; p < a.size(); ++p) {
    ea(element(p)) += a(p);
    eb(element(p)) += b(p);
    cnt(element(p)) += 1;
  }
  ea.array() /= cnt.array();
  eb.array() /= cnt.array();

  const int top = std::max(1, (n_elem + 9) / 10);
  auto top_set = [top, n_elem](const Eigen::VectorXd& v) {
    std::vector<int> ids(n_elem);
    for (int i = 0; i < n_elem; ++i) ids[i] = i;
    std::sort(ids.begin(), ids.end(), [&v](int x, int y) {
      return v(x) != v(y) ? v(x) > v(y) : x < y;
    });
    return std::set<int>(ids.begin(), ids.begin() + top);
  };
  const std::set<int> sa = top_set(ea), sb = top_set(eb);
  std::vector<int> inter;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
  const double uni = static_cast<double>(sa.size() + sb.size() - inter.size());
  return inter.size() / uni;
}

ComparisonReport compare_runs(const RunSeries& dd, const RunSeries& ref) {
  if (!(dd.meta.cfg == ref.meta.cfg) || dd.meta.points != ref.meta.points ||
      dd.meta.nodes != ref.meta.nodes)
    throw MismatchError("compare: runs use different meshes or configurations");
  if (dd.meta.steps != ref.meta.steps)
    throw MismatchError("compare: runs have different step counts");

  const SpaceConfig cfg = dd.meta.cfg;
  const MetricTensors metric = microstrain_metric(dd.meta.metric_params, cfg.n);

  ComparisonReport rep;
  const int K = dd.meta.steps;
  rep.load_factor.resize(K);
  rep.rel_distance = dd.rel_distance;
  rep.err_vs_ref.resize(K);
  rep.reaction_dd = dd.reaction;
  rep.reaction_ref = ref.reaction;
  rep.l2_u.resize(K);
  rep.l2_chi.resize(K);
  rep.l2_q.resize(K);

  // nodal column groups (skip coordinates)
  std::vector<int> u_cols, chi_cols;
  for (size_t c = 0; c < dd.nodal_columns.size(); ++c) {
    const std::string& name = dd.nodal_columns[c];
    if (name == "u" || name == "ux" || name == "uy") u_cols.push_back(static_cast<int>(c));
    if (name.rfind("chi", 0) == 0) chi_cols.push_back(static_cast<int>(c));
  }

  for (int k = 0; k < K; ++k) {
    rep.load_factor(k) = dd.load_factor(k);
    if (std::abs(dd.load_factor(k) - ref.load_factor(k)) >
        1e-9 * (1 + std::abs(ref.load_factor(k))))
      throw MismatchError("compare: load factors differ at step " + std::to_string(k + 1));
    const double num = global_distance_sq(dd.Z[k], ref.Z[k], metric, cfg, dd.weights);
    const double den = global_distance_sq(
        ref.Z[k], Eigen::MatrixXd::Zero(ref.Z[k].rows(), ref.Z[k].cols()), metric, cfg, dd.weights);
    rep.err_vs_ref(k) = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    if (!dd.nodal.empty() && !ref.nodal.empty()) {
      rep.l2_u(k) = nodal_l2(dd.nodal[k], ref.nodal[k], u_cols);
      rep.l2_chi(k) = nodal_l2(dd.nodal[k], ref.nodal[k], chi_cols);
    }
    const double qden = ref.q[k].norm();
    rep.l2_q(k) = qden > 0 ? (dd.q[k] - ref.q[k]).norm() / qden : (dd.q[k] - ref.q[k]).norm();
  }
  rep.jaccard_top_decile = jaccard_top_decile(dd.q.back(), ref.q.back(), dd.element);
  return rep;
}

ComparisonReport compare_dirs(const std::string& dd_dir, const std::string& ref_dir) {
  return compare_runs(read_run(dd_dir), read_run(ref_dir));
}

void write_report(const ComparisonReport& rep, const std::string& path) {
  CsvWriter w(path);
  w.comment("jaccard_top_decile", format_double(rep.jaccard_top_decile));
  w.header({"step", "load_factor", "rel_distance", "err_vs_ref", "reaction_dd", "reaction_ref",
            "l2_u", "l2_chi", "l2_q"});
  for (int k = 0; k < rep.steps(); ++k) {
    w.field(static_cast<long>(k + 1));
    w.field(rep.load_factor(k));
    w.field(rep.rel_distance(k));
    w.field(rep.err_vs_ref(k));
    w.field(rep.reaction_dd(k));
    w.field(rep.reaction_ref(k));
    w.field(rep.l2_u(k));
    w.field(rep.l2_chi(k));
    w.field(rep.l2_q(k));
    w.end_row();
  }
}

}  // namespace ddmm
