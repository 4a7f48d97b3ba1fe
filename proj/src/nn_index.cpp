#include "ddmm/nn_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddmm {

namespace {
constexpr int kLeafSize = 8;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

NnIndex::NnIndex(Eigen::MatrixXd whitened, Eigen::VectorXd q, std::vector<Block> blocks,
                 int strain_dim, std::uint64_t seed)
    : points_(std::move(whitened)),
      q_(std::move(q)),
      blocks_(std::move(blocks)),
      strain_dim_(strain_dim),
      seed_(seed) {
  if (points_.rows() == 0) throw MismatchError("cannot index an empty data set");
  const int n = static_cast<int>(points_.rows());
  perm_.resize(n);
  for (int i = 0; i < n; ++i) perm_[i] = i;
  nodes_.reserve(2 * n / kLeafSize + 8);
  std::vector<double> lo(points_.cols()), hi(points_.cols());
  build_node(0, n, lo, hi);

  by_q_.resize(n);
  for (int i = 0; i < n; ++i) by_q_[i] = i;
  std::sort(by_q_.begin(), by_q_.end(), [this](int a, int b) {
    return q_(a) != q_(b) ? q_(a) < q_(b) : a < b;
  });
}

int NnIndex::build_node(int begin, int end, std::vector<double>& lo, std::vector<double>& hi) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({});
  if (end - begin <= kLeafSize) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    // fixed id order inside leaves keeps the lowest-id tie-break cheap
    std::sort(perm_.begin() + begin, perm_.begin() + end);
    return id;
  }
  const int dim = static_cast<int>(points_.cols());
  for (int d = 0; d < dim; ++d) {
    lo[d] = kInf;
    hi[d] = -kInf;
  }
  for (int i = begin; i < end; ++i)
    for (int d = 0; d < dim; ++d) {
      const double v = points_(perm_[i], d);
      lo[d] = std::min(lo[d], v);
      hi[d] = std::max(hi[d], v);
    }
  int split_dim = 0;
  double spread = -1;
  for (int d = 0; d < dim; ++d)
    if (hi[d] - lo[d] > spread) {
      spread = hi[d] - lo[d];
      split_dim = d;
    }
  const int mid = (begin + end) / 2;
  std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                   [this, split_dim](int a, int b) {
                     const double va = points_(a, split_dim), vb = points_(b, split_dim);
                     return va != vb ? va < vb : a < b;
                   });
  const double split = points_(perm_[mid], split_dim);
  nodes_[id].dim = split_dim;
  nodes_[id].split = split;
  const int l = build_node(begin, mid, lo, hi);
  const int r = build_node(mid, end, lo, hi);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

NnIndex NnIndex::build(const MaterialDataSet& data, const MetricTensors& metric,
                       std::uint64_t seed) {
  data.validate();
  const SpaceConfig& cfg = data.cfg;
  const double r = std::sqrt(0.5);
  std::vector<Block> blocks;
  blocks.push_back({cfg.off_eps(), r * metric.C_chol().transpose()});
  blocks.push_back({cfg.off_gam(), r * metric.D_chol().transpose()});
  blocks.push_back({cfg.off_zet(), r * metric.A_chol().transpose()});
  blocks.push_back({cfg.off_sig(),
                    r * metric.C_chol().triangularView<Eigen::Lower>().solve(
                            Eigen::MatrixXd::Identity(cfg.n_eps(), cfg.n_eps()))});
  blocks.push_back({cfg.off_tau(),
                    r * metric.D_chol().triangularView<Eigen::Lower>().solve(
                            Eigen::MatrixXd::Identity(cfg.n_chi(), cfg.n_chi()))});
  blocks.push_back({cfg.off_mu(),
                    r * metric.A_chol().triangularView<Eigen::Lower>().solve(
                            Eigen::MatrixXd::Identity(cfg.n_zeta(), cfg.n_zeta()))});

  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> W(data.size(),
                                                                           cfg.z_dim());
  for (const auto& b : blocks) {
    const int sz = static_cast<int>(b.W.rows());
    W.middleCols(b.offset, sz) = data.Z.middleCols(b.offset, sz) * b.W.transpose();
  }
  return NnIndex(std::move(W), data.q, std::move(blocks), cfg.strain_dim(), seed);
}

NnIndex NnIndex::build_blocks(const Eigen::MatrixXd& Z, const Eigen::VectorXd& q,
                              const std::vector<Eigen::MatrixXd>& strain_metrics,
                              std::uint64_t seed) {
  if (Z.rows() == 0) throw MismatchError("cannot index an empty data set");
  const double r = std::sqrt(0.5);
  std::vector<Block> blocks;
  int off = 0;
  for (const auto& M : strain_metrics) {
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) throw NotSpdError("block metric is not positive definite");
    Eigen::MatrixXd L = llt.matrixL();
    blocks.push_back({off, r * L.transpose()});
    off += static_cast<int>(M.rows());
  }
  const int strain_dim = off;
  for (const auto& M : strain_metrics) {
    Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(M).matrixL();
    blocks.push_back({off, r * L.triangularView<Eigen::Lower>()
                               .solve(Eigen::MatrixXd::Identity(M.rows(), M.cols()))
                               .eval()});
    off += static_cast<int>(M.rows());
  }
  if (off != Z.cols()) throw MismatchError("block metrics do not cover the coordinate space");

  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> W(Z.rows(), Z.cols());
  for (const auto& b : blocks) {
    const int sz = static_cast<int>(b.W.rows());
    W.middleCols(b.offset, sz) = Z.middleCols(b.offset, sz) * b.W.transpose();
  }
  return NnIndex(std::move(W), q, std::move(blocks), strain_dim, seed);
}

Eigen::VectorXd NnIndex::whiten(const Eigen::VectorXd& z) const {
  Eigen::VectorXd w(points_.cols());
  for (const auto& b : blocks_) {
    const int sz = static_cast<int>(b.W.rows());
    w.segment(b.offset, sz) = b.W * z.segment(b.offset, sz);
  }
  return w;
}

double NnIndex::point_dist2(const double* q, const double* w, int id, double cutoff) const {
  const double* p = points_.data() + static_cast<std::ptrdiff_t>(id) * points_.cols();
  const int dim = static_cast<int>(points_.cols());
  double acc = 0;
  for (int d = 0; d < dim; ++d) {
    const double dz = q[d] - p[d];
    acc += w[d] * dz * dz;
    if (acc > cutoff) return acc;
  }
  return acc;
}

void NnIndex::search(int node, const double* q, const double* w, double rd,
                     std::vector<double>& off, double q_lo, double q_hi, double& best_d2,
                     int& best_id) const {
  const Node& nd = nodes_[node];
  if (nd.left < 0) {
    for (int i = nd.begin; i < nd.end; ++i) {
      const int id = perm_[i];
      const double qi = q_(id);
      if (qi < q_lo || qi > q_hi) continue;
      const double d2 = point_dist2(q, w, id, best_d2);
      if (d2 < best_d2 || (d2 == best_d2 && id < best_id)) {
        best_d2 = d2;
        best_id = id;
      }
    }
    return;
  }
  const int dim = nd.dim;
  const double delta = q[dim] - nd.split;
  const int near = delta < 0 ? nd.left : nd.right;
  const int far = delta < 0 ? nd.right : nd.left;
  search(near, q, w, rd, off, q_lo, q_hi, best_d2, best_id);
  const double old = off[dim];
  const double rd_far = rd - w[dim] * old * old + w[dim] * delta * delta;
  // equality still needs the visit: a far point could tie with a lower id
  if (rd_far <= best_d2) {
    off[dim] = delta;
    search(far, q, w, rd_far, off, q_lo, q_hi, best_d2, best_id);
    off[dim] = old;
  }
}

int NnIndex::count_admissible(double q_lo, double q_hi) const {
  auto lower = std::lower_bound(by_q_.begin(), by_q_.end(), q_lo,
                                [this](int id, double v) { return q_(id) < v; });
  auto upper = std::upper_bound(by_q_.begin(), by_q_.end(), q_hi,
                                [this](double v, int id) { return v < q_(id); });
  return static_cast<int>(upper - lower);
}

NnIndex::Result NnIndex::nearest(const Eigen::VectorXd& z_raw, double strain_scale,
                                 double stress_scale, double q_lo, double q_hi, int hint) const {
  if (!(strain_scale > 0) || !(stress_scale > 0))
    throw ConfigError("metric scales must be positive");
  const Eigen::VectorXd zw = whiten(z_raw);
  const int dim = static_cast<int>(points_.cols());
  std::vector<double> w(dim);
  for (int d = 0; d < dim; ++d) w[d] = d < strain_dim_ ? strain_scale : stress_scale;

  double best_d2 = kInf;
  int best_id = -1;
  if (hint >= 0 && hint < size() && q_(hint) >= q_lo && q_(hint) <= q_hi) {
    best_id = hint;
    best_d2 = point_dist2(zw.data(), w.data(), hint, kInf);
  }

  auto lower = std::lower_bound(by_q_.begin(), by_q_.end(), q_lo,
                                [this](int id, double v) { return q_(id) < v; });
  auto upper = std::upper_bound(by_q_.begin(), by_q_.end(), q_hi,
                                [this](double v, int id) { return v < q_(id); });
  const long admissible = upper - lower;
  if (admissible == 0)
    throw StarvationError("no admissible datum in window q in [" + std::to_string(q_lo) + ", " +
                          std::to_string(q_hi) + "]");

  if (static_cast<double>(admissible) < fallback_fraction * size()) {
    // window too selective for tree pruning; scan the admissible ids
    for (auto it = lower; it != upper; ++it) {
      const int id = *it;
      const double d2 = point_dist2(zw.data(), w.data(), id, best_d2);
      if (d2 < best_d2 || (d2 == best_d2 && id < best_id)) {
        best_d2 = d2;
        best_id = id;
      }
    }
    return {best_id, best_d2};
  }

  std::vector<double> off(dim, 0.0);
  search(0, zw.data(), w.data(), 0.0, off, q_lo, q_hi, best_d2, best_id);
  return {best_id, best_d2};
}

}  // namespace ddmm
