#include <doctest.h>

#include <random>

#include "ddmm/nn_index.hpp"
#include "oracles.hpp"

using namespace ddmm;

namespace {

MaterialDataSet random_dataset(std::mt19937_64& rng, const SpaceConfig& cfg, int count,
                               double q_max = 1.0) {
  std::uniform_real_distribution<double> uq(0.0, q_max);
  MaterialDataSet data;
  data.cfg = cfg;
  data.Z.resize(count, cfg.z_dim());
  data.q.resize(count);
  data.src_point = Eigen::VectorXi::Zero(count);
  data.src_step = Eigen::VectorXi::Zero(count);
  for (int i = 0; i < count; ++i) {
    data.Z.row(i) = oracle::random_phase_vector(rng, cfg);
    data.q(i) = uq(rng);
  }
  return data;
}

ElasticityParams params_for(int n) {
  ElasticityParams p;
  if (n == 1) {
    p.E = 1.0;
    p.ell_chi = 0.1;
  } else {
    p.E = 25850;
    p.nu = 0.18;
    p.ell_chi = 12.5;
  }
  return p;
}

}  // namespace

TEST_CASE("two-point set returns the nearer point") {
  const SpaceConfig cfg{1, MicroSymmetry::Microstrain};
  MaterialDataSet data;
  data.cfg = cfg;
  data.Z = Eigen::MatrixXd::Zero(2, 6);
  data.Z(1, 0) = 1.0;
  data.q = Eigen::VectorXd::Zero(2);
  data.src_point = Eigen::VectorXi::Zero(2);
  data.src_step = Eigen::VectorXi::Zero(2);
  const MetricTensors metric = microstrain_metric(params_for(1), 1);
  const NnIndex index = NnIndex::build(data, metric, 0);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(6);
  z(0) = 0.9;
  const auto r = index.nearest(z, 1.0, 1.0, 0.0, 1.0);
  CHECK(r.index == 1);
  CHECK(r.index == oracle::brute_force_nn(data, z, metric, 1.0, 0.0, 1.0));
}

TEST_CASE("indexed search matches brute force, with windows, scales and hints") {
  for (const int n : {1, 2}) {
    const SpaceConfig cfg{n, MicroSymmetry::Microstrain};
    const ElasticityParams p = params_for(n);
    const MetricTensors metric = microstrain_metric(p, n);
    std::mt19937_64 rng(1234 + n);
    const MaterialDataSet data = random_dataset(rng, cfg, 10000);
    const NnIndex index = NnIndex::build(data, metric, 0);
    std::uniform_real_distribution<double> uq(0.0, 1.0);
    std::uniform_int_distribution<int> uh(-1, data.size() - 1);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd z = oracle::random_phase_vector(rng, cfg);
      double lo = uq(rng), width = uq(rng);
      double scale = 1.0;
      if (trial % 3 == 1) scale = 0.25;   // uniformly rescaled metric
      if (trial % 3 == 2) scale = 1e-3;   // secant floor regime
      const int want = oracle::brute_force_nn(data, z, metric, scale, lo, lo + width);
      if (want < 0) {
        CHECK_THROWS_AS(index.nearest(z, scale, 1.0 / scale, lo, lo + width, uh(rng)), StarvationError);
        continue;
      }
      const auto got = index.nearest(z, scale, 1.0 / scale, lo, lo + width, uh(rng));
      CHECK(got.index == want);
    }
  }
}

TEST_CASE("uniform rescaling of the metric form leaves every argmin unchanged") {
  const SpaceConfig cfg{1, MicroSymmetry::Microstrain};
  const ElasticityParams p = params_for(1);
  std::mt19937_64 rng(99);
  const MaterialDataSet data = random_dataset(rng, cfg, 2000);
  const MetricTensors metric = microstrain_metric(p, 1);
  const NnIndex index = NnIndex::build(data, metric, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd z = oracle::random_phase_vector(rng, cfg);
    const auto base = index.nearest(z, 1.0, 1.0, 0.0, 1.0);
    const auto scaled = index.nearest(z, 4.0, 4.0, 0.0, 1.0);
    CHECK(base.index == scaled.index);
    CHECK(scaled.d2 == doctest::Approx(4.0 * base.d2).epsilon(1e-14));
    // and against brute force under the scaled form
    const int want = oracle::brute_force_nn(data, z, metric, 1.0, 0.0, 1.0);
    CHECK(scaled.index == want);
  }
}

TEST_CASE("whitened distance equals the metric distance") {
  const SpaceConfig cfg{2, MicroSymmetry::Microstrain};
  const ElasticityParams p = params_for(2);
  const MetricTensors metric = microstrain_metric(p, 2);
  std::mt19937_64 rng(5);
  const MaterialDataSet data = random_dataset(rng, cfg, 64);
  const NnIndex index = NnIndex::build(data, metric, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd z = oracle::random_phase_vector(rng, cfg);
    const Eigen::VectorXd y = oracle::random_phase_vector(rng, cfg);
    const double white = (index.whiten(z) - index.whiten(y)).squaredNorm();
    const double metric_d = local_distance_sq(z, y, metric, cfg);
    CHECK(white == doctest::Approx(metric_d).epsilon(1e-10));
  }
}

TEST_CASE("exact duplicate data resolves ties by lowest id") {
  const SpaceConfig cfg{1, MicroSymmetry::Microstrain};
  std::mt19937_64 rng(7);
  MaterialDataSet data = random_dataset(rng, cfg, 64);
  data.Z.row(40) = data.Z.row(7);  // duplicate of an earlier row
  data.q(40) = data.q(7);
  const MetricTensors metric = microstrain_metric(params_for(1), 1);
  const NnIndex index = NnIndex::build(data, metric, 0);
  const Eigen::VectorXd z = data.Z.row(7).transpose();
  CHECK(index.nearest(z, 1.0, 1.0, 0.0, 1.0).index == 7);
  CHECK(index.nearest(z, 1.0, 1.0, 0.0, 1.0, 40).index == 7);
}

TEST_CASE("starvation reports an empty window") {
  const SpaceConfig cfg{1, MicroSymmetry::Microstrain};
  std::mt19937_64 rng(11);
  const MaterialDataSet data = random_dataset(rng, cfg, 32, 0.5);
  const MetricTensors metric = microstrain_metric(params_for(1), 1);
  const NnIndex index = NnIndex::build(data, metric, 0);
  CHECK_THROWS_AS(index.nearest(data.Z.row(0).transpose(), 1.0, 1.0, 0.9, 1.0), StarvationError);
}

TEST_CASE("fallback scan and tree agree near the selectivity threshold") {
  const SpaceConfig cfg{1, MicroSymmetry::Microstrain};
  std::mt19937_64 rng(21);
  const MaterialDataSet data = random_dataset(rng, cfg, 5000);
  const MetricTensors metric = microstrain_metric(params_for(1), 1);
  NnIndex index = NnIndex::build(data, metric, 0);
  for (double frac : {0.0, 0.5, 1.0}) {  // force tree-only, mixed, scan-only
    index.fallback_fraction = frac;
    std::mt19937_64 qrng(33);
    std::uniform_real_distribution<double> uq(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
      const Eigen::VectorXd z = oracle::random_phase_vector(qrng, cfg);
      const double lo = uq(qrng);
      const int want = oracle::brute_force_nn(data, z, metric, 1.0, lo, lo + 0.02);
      if (want < 0) continue;
      CHECK(index.nearest(z, 1.0, 1.0, lo, lo + 0.02).index == want);
    }
  }
}
