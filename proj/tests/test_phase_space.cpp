#include <doctest.h>

#include <random>

#include "ddmm/phase_space.hpp"
#include "oracles.hpp"

using namespace ddmm;

TEST_CASE("1D microstrain metric blocks") {
  ElasticityParams p;
  p.E = 1;
  p.c1 = 1;
  p.ell_chi = 0.1;
  const MetricTensors m = microstrain_metric(p, 1);
  CHECK(m.C()(0, 0) == doctest::Approx(1.0));
  CHECK(m.D()(0, 0) == doctest::Approx(1.0));
  CHECK(m.A()(0, 0) == doctest::Approx(0.01));
}

TEST_CASE("vanishing micromorphic length is rejected as a metric") {
  ElasticityParams p;
  p.ell_chi = 0.0;
  CHECK_THROWS_AS(microstrain_metric(p, 1), NotSpdError);
}

TEST_CASE("plane-strain metric is SPD for the biaxial parameters") {
  ElasticityParams p;
  p.E = 14000;  // MPa
  p.nu = 0.3;
  p.ell_chi = 0.05;
  const MetricTensors m = microstrain_metric(p, 2);
  const double lam = p.lambda(), G = p.shear_modulus();
  CHECK(m.C()(0, 0) == doctest::Approx(lam + 2 * G));
  CHECK(m.C()(2, 2) == doctest::Approx(2 * G));
}

TEST_CASE("parameter ranges are enforced") {
  ElasticityParams p;
  p.nu = 0.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.nu = 0.3;
  p.c1 = 0.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("local distance: identical points, single components, Cauchy form") {
  const SpaceConfig cfg{1, MicroSymmetry::Microstrain};
  ElasticityParams p;
  p.E = 1;
  p.ell_chi = 0.1;
  const MetricTensors m = microstrain_metric(p, 1);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(6), y = Eigen::VectorXd::Zero(6);
  CHECK(local_distance_sq(z, z, m, cfg) == 0.0);
  z(0) = 1.0;  // eps difference of 1 with C = [1]
  CHECK(local_distance_sq(z, y, m, cfg) == doctest::Approx(0.5));
  // Cauchy pair (eps, sig + tau) = (2, 1): 2 d^2 = E eps^2 + (sig+tau)^2 / E
  const double d2 = 0.5 * (1.0 * 4.0 + 1.0 * 1.0);
  CHECK(d2 == doctest::Approx(2.5));
}

TEST_CASE("global distance is the weighted sum (loop oracle)") {
  const SpaceConfig cfg{1, MicroSymmetry::Microstrain};
  ElasticityParams p;
  p.ell_chi = 0.1;
  const MetricTensors m = microstrain_metric(p, 1);
  std::mt19937_64 rng(3);
  const int M = 10;
  Eigen::MatrixXd A(M, 6), B(M, 6);
  Eigen::VectorXd w(M);
  for (int e = 0; e < M; ++e) {
    A.row(e) = oracle::random_phase_vector(rng, cfg);
    B.row(e) = oracle::random_phase_vector(rng, cfg);
    w(e) = 0.1 + e * 0.05;
  }
  double expect = 0;
  for (int e = 0; e < M; ++e)
    expect += w(e) * local_distance_sq(A.row(e), B.row(e), m, cfg);
  CHECK(global_distance_sq(A, B, m, cfg, w) == doctest::Approx(expect).epsilon(1e-14));

  Eigen::MatrixXd A2(2, 6), B2 = Eigen::MatrixXd::Zero(2, 6);
  A2.setZero();
  A2(0, 0) = std::sqrt(2.0);  // local value 1 with C = [1]
  A2(1, 0) = std::sqrt(2.0);
  Eigen::VectorXd w2(2);
  w2 << 2, 3;
  CHECK(global_distance_sq(A2, B2, m, cfg, w2) == doctest::Approx(5.0));
}

TEST_CASE("Mandel distances equal explicit tensor contractions") {
  std::mt19937_64 rng(17);
  for (const int n : {1, 2}) {
    const SpaceConfig cfg{n, MicroSymmetry::Microstrain};
    ElasticityParams p;
    if (n == 2) {
      p.E = 25850;
      p.nu = 0.18;
      p.ell_chi = 12.5;
    } else {
      p.ell_chi = 0.1;
    }
    const MetricTensors m = microstrain_metric(p, n);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd z = oracle::random_phase_vector(rng, cfg);
      const Eigen::VectorXd y = oracle::random_phase_vector(rng, cfg);
      const double got = local_distance_sq(z, y, m, cfg);
      const double want = oracle::distance_sq_by_tensor_loops(z, y, p, cfg);
      CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("distance is a squared norm") {
  const SpaceConfig cfg{2, MicroSymmetry::Microstrain};
  ElasticityParams p;
  p.E = 100;
  p.nu = 0.25;
  p.ell_chi = 0.3;
  const MetricTensors m = microstrain_metric(p, 2);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd a = oracle::random_phase_vector(rng, cfg);
    const Eigen::VectorXd b = oracle::random_phase_vector(rng, cfg);
    const Eigen::VectorXd c = oracle::random_phase_vector(rng, cfg);
    const double dab = std::sqrt(local_distance_sq(a, b, m, cfg));
    const double dbc = std::sqrt(local_distance_sq(b, c, m, cfg));
    const double dac = std::sqrt(local_distance_sq(a, c, m, cfg));
    CHECK(dab >= 0);
    CHECK(dac <= dab + dbc + 1e-12);
  }
  const Eigen::VectorXd a = oracle::random_phase_vector(rng, cfg);
  CHECK(local_distance_sq(a, a, m, cfg) == 0.0);
}

TEST_CASE("metric construction stays SPD over random admissible parameters") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uE(1e-3, 1e5), unu(-0.9, 0.49), uc(1.0, 10.0),
      ul(1e-4, 1e3);
  for (int trial = 0; trial < 10000; ++trial) {
    ElasticityParams p;
    p.E = uE(rng);
    p.nu = unu(rng);
    p.c1 = uc(rng);
    p.ell_chi = ul(rng);
    const int n = trial % 2 ? 2 : 1;
    CHECK_NOTHROW(microstrain_metric(p, n));
  }
}

TEST_CASE("secant factor from data") {
  const SpaceConfig cfg{1, MicroSymmetry::Microstrain};
  ElasticityParams p;
  p.ell_chi = 0.1;
  const MetricTensors m = microstrain_metric(p, 1);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(6);
  z(0) = 0.7;
  z(3) = 0.7;  // sig = C eps: undamaged
  CHECK(secant_factor(z, m, cfg, 1e-3) == doctest::Approx(1.0));
  // datum from alpha = 0.5 damage: sig = (1-alpha)^2 C eps = 0.25 C eps
  z(3) = 0.25 * 0.7;
  CHECK(secant_factor(z, m, cfg, 1e-3) == doctest::Approx(0.25));
  z.setZero();
  z(3) = 1.0;  // eps = 0 guard
  CHECK(secant_factor(z, m, cfg, 1e-3) == doctest::Approx(1.0));
  // the scaled metric never exceeds the base and respects the floor
  z.setZero();
  z(0) = 1.0;
  z(3) = -5.0;
  const double s = secant_factor(z, m, cfg, 1e-3);
  CHECK(s == doctest::Approx(1e-3));
  const MetricTensors scaled = secant_metric(z, m, cfg, 1e-3);
  CHECK(scaled.C()(0, 0) == doctest::Approx(1e-3 * m.C()(0, 0)));
}
