// Timing comparison of the OpenMP kernels against the serial reference path:
// batch nearest-neighbor queries, stiffness/residual assembly and return maps.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "ddmm/assembly.hpp"
#include "ddmm/dd_solver.hpp"
#include "ddmm/meshgen.hpp"
#include "ddmm/parallel.hpp"
#include "ddmm/plasticity.hpp"

using namespace ddmm;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

struct Row {
  const char* name;
  double serial, parallel;
};

void print_row(const Row& r) {
  std::printf("%-28s %10.4f s %10.4f s %8.2fx\n", r.name, r.serial, r.parallel,
              r.serial / std::max(r.parallel, 1e-12));
}

}  // namespace

int main() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);

  // dataset + queries in the 2D microstrain phase space
  const SpaceConfig cfg{2, MicroSymmetry::Microstrain};
  ElasticityParams ep;
  ep.E = 25850;
  ep.nu = 0.18;
  ep.ell_chi = 12.5;
  const MetricTensors metric = microstrain_metric(ep, 2);

  const int nd = 200000, nq = 20000;
  MaterialDataSet data;
  data.cfg = cfg;
  data.Z.resize(nd, cfg.z_dim());
  for (int i = 0; i < nd; ++i)
    for (int c = 0; c < cfg.z_dim(); ++c)
      data.Z(i, c) = 1e-3 * normal(rng) / (c < cfg.strain_dim() ? 1.0 : 1e-4);
  data.q = Eigen::VectorXd::Zero(nd);
  data.src_point = Eigen::VectorXi::Zero(nd);
  data.src_step = Eigen::VectorXi::Zero(nd);
  const NnIndex index = NnIndex::build(data, metric, 7);

  Eigen::MatrixXd queries(nq, cfg.z_dim());
  for (int i = 0; i < nq; ++i) queries.row(i) = data.Z.row(rng() % nd);
  queries.array() *= 1.0001;

  std::vector<int> out(nq);
  auto nn_batch = [&] {
    par::parallel_for(nq, [&](std::int64_t i) {
      out[i] = index.nearest(queries.row(i).transpose(), 1.0, 1.0, 0.0, 1.0, -1).index;
    });
  };

  // assembly on the shipped coarse biaxial mesh
  const Mesh mesh = generate_biaxial(BiaxialGeometry{});
  const auto ops = all_element_operators(mesh);
  LoadProgram program = LoadProgram::make(mesh, 1, 1.0);
  DofPartition partition = DofPartition::make(mesh, program);
  const ModuliSet base = microstrain_moduli(ep, 2);
  auto assemble = [&] {
    volatile auto K = assemble_stiffness(mesh, ops, base, nullptr, nullptr, partition);
    (void)K;
  };

  // return maps
  PlasticityParams pp;
  pp.elastic = ep;
  pp.sigma_y = 14.85;
  pp.A_phi = 0.29;
  pp.A_theta = 0.25;
  const int nrm = 500000;
  std::vector<Mandel6> strains(nrm);
  for (auto& s : strains)
    for (int c = 0; c < 6; ++c) s(c) = 2e-3 * normal(rng);
  std::vector<double> kap(nrm);
  auto return_maps = [&] {
    par::parallel_for(nrm, [&](std::int64_t i) {
      kap[i] = dp_return_map(strains[i], Mandel6::Zero(), pp).dkappa;
    });
  };

  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");
  for (auto [name, fn] : std::initializer_list<std::pair<const char*, std::function<void()>>>{
           {"nn batch (200k x 20k)", nn_batch},
           {"stiffness assembly", assemble},
           {"return maps (500k)", return_maps}}) {
    par::set_max_threads(1);
    const double ts = time_best_of(3, fn);
    par::set_max_threads(0);
    const double tp = time_best_of(3, fn);
    print_row({name, ts, tp});
  }
  return 0;
}
