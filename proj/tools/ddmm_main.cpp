// Command-line harness: reference runs, data sampling, data-driven runs,
// convergence sweeps and run comparison. See README.md and docs/FORMAT.md.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>

#include "ddmm/compare.hpp"
#include "ddmm/io.hpp"
#include "ddmm/meshgen.hpp"
#include "ddmm/parallel.hpp"
#include "ddmm/runio.hpp"

namespace {

using namespace ddmm;

ReferenceRun run_reference(const Scenario& scenario) {
  if (scenario.model == "damage")
    return damage_solve_history(scenario.mesh, scenario.program, scenario.damage,
                                scenario.alpha_dirichlet_nodes);
  return plastic_solve_history(scenario.mesh, scenario.program, scenario.plastic);
}

std::vector<DdStepRecord> run_dd(const Scenario& scenario, const MaterialDataSet& data,
                                 const std::string& mode) {
  const MetricTensors metric = scenario.metric();
  if (mode == "cauchy")
    return solve_history_cauchy(scenario.mesh, scenario.program, data, metric, scenario.dd);
  DdSolver solver(scenario.mesh, scenario.program, data, metric, scenario.dd);
  return solver.solve_history();
}

int cmd_reference(const std::string& scenario_path, const std::string& outdir) {
  const Scenario scenario = load_scenario(scenario_path);
  std::printf("reference: scenario %s, %d steps, %d material points\n", scenario.name.c_str(),
              scenario.program.steps(), scenario.mesh.num_points());
  const ReferenceRun run = run_reference(scenario);
  write_reference_run(outdir, scenario, run);
  std::printf("reference: wrote %zu step records to %s\n", run.steps.size(), outdir.c_str());
  return 0;
}

int cmd_sample(const std::string& ref_dir, int stride, const std::string& output) {
  const RunSeries series = read_run(ref_dir, false);
  const ReferenceRun run = reference_run_from_series(series);
  const MaterialDataSet data = export_dataset(run, stride);
  save_dataset(data, output, std::to_string(series.meta.seed));
  std::printf("sample: %d rows (%d sampling points x %d steps) -> %s\n", data.size(),
              data.size() / static_cast<int>(run.steps.size()),
              static_cast<int>(run.steps.size()), output.c_str());
  return 0;
}

int cmd_dd(const std::string& scenario_path, const std::string& data_path, const std::string& mode,
           std::int64_t seed, int stride, const std::string& outdir) {
  Scenario scenario = load_scenario(scenario_path);
  if (seed >= 0) scenario.dd.seed = static_cast<std::uint64_t>(seed);
  const MaterialDataSet data = load_dataset(data_path, stride);
  std::printf("dd: scenario %s, mode %s, |D| = %d, seed %llu\n", scenario.name.c_str(),
              mode.c_str(), data.size(), static_cast<unsigned long long>(scenario.dd.seed));
  const auto steps = run_dd(scenario, data, mode);
  write_dd_run(outdir, scenario, steps, data, mode);
  std::printf("dd: wrote %zu step records to %s (final relative distance %.4g)\n", steps.size(),
              outdir.c_str(), steps.empty() ? 0.0 : steps.back().relative_distance());
  return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& strides_arg, int seeds,
              const std::string& mode, const std::string& outdir) {
  Scenario scenario = load_scenario(scenario_path);
  std::vector<int> strides;
  {
    std::stringstream ss(strides_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) strides.push_back(static_cast<int>(parse_long(tok, "stride")));
  }
  ensure_directory(outdir);
  std::printf("sweep: scenario %s, %zu strides, %d seed(s)\n", scenario.name.c_str(),
              strides.size(), seeds);
  const ReferenceRun ref = run_reference(scenario);
  const MaterialDataSet full = export_dataset(ref, 1);

  CsvWriter w(outdir + "/sweep.csv");
  w.comment("scenario", scenario.name);
  w.comment("seeds", std::to_string(seeds));
  w.header({"stride", "data_size", "final_rel_distance", "peak_rel_distance"});
  std::vector<double> log_sizes, log_errors;
  for (const int stride : strides) {
    const MaterialDataSet data = stride_dataset(full, stride);
    double final_acc = 0, peak_acc = 0;
    for (int s = 0; s < seeds; ++s) {
      Scenario sc = scenario;
      sc.dd.seed = scenario.dd.seed + static_cast<std::uint64_t>(s);
      const auto steps = run_dd(sc, data, mode);
      final_acc += steps.back().relative_distance();
      double peak = 0;
      for (const auto& st : steps) peak = std::max(peak, st.relative_distance());
      peak_acc += peak;
    }
    const double final_avg = final_acc / seeds;
    w.field(static_cast<long>(stride));
    w.field(static_cast<long>(data.size()));
    w.field(final_avg);
    w.field(peak_acc / seeds);
    w.end_row();
    log_sizes.push_back(std::log(static_cast<double>(data.size())));
    log_errors.push_back(std::log(std::max(final_avg, 1e-300)));
    std::printf("sweep: stride %d -> |D| = %d, final relative distance %.4g\n", stride,
                data.size(), final_avg);
  }
  // least-squares slope in log-log space
  if (log_sizes.size() >= 2) {
    const auto n = static_cast<double>(log_sizes.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < log_sizes.size(); ++i) {
      sx += log_sizes[i];
      sy += log_errors[i];
      sxx += log_sizes[i] * log_sizes[i];
      sxy += log_sizes[i] * log_errors[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    std::printf("sweep: log-log convergence slope %.4f\n", slope);
  }
  return 0;
}

int cmd_compare(const std::string& dd_dir, const std::string& ref_dir, const std::string& output) {
  const ComparisonReport rep = compare_dirs(dd_dir, ref_dir);
  write_report(rep, output);
  std::printf("compare: %d steps; final err vs reference %.4g; top-decile overlap %.3f -> %s\n",
              rep.steps(), rep.err_vs_ref(rep.steps() - 1), rep.jaccard_top_decile,
              output.c_str());
  return 0;
}

int cmd_mesh(const std::string& kind, const std::string& outdir, int ns, int nr, int side_a,
             int side_b) {
  ensure_directory(outdir);
  Mesh mesh;
  if (kind == "vnotch") {
    VnotchGeometry g;
    if (ns > 0) g.ns = ns;
    if (nr > 0) g.nr = nr;
    mesh = generate_vnotch(g);
  } else if (kind == "biaxial") {
    BiaxialGeometry g;
    if (side_a > 0) g.side_a = side_a;
    if (side_b > 0) g.side_b = side_b;
    if (nr > 0) g.nr = nr;
    mesh = generate_biaxial(g);
  } else {
    std::fprintf(stderr, "unknown mesh kind '%s' (vnotch|biaxial)\n", kind.c_str());
    return 1;
  }
  write_mesh_csv(mesh, outdir + "/" + kind + "_nodes.csv", outdir + "/" + kind + "_elements.csv");
  std::printf("mesh: %s with %d nodes, %d elements -> %s\n", kind.c_str(), mesh.num_nodes(),
              mesh.num_elements(), outdir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-free data-driven solver for micromorphic continua"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker cap (0 = all, 1 = serial)");

  std::string scenario_path, outdir = "out", data_path, ref_dir, dd_dir, output, mode =
      "micromorphic";
  int stride = 1, seeds = 1, ns = 0, nr = 0, side_a = 0, side_b = 0;
  std::int64_t seed = -1;
  std::string strides = "1,2,4,8", kind;

  auto* ref = app.add_subcommand("reference", "run a reference constitutive model");
  ref->add_option("scenario", scenario_path)->required();
  ref->add_option("-o,--out", outdir);

  auto* sample = app.add_subcommand("sample", "export a material data set from a reference run");
  sample->add_option("ref_dir", ref_dir)->required();
  sample->add_option("--stride", stride);
  sample->add_option("-o,--out", output)->required();

  auto* dd = app.add_subcommand("dd", "run the data-driven solver");
  dd->add_option("scenario", scenario_path)->required();
  dd->add_option("--data", data_path)->required();
  dd->add_option("--mode", mode)->check(CLI::IsMember({"micromorphic", "cauchy"}));
  dd->add_option("--seed", seed);
  dd->add_option("--stride", stride);
  dd->add_option("-o,--out", outdir);

  auto* sweep = app.add_subcommand("sweep", "data-size convergence sweep");
  sweep->add_option("scenario", scenario_path)->required();
  sweep->add_option("--strides", strides);
  sweep->add_option("--seeds", seeds);
  sweep->add_option("--mode", mode)->check(CLI::IsMember({"micromorphic", "cauchy"}));
  sweep->add_option("-o,--out", outdir);

  auto* cmp = app.add_subcommand("compare", "compare a dd run against a reference run");
  cmp->add_option("dd_dir", dd_dir)->required();
  cmp->add_option("ref_dir", ref_dir)->required();
  cmp->add_option("-o,--out", output)->default_val("report.csv");

  auto* mesh = app.add_subcommand("mesh", "generate a shipped mesh (vnotch|biaxial)");
  mesh->add_option("kind", kind)->required();
  mesh->add_option("-o,--out", outdir);
  mesh->add_option("--ns", ns);
  mesh->add_option("--nr", nr);
  mesh->add_option("--side-a", side_a);
  mesh->add_option("--side-b", side_b);

  CLI11_PARSE(app, argc, argv);
  ddmm::par::set_max_threads(threads);

  try {
    if (*ref) return cmd_reference(scenario_path, outdir);
    if (*sample) return cmd_sample(ref_dir, stride, output);
    if (*dd) return cmd_dd(scenario_path, data_path, mode, seed, stride, outdir);
    if (*sweep) return cmd_sweep(scenario_path, strides, seeds, mode, outdir);
    if (*cmp) return cmd_compare(dd_dir, ref_dir, output);
    if (*mesh) return cmd_mesh(kind, outdir, ns, nr, side_a, side_b);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
