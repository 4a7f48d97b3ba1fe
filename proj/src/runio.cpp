#include "ddmm/runio.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "ddmm/io.hpp"

namespace ddmm {

using nlohmann::json;

std::string step_file(const std::string& dir, const std::string& prefix, int step) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%05d", step);
  return dir + "/steps/" + prefix + "_" + buf + ".csv";
}

namespace {

void write_meta(const std::string& dir, const RunMeta& meta) {
  json j;
  j["scenario"] = meta.scenario;
  j["kind"] = meta.kind;
  j["mode"] = meta.mode;
  j["n"] = meta.cfg.n;
  j["micro_symmetry"] = to_string(meta.cfg.sym);
  j["steps"] = meta.steps;
  j["points"] = meta.points;
  j["nodes"] = meta.nodes;
  j["seed"] = meta.seed;
  j["units"] = meta.units;
  j["metric"] = {{"E", meta.metric_params.E},
                 {"nu", meta.metric_params.nu},
                 {"c1", meta.metric_params.c1},
                 {"ell_chi", meta.metric_params.ell_chi}};
  std::ofstream out(dir + "/meta.json");
  if (!out) throw Error("cannot write '" + dir + "/meta.json'");
  out << j.dump(2) << "\n";
}

void write_weights(const std::string& dir, const Scenario& scenario) {
  const auto ops = all_element_operators(scenario.mesh);
  CsvWriter w(dir + "/weights.csv");
  w.header({"point", "element", "weight"});
  for (const auto& op : ops) {
    w.field(static_cast<long>(op.point));
    w.field(static_cast<long>(op.element));
    w.field(op.weight);
    w.end_row();
  }
}

void write_points_csv(const std::string& path, const SpaceConfig& cfg, int step,
                      const Eigen::MatrixXd& Z, const Eigen::VectorXd& q,
                      const Eigen::VectorXi* datum, std::uint64_t seed) {
  CsvWriter w(path);
  w.comment("seed", std::to_string(seed));
  std::vector<std::string> hdr{"point", "step", "q"};
  const auto names = component_names_z(cfg);
  hdr.insert(hdr.end(), names.begin(), names.end());
  if (datum) hdr.push_back("datum");
  w.header(hdr);
  const auto scales = mandel_scales_z(cfg);
  for (int e = 0; e < Z.rows(); ++e) {
    w.field(static_cast<long>(e));
    w.field(static_cast<long>(step));
    w.field(q(e));
    for (int c = 0; c < cfg.z_dim(); ++c) w.field(Z(e, c) / scales[c]);
    if (datum) w.field(static_cast<long>((*datum)(e)));
    w.end_row();
  }
}

std::vector<std::string> nodal_columns(const Mesh& mesh, bool with_alpha) {
  std::vector<std::string> cols;
  cols.push_back("x");
  if (mesh.n == 2) cols.push_back("y");
  if (mesh.n == 1) {
    cols.push_back("u");
    cols.push_back("chi");
  } else {
    cols.push_back("ux");
    cols.push_back("uy");
    cols.push_back("chi_xx");
    cols.push_back("chi_yy");
    cols.push_back("chi_xy");
    if (mesh.space().sym == MicroSymmetry::Full) cols.push_back("chi_yx");
  }
  if (with_alpha) cols.push_back("alpha");
  return cols;
}

void write_nodes_csv(const std::string& path, const Mesh& mesh, const Eigen::VectorXd& fields,
                     const Eigen::VectorXd* alpha, std::uint64_t seed) {
  CsvWriter w(path);
  w.comment("seed", std::to_string(seed));
  std::vector<std::string> hdr{"node"};
  const auto cols = nodal_columns(mesh, alpha != nullptr);
  hdr.insert(hdr.end(), cols.begin(), cols.end());
  w.header(hdr);
  const SpaceConfig cfg = mesh.space();
  const auto chi_scale = mandel_scales_chi(cfg);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    w.field(static_cast<long>(i));
    for (int c = 0; c < mesh.n; ++c) w.field(mesh.nodes(i, c));
    for (int c = 0; c < mesh.n; ++c) w.field(fields(mesh.u_dof(i, c)));
    for (int c = 0; c < cfg.n_chi(); ++c) w.field(fields(mesh.chi_dof(i, c)) / chi_scale[c]);
    if (alpha) w.field((*alpha)(i));
    w.end_row();
  }
}

}  // namespace

void write_reference_run(const std::string& dir, const Scenario& scenario,
                         const ReferenceRun& run) {
  ensure_directory(dir + "/steps");
  RunMeta meta;
  meta.scenario = scenario.name;
  meta.kind = "reference";
  meta.mode = scenario.model;
  meta.cfg = run.cfg;
  meta.steps = static_cast<int>(run.steps.size());
  meta.points = scenario.mesh.num_points();
  meta.nodes = scenario.mesh.num_nodes();
  meta.seed = scenario.dd.seed;
  meta.units = scenario.units;
  meta.metric_params = scenario.elastic;
  write_meta(dir, meta);
  write_weights(dir, scenario);

  CsvWriter sum(dir + "/summary.csv");
  sum.comment("scenario", scenario.name);
  sum.comment("seed", std::to_string(meta.seed));
  sum.header({"step", "load_factor", "reaction", "inner_iterations", "converged", "energy",
              "dissipation_inc", "work_inc"});
  for (const auto& st : run.steps) {
    sum.field(static_cast<long>(st.step));
    sum.field(st.load_factor);
    sum.field(st.reaction);
    sum.field(static_cast<long>(st.inner_iterations));
    sum.field(static_cast<long>(st.converged ? 1 : 0));
    sum.field(st.energy);
    sum.field(st.dissipation_inc);
    sum.field(st.work_inc);
    sum.end_row();
  }
  for (const auto& st : run.steps) {
    write_points_csv(step_file(dir, "points", st.step), run.cfg, st.step, st.Z, st.q, nullptr,
                     meta.seed);
    write_nodes_csv(step_file(dir, "nodes", st.step), scenario.mesh, st.fields,
                    st.alpha.size() ? &st.alpha : nullptr, meta.seed);
  }
}

void write_dd_run(const std::string& dir, const Scenario& scenario,
                  const std::vector<DdStepRecord>& steps, const MaterialDataSet& data,
                  const std::string& mode) {
  ensure_directory(dir + "/steps");
  RunMeta meta;
  meta.scenario = scenario.name;
  meta.kind = "dd";
  meta.mode = mode;
  meta.cfg = scenario.mesh.space();
  meta.steps = static_cast<int>(steps.size());
  meta.points = scenario.mesh.num_points();
  meta.nodes = scenario.mesh.num_nodes();
  meta.seed = scenario.dd.seed;
  meta.units = scenario.units;
  meta.metric_params = scenario.elastic;
  write_meta(dir, meta);
  write_weights(dir, scenario);

  CsvWriter sum(dir + "/summary.csv");
  sum.comment("scenario", scenario.name);
  sum.comment("seed", std::to_string(meta.seed));
  sum.comment("mode", mode);
  sum.header({"step", "load_factor", "reaction", "distance", "state_norm", "rel_distance",
              "iterations", "converged", "residual_u", "residual_chi"});
  for (const auto& st : steps) {
    sum.field(static_cast<long>(st.step + 1));
    sum.field(st.load_factor);
    sum.field(st.reaction);
    sum.field(std::sqrt(st.distance_sq));
    sum.field(std::sqrt(st.state_norm_sq));
    sum.field(st.relative_distance());
    sum.field(static_cast<long>(st.iterations));
    sum.field(static_cast<long>(st.converged ? 1 : 0));
    sum.field(st.residual_u);
    sum.field(st.residual_chi);
    sum.end_row();
  }
  const SpaceConfig cfg = scenario.mesh.space();
  for (const auto& st : steps) {
    write_points_csv(step_file(dir, "points", st.step + 1), cfg, st.step + 1, st.Z, st.q, nullptr,
                     meta.seed);
    Eigen::MatrixXd Y(st.assignment.size(), cfg.z_dim());
    for (int e = 0; e < st.assignment.size(); ++e) Y.row(e) = data.Z.row(st.assignment(e));
    write_points_csv(step_file(dir, "material", st.step + 1), cfg, st.step + 1, Y, st.q,
                     &st.assignment, meta.seed);
    write_nodes_csv(step_file(dir, "nodes", st.step + 1), scenario.mesh, st.fields, nullptr,
                    meta.seed);
  }
}

RunMeta read_run_meta(const std::string& dir) {
  std::ifstream in(dir + "/meta.json");
  if (!in) throw ParseError("cannot open '" + dir + "/meta.json'");
  json j;
  in >> j;
  RunMeta meta;
  meta.scenario = j.at("scenario").get<std::string>();
  meta.kind = j.at("kind").get<std::string>();
  meta.mode = j.at("mode").get<std::string>();
  meta.cfg.n = j.at("n").get<int>();
  meta.cfg.sym = micro_symmetry_from_string(j.at("micro_symmetry").get<std::string>());
  meta.steps = j.at("steps").get<int>();
  meta.points = j.at("points").get<int>();
  meta.nodes = j.at("nodes").get<int>();
  meta.seed = j.at("seed").get<std::uint64_t>();
  meta.units = j.value("units", "nondimensional");
  meta.metric_params.E = j.at("metric").at("E").get<double>();
  meta.metric_params.nu = j.at("metric").at("nu").get<double>();
  meta.metric_params.c1 = j.at("metric").at("c1").get<double>();
  meta.metric_params.ell_chi = j.at("metric").at("ell_chi").get<double>();
  return meta;
}

RunSeries read_run(const std::string& dir, bool load_nodal) {
  RunSeries s;
  s.meta = read_run_meta(dir);
  const CsvTable sum = read_csv(dir + "/summary.csv");
  if (sum.rows() != s.meta.steps) throw ParseError(dir + ": summary row count mismatch");
  s.load_factor.resize(sum.rows());
  s.reaction.resize(sum.rows());
  s.rel_distance = Eigen::VectorXd::Zero(sum.rows());
  const int c_load = sum.column_required("load_factor", dir);
  const int c_reac = sum.column_required("reaction", dir);
  const int c_rel = sum.column("rel_distance");
  const int c_step = sum.column_required("step", dir);
  const auto names = component_names_z(s.meta.cfg);
  const auto scales = mandel_scales_z(s.meta.cfg);
  for (int r = 0; r < sum.rows(); ++r) {
    s.load_factor(r) = sum.value(r, c_load);
    s.reaction(r) = sum.value(r, c_reac);
    if (c_rel >= 0) s.rel_distance(r) = sum.value(r, c_rel);
    const int step = static_cast<int>(sum.value(r, c_step));
    const CsvTable pts = read_csv(step_file(dir, "points", step));
    if (pts.rows() != s.meta.points) throw ParseError(dir + ": point count mismatch at step file");
    Eigen::MatrixXd Z(pts.rows(), s.meta.cfg.z_dim());
    Eigen::VectorXd q(pts.rows());
    const int cq = pts.column_required("q", dir);
    std::vector<int> cols(names.size());
    for (size_t c = 0; c < names.size(); ++c) cols[c] = pts.column_required(names[c], dir);
    for (int e = 0; e < pts.rows(); ++e) {
      q(e) = pts.value(e, cq);
      for (size_t c = 0; c < names.size(); ++c) Z(e, c) = scales[c] * pts.value(e, cols[c]);
    }
    s.Z.push_back(std::move(Z));
    s.q.push_back(std::move(q));
    if (load_nodal) {
      const CsvTable nd = read_csv(step_file(dir, "nodes", step));
      if (s.nodal_columns.empty())
        s.nodal_columns.assign(nd.header.begin() + 1, nd.header.end());
      s.nodal.push_back(nd.data.rightCols(nd.columns() - 1));
    }
  }
  const CsvTable wts = read_csv(dir + "/weights.csv");
  if (wts.rows() != s.meta.points) throw ParseError(dir + ": weights.csv row count mismatch");
  s.weights.resize(wts.rows());
  s.element.resize(wts.rows());
  const int cw = wts.column_required("weight", dir);
  const int ce = wts.column_required("element", dir);
  for (int r = 0; r < wts.rows(); ++r) {
    s.weights(r) = wts.value(r, cw);
    s.element(r) = static_cast<int>(wts.value(r, ce));
  }
  return s;
}

ReferenceRun reference_run_from_series(const RunSeries& s) {
  ReferenceRun run;
  run.cfg = s.meta.cfg;
  run.units = s.meta.units;
  for (size_t k = 0; k < s.Z.size(); ++k) {
    ReferenceStep st;
    st.step = static_cast<int>(k) + 1;
    st.load_factor = s.load_factor(k);
    st.reaction = s.reaction(k);
    st.Z = s.Z[k];
    st.q = s.q[k];
    run.steps.push_back(std::move(st));
  }
  return run;
}

}  // namespace ddmm
