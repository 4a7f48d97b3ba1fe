#include "ddmm/dataset.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ddmm/io.hpp"

namespace ddmm {

using nlohmann::json;

void MaterialDataSet::validate() const {
  if (Z.rows() == 0) throw MismatchError("material data set is empty");
  if (Z.cols() != cfg.z_dim()) throw MismatchError("dataset column count does not match configuration");
  if (q.size() != Z.rows() || src_point.size() != Z.rows() || src_step.size() != Z.rows())
    throw MismatchError("dataset columns have unequal lengths");
  for (int i = 0; i < q.size(); ++i)
    if (!std::isfinite(q(i)) || q(i) < 0)
      throw MismatchError("dataset q column must be finite and >= 0 (row " + std::to_string(i) + ")");
}

MaterialDataSet load_dataset(const std::string& path, int stride) {
  if (stride < 1) throw ConfigError("dataset stride must be >= 1");
  const std::string sidecar = path + ".json";
  std::ifstream side(sidecar);
  if (!side) throw ParseError("missing dataset sidecar '" + sidecar + "'");
  json j;
  try {
    side >> j;
  } catch (const std::exception& e) {
    throw ParseError(sidecar + ": " + e.what());
  }

  MaterialDataSet data;
  data.cfg.n = j.at("n").get<int>();
  data.cfg.sym = micro_symmetry_from_string(j.at("micro_symmetry").get<std::string>());
  data.units = j.value("units", "nondimensional");
  if (j.at("n_chi").get<int>() != data.cfg.n_chi() || j.at("n_zeta").get<int>() != data.cfg.n_zeta())
    throw MismatchError(sidecar + ": component counts inconsistent with (n, micro_symmetry)");

  CsvTable t = read_csv(path);
  const auto names = component_names_z(data.cfg);
  std::vector<int> cols(names.size());
  for (size_t c = 0; c < names.size(); ++c) cols[c] = t.column_required(names[c], path);
  const int cp = t.column_required("point", path);
  const int cs = t.column_required("step", path);
  const int cq = t.column_required("q", path);

  const auto scales = mandel_scales_z(data.cfg);
  std::vector<int> keep;
  keep.reserve(t.rows());
  for (int r = 0; r < t.rows(); ++r)
    if (static_cast<long>(t.value(r, cp)) % stride == 0) keep.push_back(r);
  if (keep.empty()) throw MismatchError(path + ": no rows remain (empty set)");

  data.Z.resize(static_cast<long>(keep.size()), data.cfg.z_dim());
  data.q.resize(keep.size());
  data.src_point.resize(keep.size());
  data.src_step.resize(keep.size());
  for (size_t i = 0; i < keep.size(); ++i) {
    const int r = keep[i];
    data.src_point(i) = static_cast<int>(t.value(r, cp));
    data.src_step(i) = static_cast<int>(t.value(r, cs));
    data.q(i) = t.value(r, cq);
    for (int c = 0; c < data.cfg.z_dim(); ++c) data.Z(i, c) = scales[c] * t.value(r, cols[c]);
  }
  data.validate();
  return data;
}

void save_dataset(const MaterialDataSet& data, const std::string& path, const std::string& seed_note) {
  data.validate();
  CsvWriter w(path);
  if (!seed_note.empty()) w.comment("seed", seed_note);
  std::vector<std::string> hdr{"point", "step", "q"};
  const auto names = component_names_z(data.cfg);
  hdr.insert(hdr.end(), names.begin(), names.end());
  w.header(hdr);
  const auto scales = mandel_scales_z(data.cfg);
  for (int r = 0; r < data.size(); ++r) {
    w.field(static_cast<long>(data.src_point(r)));
    w.field(static_cast<long>(data.src_step(r)));
    w.field(data.q(r));
    for (int c = 0; c < data.cfg.z_dim(); ++c) w.field(data.Z(r, c) / scales[c]);
    w.end_row();
  }

  json j;
  j["n"] = data.cfg.n;
  j["micro_symmetry"] = to_string(data.cfg.sym);
  j["n_chi"] = data.cfg.n_chi();
  j["n_zeta"] = data.cfg.n_zeta();
  j["units"] = data.units;
  std::ofstream side(path + ".json");
  if (!side) throw Error("cannot write '" + path + ".json'");
  side << j.dump(2) << "\n";
}

MaterialDataSet stride_dataset(const MaterialDataSet& data, int stride) {
  if (stride < 1) throw ConfigError("dataset stride must be >= 1");
  std::vector<int> keep;
  for (int r = 0; r < data.size(); ++r)
    if (data.src_point(r) % stride == 0) keep.push_back(r);
  if (keep.empty()) throw MismatchError("strided dataset is empty");
  MaterialDataSet out;
  out.cfg = data.cfg;
  out.units = data.units;
  out.Z.resize(static_cast<long>(keep.size()), data.Z.cols());
  out.q.resize(keep.size());
  out.src_point.resize(keep.size());
  out.src_step.resize(keep.size());
  for (size_t i = 0; i < keep.size(); ++i) {
    out.Z.row(i) = data.Z.row(keep[i]);
    out.q(i) = data.q(keep[i]);
    out.src_point(i) = data.src_point(keep[i]);
    out.src_step(i) = data.src_step(keep[i]);
  }
  return out;
}

}  // namespace ddmm
