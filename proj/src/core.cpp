#include "ddmm/core.hpp"

#include <cmath>

namespace ddmm {

std::string to_string(MicroSymmetry s) {
  return s == MicroSymmetry::Full ? "full" : "microstrain";
}

MicroSymmetry micro_symmetry_from_string(const std::string& s) {
  if (s == "full") return MicroSymmetry::Full;
  if (s == "microstrain") return MicroSymmetry::Microstrain;
  throw ConfigError("unknown micro symmetry '" + s + "' (expected full|microstrain)");
}

std::vector<double> mandel_scales_sym(int n) {
  const double r2 = std::sqrt(2.0);
  if (n == 1) return {1.0};
  if (n == 2) return {1.0, 1.0, r2};
  throw ConfigError("unsupported spatial dimension " + std::to_string(n));
}

std::vector<double> mandel_scales_chi(const SpaceConfig& cfg) {
  if (cfg.sym == MicroSymmetry::Microstrain) return mandel_scales_sym(cfg.n);
  return std::vector<double>(cfg.n_chi(), 1.0);
}

std::vector<double> mandel_scales_z(const SpaceConfig& cfg) {
  std::vector<double> out;
  auto push = [&out](const std::vector<double>& v) { out.insert(out.end(), v.begin(), v.end()); };
  const auto eps = mandel_scales_sym(cfg.n);
  const auto chi = mandel_scales_chi(cfg);
  std::vector<double> zet;
  for (int k = 0; k < cfg.n; ++k) zet.insert(zet.end(), chi.begin(), chi.end());
  push(eps);
  push(chi);
  push(zet);
  push(eps);
  push(chi);
  push(zet);
  return out;
}

namespace {

std::vector<std::string> sym_suffixes(int n) {
  if (n == 1) return {""};
  return {"_xx", "_yy", "_xy"};
}

std::vector<std::string> chi_suffixes(const SpaceConfig& cfg) {
  if (cfg.n == 1) return {""};
  if (cfg.sym == MicroSymmetry::Microstrain) return {"_xx", "_yy", "_xy"};
  return {"_xx", "_yy", "_xy", "_yx"};
}

}  // namespace

std::vector<std::string> component_names_z(const SpaceConfig& cfg) {
  std::vector<std::string> out;
  const char* dir[2] = {"_x", "_y"};
  auto add = [&out](const std::string& base, const std::vector<std::string>& sfx) {
    for (const auto& s : sfx) out.push_back(base + s);
  };
  const auto es = sym_suffixes(cfg.n);
  const auto cs = chi_suffixes(cfg);
  add("eps", es);
  add("gam", cs);
  for (int k = 0; k < cfg.n; ++k)
    for (const auto& s : cs) out.push_back("zet" + s + (cfg.n == 1 ? "" : dir[k]));
  add("sig", es);
  add("tau", cs);
  for (int k = 0; k < cfg.n; ++k)
    for (const auto& s : cs) out.push_back("mu" + s + (cfg.n == 1 ? "" : dir[k]));
  return out;
}

}  // namespace ddmm
