#include "ddmm/meshgen.hpp"

#include <array>
#include <cmath>
#include <map>
#include <vector>

namespace ddmm {

namespace {

struct NodePool {
  std::vector<std::array<double, 2>> coords;
  std::map<std::pair<long, long>, int> lookup;
  double quantum;

  explicit NodePool(double q) : quantum(q) {}

  int add(double x, double y) {
    const std::pair<long, long> key{std::lround(x / quantum), std::lround(y / quantum)};
    const auto it = lookup.find(key);
    if (it != lookup.end()) return it->second;
    const int id = static_cast<int>(coords.size());
    coords.push_back({x, y});
    lookup.emplace(key, id);
    return id;
  }
};

Mesh finish(const NodePool& pool, const std::vector<std::array<int, 4>>& quads, MicroSymmetry sym) {
  Mesh mesh;
  mesh.n = 2;
  mesh.sym = sym;
  mesh.nodes.resize(static_cast<long>(pool.coords.size()), 2);
  for (size_t i = 0; i < pool.coords.size(); ++i) {
    mesh.nodes(i, 0) = pool.coords[i][0];
    mesh.nodes(i, 1) = pool.coords[i][1];
  }
  mesh.elements.resize(static_cast<long>(quads.size()), 4);
  for (size_t e = 0; e < quads.size(); ++e)
    for (int a = 0; a < 4; ++a) mesh.elements(e, a) = quads[e][a];
  // validate Jacobians
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> dNdx;
  double detJ;
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int g = 0; g < 4; ++g) {
      double xi, eta;
      quad_gauss_point(g, &xi, &eta);
      quad_shape_at(mesh, e, xi, eta, N, dNdx, detJ);
    }
  return mesh;
}

}  // namespace

Mesh generate_vnotch(const VnotchGeometry& g, MicroSymmetry sym) {
  if (g.ns % 2 != 0) throw InvalidGeometryError("vnotch: ns must be even");
  if (2 * g.notch_depth >= g.width) throw InvalidGeometryError("vnotch: notches overlap");
  if (2 * g.notch_half_open >= g.height) throw InvalidGeometryError("vnotch: notch too tall");

  const double W = g.width, H = g.height, d = g.notch_depth, a = g.notch_half_open;
  auto notch_offset = [&](double x) {
    if (x < d) return a * (1.0 - x / d);
    if (x > W - d) return a * (x - (W - d)) / d;
    return 0.0;
  };

  NodePool pool(1e-9 * std::max(W, H));
  std::vector<std::array<int, 4>> quads;

  // two transfinite halves; r = 0 on the notch line, graded toward it
  for (int half = 0; half < 2; ++half) {
    std::vector<std::vector<int>> grid(g.ns + 1, std::vector<int>(g.nr + 1));
    for (int i = 0; i <= g.ns; ++i) {
      const double x = W * i / g.ns;
      const double off = notch_offset(x);
      for (int j = 0; j <= g.nr; ++j) {
        const double rho = std::pow(static_cast<double>(j) / g.nr, g.grade);
        const double y = half == 0 ? (H / 2 + off) + rho * (H - (H / 2 + off))
                                   : (H / 2 - off) - rho * (H / 2 - off);
        grid[i][j] = pool.add(x, y);
      }
    }
    for (int i = 0; i < g.ns; ++i)
      for (int j = 0; j < g.nr; ++j) {
        if (half == 0)
          quads.push_back({grid[i][j], grid[i + 1][j], grid[i + 1][j + 1], grid[i][j + 1]});
        else
          quads.push_back({grid[i][j], grid[i][j + 1], grid[i + 1][j + 1], grid[i + 1][j]});
      }
  }
  return finish(pool, quads, sym);
}

Mesh generate_biaxial(const BiaxialGeometry& g, MicroSymmetry sym) {
  if (g.side_a % 2 != 0) throw InvalidGeometryError("biaxial: side_a must be even");
  const double W = g.width, H = g.height, R = g.hole_radius;
  if (2 * R >= std::min(W, H)) throw InvalidGeometryError("biaxial: hole too large");
  const double cx = W / 2, cy = H / 2;

  // perimeter trace, counterclockwise from the origin corner
  std::vector<std::array<double, 2>> per;
  for (int i = 0; i < g.side_a; ++i) per.push_back({W * i / g.side_a, 0.0});
  for (int j = 0; j < g.side_b; ++j) per.push_back({W, H * j / g.side_b});
  for (int i = 0; i < g.side_a; ++i) per.push_back({W - W * i / g.side_a, H});
  for (int j = 0; j < g.side_b; ++j) per.push_back({0.0, H - H * j / g.side_b});
  const int nt = static_cast<int>(per.size());

  NodePool pool(1e-9 * std::max(W, H));
  std::vector<std::vector<int>> rays(nt, std::vector<int>(g.nr + 1));
  for (int t = 0; t < nt; ++t) {
    const double dx = per[t][0] - cx, dy = per[t][1] - cy;
    const double len = std::hypot(dx, dy);
    const double qx = cx + R * dx / len, qy = cy + R * dy / len;
    for (int r = 0; r <= g.nr; ++r) {
      const double rho = std::pow(static_cast<double>(r) / g.nr, g.grade);
      rays[t][r] = pool.add(qx + rho * (per[t][0] - qx), qy + rho * (per[t][1] - qy));
    }
  }
  std::vector<std::array<int, 4>> quads;
  for (int t = 0; t < nt; ++t) {
    const int tn = (t + 1) % nt;
    for (int r = 0; r < g.nr; ++r)
      quads.push_back({rays[t][r], rays[tn][r], rays[tn][r + 1], rays[t][r + 1]});
  }
  return finish(pool, quads, sym);
}

}  // namespace ddmm
