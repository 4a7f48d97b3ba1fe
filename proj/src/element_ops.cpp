#include "ddmm/element_ops.hpp"

#include <cmath>

namespace ddmm {

namespace {

ElementOps make_1d(const Mesh& mesh, int point) {
  ElementOps ops;
  ops.point = point;
  ops.element = point;
  const int n0 = mesh.elements(point, 0), n1 = mesh.elements(point, 1);
  const double L = mesh.nodes(n1, 0) - mesh.nodes(n0, 0);
  if (L <= 0) throw InvalidGeometryError("element " + std::to_string(point) + ": non-positive length");
  ops.weight = L * mesh.section[point];

  ops.B_eps.resize(1, 2);
  ops.B_eps << -1.0 / L, 1.0 / L;
  ops.B_gam = ops.B_eps;
  ops.N_chi.resize(1, 2);
  ops.N_chi << 0.5, 0.5;
  ops.B_zeta = ops.B_eps;
  ops.N_scalar.resize(2);
  ops.N_scalar << 0.5, 0.5;
  ops.B_scalar = ops.B_eps;

  ops.u_dofs = {mesh.u_dof(n0, 0), mesh.u_dof(n1, 0)};
  ops.chi_dofs = {mesh.chi_dof(n0, 0), mesh.chi_dof(n1, 0)};
  return ops;
}

ElementOps make_2d(const Mesh& mesh, int point, MicroSymmetry sym) {
  ElementOps ops;
  ops.point = point;
  ops.element = point / 4;
  const int g = point % 4;
  double xi, eta;
  quad_gauss_point(g, &xi, &eta);
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> dNdx;
  double detJ;
  quad_shape_at(mesh, ops.element, xi, eta, N, dNdx, detJ);
  ops.weight = detJ;  // 2x2 Gauss weights are 1

  const SpaceConfig cfg{2, sym};
  const int nchi = cfg.n_chi();
  const double inv_r2 = 1.0 / std::sqrt(2.0);

  // Mandel rows: (xx, yy, sqrt(2) xy).
  ops.B_eps = Eigen::MatrixXd::Zero(3, 8);
  for (int a = 0; a < 4; ++a) {
    ops.B_eps(0, 2 * a) = dNdx(a, 0);
    ops.B_eps(1, 2 * a + 1) = dNdx(a, 1);
    ops.B_eps(2, 2 * a) = inv_r2 * dNdx(a, 1);
    ops.B_eps(2, 2 * a + 1) = inv_r2 * dNdx(a, 0);
  }

  if (sym == MicroSymmetry::Microstrain) {
    // Relative strain reduces to sym(grad u) - chi with chi symmetric.
    ops.B_gam = ops.B_eps;
  } else {
    // Full gradient, components (xx, yy, xy, yx) unscaled.
    ops.B_gam = Eigen::MatrixXd::Zero(4, 8);
    for (int a = 0; a < 4; ++a) {
      ops.B_gam(0, 2 * a) = dNdx(a, 0);
      ops.B_gam(1, 2 * a + 1) = dNdx(a, 1);
      ops.B_gam(2, 2 * a) = dNdx(a, 1);
      ops.B_gam(3, 2 * a + 1) = dNdx(a, 0);
    }
  }

  ops.N_chi = Eigen::MatrixXd::Zero(nchi, 4 * nchi);
  ops.B_zeta = Eigen::MatrixXd::Zero(2 * nchi, 4 * nchi);
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < nchi; ++c) {
      ops.N_chi(c, nchi * a + c) = N(a);
      ops.B_zeta(c, nchi * a + c) = dNdx(a, 0);          // d/dx block
      ops.B_zeta(nchi + c, nchi * a + c) = dNdx(a, 1);   // d/dy block
    }

  ops.N_scalar = N.transpose();
  ops.B_scalar = dNdx.transpose();

  ops.u_dofs.resize(8);
  ops.chi_dofs.resize(4 * nchi);
  for (int a = 0; a < 4; ++a) {
    const int node = mesh.elements(ops.element, a);
    ops.u_dofs[2 * a] = mesh.u_dof(node, 0);
    ops.u_dofs[2 * a + 1] = mesh.u_dof(node, 1);
    for (int c = 0; c < nchi; ++c) ops.chi_dofs[nchi * a + c] = mesh.chi_dof(node, c);
  }
  return ops;
}

}  // namespace

ElementOps element_operators(const Mesh& mesh, int material_point, MicroSymmetry sym) {
  if (material_point < 0 || material_point >= mesh.num_points())
    throw MismatchError("material point id " + std::to_string(material_point) + " out of range");
  return mesh.n == 1 ? make_1d(mesh, material_point) : make_2d(mesh, material_point, sym);
}

std::vector<ElementOps> all_element_operators(const Mesh& mesh) {
  std::vector<ElementOps> out;
  out.reserve(mesh.num_points());
  for (int p = 0; p < mesh.num_points(); ++p) out.push_back(element_operators(mesh, p, mesh.sym));
  return out;
}

Eigen::VectorXd ElementOps::gather_u(const Eigen::VectorXd& full) const {
  Eigen::VectorXd v(u_dofs.size());
  for (size_t i = 0; i < u_dofs.size(); ++i) v(i) = full(u_dofs[i]);
  return v;
}

Eigen::VectorXd ElementOps::gather_chi(const Eigen::VectorXd& full) const {
  Eigen::VectorXd v(chi_dofs.size());
  for (size_t i = 0; i < chi_dofs.size(); ++i) v(i) = full(chi_dofs[i]);
  return v;
}

Eigen::VectorXd ElementOps::gather_scalar(const Eigen::VectorXd& nodal, const Mesh& mesh) const {
  const int npe = mesh.nodes_per_element();
  Eigen::VectorXd v(npe);
  for (int a = 0; a < npe; ++a) v(a) = nodal(mesh.elements(element, a));
  return v;
}

StrainState evaluate_strains(const ElementOps& ops, const Eigen::VectorXd& full_dofs) {
  StrainState s;
  const Eigen::VectorXd u = ops.gather_u(full_dofs);
  const Eigen::VectorXd chi = ops.gather_chi(full_dofs);
  s.eps = ops.B_eps * u;
  s.gam = ops.B_gam * u - ops.N_chi * chi;
  s.zet = ops.B_zeta * chi;
  return s;
}

}  // namespace ddmm
