#include "ddmm/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "ddmm/io.hpp"

namespace ddmm {

namespace {

// 2x2 Gauss abscissae on [-1, 1].
constexpr double kGauss = 0.5773502691896257645091488;

void quad_shape(double xi, double eta, double N[4], double dN[4][2]) {
  const double xm = 1 - xi, xp = 1 + xi, em = 1 - eta, ep = 1 + eta;
  N[0] = 0.25 * xm * em;
  N[1] = 0.25 * xp * em;
  N[2] = 0.25 * xp * ep;
  N[3] = 0.25 * xm * ep;
  dN[0][0] = -0.25 * em;
  dN[0][1] = -0.25 * xm;
  dN[1][0] = 0.25 * em;
  dN[1][1] = -0.25 * xp;
  dN[2][0] = 0.25 * ep;
  dN[2][1] = 0.25 * xp;
  dN[3][0] = -0.25 * ep;
  dN[3][1] = 0.25 * xm;
}

}  // namespace

void quad_gauss_point(int g, double* xi, double* eta) {
  static const double gx[4] = {-kGauss, kGauss, kGauss, -kGauss};
  static const double ge[4] = {-kGauss, -kGauss, kGauss, kGauss};
  *xi = gx[g];
  *eta = ge[g];
}

void quad_shape_at(const Mesh& mesh, int element, double xi, double eta, Eigen::Vector4d& N,
                   Eigen::Matrix<double, 4, 2>& dNdx, double& detJ) {
  double Ns[4], dN[4][2];
  quad_shape(xi, eta, Ns, dN);
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
  for (int a = 0; a < 4; ++a) {
    const auto x = mesh.nodes.row(mesh.elements(element, a));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) J(i, j) += dN[a][j] * x(i);
  }
  detJ = J.determinant();
  if (detJ <= 0)
    throw InvalidGeometryError("element " + std::to_string(element) +
                               ": non-positive Jacobian determinant");
  const Eigen::Matrix2d Jinv = J.inverse();
  for (int a = 0; a < 4; ++a) {
    N(a) = Ns[a];
    for (int i = 0; i < 2; ++i) dNdx(a, i) = Jinv(0, i) * dN[a][0] + Jinv(1, i) * dN[a][1];
  }
}

double Mesh::volume() const {
  double v = 0;
  if (n == 1) {
    for (int e = 0; e < num_elements(); ++e)
      v += (nodes(elements(e, 1), 0) - nodes(elements(e, 0), 0)) * section[e];
    return v;
  }
  Eigen::Vector4d N;
  Eigen::Matrix<double, 4, 2> dNdx;
  double detJ;
  for (int e = 0; e < num_elements(); ++e)
    for (int g = 0; g < 4; ++g) {
      double xi, eta;
      quad_gauss_point(g, &xi, &eta);
      quad_shape_at(*this, e, xi, eta, N, dNdx, detJ);
      v += detJ;
    }
  return v;
}

Eigen::Vector2d Mesh::bbox_min() const {
  Eigen::Vector2d m = Eigen::Vector2d::Zero();
  for (int i = 0; i < n; ++i) m(i) = nodes.col(i).minCoeff();
  return m;
}

Eigen::Vector2d Mesh::bbox_max() const {
  Eigen::Vector2d m = Eigen::Vector2d::Zero();
  for (int i = 0; i < n; ++i) m(i) = nodes.col(i).maxCoeff();
  return m;
}

Mesh build_mesh_1d(double length, int n_elements, const SectionProfile& profile, MicroSymmetry sym) {
  if (length <= 0) throw InvalidGeometryError("bar length must be positive");
  if (n_elements < 1) throw InvalidGeometryError("need at least one element");
  Mesh mesh;
  mesh.n = 1;
  mesh.sym = sym;
  mesh.nodes.resize(n_elements + 1, 1);
  for (int i = 0; i <= n_elements; ++i) mesh.nodes(i, 0) = length * i / n_elements;
  mesh.elements.resize(n_elements, 2);
  mesh.section.resize(n_elements);
  for (int e = 0; e < n_elements; ++e) {
    mesh.elements(e, 0) = e;
    mesh.elements(e, 1) = e + 1;
    const double xm = 0.5 * (mesh.nodes(e, 0) + mesh.nodes(e + 1, 0));
    mesh.section[e] = profile(xm);
    if (mesh.section[e] <= 0)
      throw InvalidGeometryError("cross-section profile must be strictly positive (element " +
                                 std::to_string(e) + ")");
  }
  return mesh;
}

Mesh build_mesh_2d(const std::string& node_file, const std::string& element_file, MicroSymmetry sym) {
  Mesh mesh;
  mesh.n = 2;
  mesh.sym = sym;

  CsvTable nodes = read_csv(node_file);
  if (nodes.columns() < 3) throw ParseError(node_file + ": expected columns id,x,y");
  mesh.nodes.resize(nodes.rows(), 2);
  for (int r = 0; r < nodes.rows(); ++r) {
    const int id = static_cast<int>(nodes.value(r, 0));
    if (id < 0 || id >= nodes.rows())
      throw ParseError(node_file + ":" + std::to_string(r + 2) + ": node id out of range");
    mesh.nodes(id, 0) = nodes.value(r, 1);
    mesh.nodes(id, 1) = nodes.value(r, 2);
  }

  CsvTable elems = read_csv(element_file);
  if (elems.columns() < 5) throw ParseError(element_file + ": expected columns id,n1,n2,n3,n4");
  mesh.elements.resize(elems.rows(), 4);
  for (int r = 0; r < elems.rows(); ++r) {
    const int id = static_cast<int>(elems.value(r, 0));
    if (id < 0 || id >= elems.rows())
      throw ParseError(element_file + ":" + std::to_string(r + 2) + ": element id out of range");
    for (int a = 0; a < 4; ++a) {
      const int node = static_cast<int>(elems.value(r, 1 + a));
      if (node < 0 || node >= mesh.num_nodes())
        throw InvalidGeometryError("element " + std::to_string(id) + " references missing node " +
                                   std::to_string(node));
      mesh.elements(id, a) = node;
    }
  }

  // Jacobian check at every quadrature point; flags inverted elements.
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

void write_mesh_csv(const Mesh& mesh, const std::string& node_file, const std::string& element_file) {
  CsvWriter nodes(node_file);
  nodes.header(mesh.n == 1 ? std::vector<std::string>{"id", "x"}
                           : std::vector<std::string>{"id", "x", "y"});
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    nodes.field(i);
    for (int c = 0; c < mesh.n; ++c) nodes.field(mesh.nodes(i, c));
    nodes.end_row();
  }
  CsvWriter elems(element_file);
  std::vector<std::string> hdr{"id"};
  for (int a = 0; a < mesh.nodes_per_element(); ++a) hdr.push_back("n" + std::to_string(a + 1));
  elems.header(hdr);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    elems.field(e);
    for (int a = 0; a < mesh.nodes_per_element(); ++a) elems.field(mesh.elements(e, a));
    elems.end_row();
  }
}

LoadProgram LoadProgram::make(const Mesh& mesh, int steps, double factor_max) {
  LoadProgram p;
  p.factors.resize(steps);
  for (int k = 0; k < steps; ++k) p.factors[k] = factor_max * (k + 1) / steps;
  p.f_const = Eigen::VectorXd::Zero(mesh.total_dofs());
  p.f_scale = Eigen::VectorXd::Zero(mesh.total_dofs());
  return p;
}

Eigen::VectorXd LoadProgram::external_forces(int step) const {
  return f_const + factors.at(step) * f_scale;
}

double reaction_force(const Mesh& mesh, const LoadProgram& program,
                      const Eigen::VectorXd& residual) {
  double f = 0;
  for (const auto& d : program.dirichlet)
    if (d.scale != 0 && d.dof < mesh.u_dofs()) f += residual(d.dof);
  return f;
}

DofPartition DofPartition::make(const Mesh& mesh, const LoadProgram& program) {
  DofPartition p;
  const int total = mesh.total_dofs();
  p.is_constrained.assign(total, 0);
  for (const auto& d : program.dirichlet) {
    if (d.dof < 0 || d.dof >= total) throw MismatchError("Dirichlet dof out of range");
    p.is_constrained[d.dof] = 1;
  }
  p.full_to_free.assign(total, -1);
  for (int i = 0; i < total; ++i)
    if (!p.is_constrained[i]) {
      p.full_to_free[i] = static_cast<int>(p.free_to_full.size());
      p.free_to_full.push_back(i);
    }
  p.prescribed = Eigen::VectorXd::Zero(total);
  return p;
}

void DofPartition::set_load_factor(const LoadProgram& program, double factor) {
  prescribed.setZero();
  for (const auto& d : program.dirichlet) prescribed(d.dof) = d.offset + d.scale * factor;
}

Eigen::VectorXd DofPartition::expand(const Eigen::VectorXd& free_values) const {
  Eigen::VectorXd full = prescribed;
  for (int i = 0; i < free_count(); ++i) full(free_to_full[i]) = free_values(i);
  return full;
}

Eigen::VectorXd DofPartition::expand_zero(const Eigen::VectorXd& free_values) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(prescribed.size());
  for (int i = 0; i < free_count(); ++i) full(free_to_full[i]) = free_values(i);
  return full;
}

Eigen::VectorXd DofPartition::restrict(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(free_count());
  for (int i = 0; i < free_count(); ++i) out(i) = full(free_to_full[i]);
  return out;
}

}  // namespace ddmm
