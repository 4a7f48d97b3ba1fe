#ifndef DDMM_MESH_HPP
#define DDMM_MESH_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ddmm/core.hpp"

namespace ddmm {

/// Strictly positive piecewise-constant cross-section profile for 1D bars.
struct SectionProfile {
  struct Segment {
    double from = 0, to = 0, value = 1;
  };
  double base = 1.0;
  std::vector<Segment> segments;

  double operator()(double x) const {
    for (const auto& s : segments)
      if (x >= s.from && x <= s.to) return s.value;
    return base;
  }
};

/// Nodes, connectivity and quadrature layout. 1D meshes use 2-node linear
/// elements with one material point each; 2D meshes use bilinear quads with
/// 2x2 Gauss quadrature (4 material points per element).
struct Mesh {
  int n = 1;  // spatial dimension
  MicroSymmetry sym = MicroSymmetry::Microstrain;
  Eigen::MatrixXd nodes;     // num_nodes x n
  Eigen::MatrixXi elements;  // num_elements x (2 or 4), counterclockwise quads
  std::vector<double> section;  // per element, 1D only

  int num_nodes() const { return static_cast<int>(nodes.rows()); }
  int num_elements() const { return static_cast<int>(elements.rows()); }
  int nodes_per_element() const { return n == 1 ? 2 : 4; }
  int points_per_element() const { return n == 1 ? 1 : 4; }
  int num_points() const { return num_elements() * points_per_element(); }

  SpaceConfig space() const { return {n, sym}; }
  int u_dofs() const { return num_nodes() * n; }
  int chi_dofs() const { return num_nodes() * space().n_chi(); }
  int total_dofs() const { return u_dofs() + chi_dofs(); }

  /// Combined dof numbering: all u dofs first, then all chi dofs.
  int u_dof(int node, int comp) const { return node * n + comp; }
  int chi_dof(int node, int comp) const { return u_dofs() + node * space().n_chi() + comp; }

  double volume() const;
  Eigen::Vector2d bbox_min() const;
  Eigen::Vector2d bbox_max() const;
};

/// Gauss point coordinates and shape data for bilinear quads.
void quad_gauss_point(int g, double* xi, double* eta);
void quad_shape_at(const Mesh& mesh, int element, double xi, double eta, Eigen::Vector4d& N,
                   Eigen::Matrix<double, 4, 2>& dNdx, double& detJ);

Mesh build_mesh_1d(double length, int n_elements, const SectionProfile& profile,
                   MicroSymmetry sym = MicroSymmetry::Microstrain);

Mesh build_mesh_2d(const std::string& node_file, const std::string& element_file,
                   MicroSymmetry sym = MicroSymmetry::Microstrain);

void write_mesh_csv(const Mesh& mesh, const std::string& node_file, const std::string& element_file);

/// One prescribed degree of freedom; its value at a load step with load
/// factor t is offset + scale * t.
struct DirichletDof {
  int dof = 0;  // combined dof index
  double scale = 0;
  double offset = 0;
};

/// Load steps plus boundary data. Nodal force vectors are split into a
/// constant part (e.g. confining tractions) and a part proportional to the
/// load factor.
struct LoadProgram {
  std::vector<double> factors;  // one per step, strictly increasing step index
  std::vector<DirichletDof> dirichlet;
  Eigen::VectorXd f_const, f_scale;  // size u_dofs + chi_dofs (combined)
  int steps() const { return static_cast<int>(factors.size()); }

  static LoadProgram make(const Mesh& mesh, int steps, double factor_max);
  Eigen::VectorXd external_forces(int step) const;
};

/// Sum of a balance residual over the driven (scale != 0) Dirichlet u dofs:
/// the reaction carried by the loaded boundary.
double reaction_force(const Mesh& mesh, const LoadProgram& program, const Eigen::VectorXd& residual);

/// Free/constrained split of the combined dof space with per-step prescribed
/// values. Free dofs keep their relative order.
struct DofPartition {
  std::vector<int> full_to_free;  // -1 where constrained
  std::vector<int> free_to_full;
  Eigen::VectorXd prescribed;  // full-sized; zero at free dofs
  std::vector<char> is_constrained;

  static DofPartition make(const Mesh& mesh, const LoadProgram& program);
  void set_load_factor(const LoadProgram& program, double factor);

  int free_count() const { return static_cast<int>(free_to_full.size()); }
  Eigen::VectorXd expand(const Eigen::VectorXd& free_values) const;  // adds prescribed
  Eigen::VectorXd expand_zero(const Eigen::VectorXd& free_values) const;  // zeros at constrained
  Eigen::VectorXd restrict(const Eigen::VectorXd& full) const;
};

}  // namespace ddmm

#endif
