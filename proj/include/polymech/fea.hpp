#ifndef POLYMECH_FEA_HPP
#define POLYMECH_FEA_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "polymech/fields.hpp"
#include "polymech/interp.hpp"
#include "polymech/mesh.hpp"
#include "polymech/sbfem.hpp"

namespace polymech::fea {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::VectorXd;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// Engineering Voigt convention; plane strain through the effective-constant
// substitution into the plane stress form.
Eigen::Matrix3d constitutive_matrix_2d(double E, double nu, bool plane_stress);
Matrix6d constitutive_matrix_3d(double E, double nu);

// fem: isoparametric quads/hexes, barycentric-rational polygons.
// sfem1/sfem2/sfem4: fixed subcell counts (quads; sfem1 also 3D cells).
// sfem: center-fan subcells on polygons, four subcells on quads.
// stab: one-subcell smoothing plus the rank-filling projector term.
// vem: 3D elasticity virtual elements.
enum class Formulation { fem, sfem1, sfem2, sfem4, sfem, stab, vem };

Formulation parse_formulation(const std::string& name);
std::string formulation_name(Formulation f);

struct FormulationOptions {
  Formulation form = Formulation::stab;
  double alpha_star = 0.1;
  interp::FaceScheme scheme = interp::FaceScheme::nodal;
};

struct DirichletBC {
  int node;
  int comp;
  double value;
};

struct Problem2D {
  const mesh::PolyMesh2D* mesh = nullptr;
  // Scaled-boundary cells assembled alongside the polygonal elements; each
  // carries the crack extension angle for its local frame.
  std::vector<mesh::SbfemCell> sbfem_cells;
  Eigen::Matrix3d D;
  FormulationOptions opts;
  std::vector<DirichletBC> dirichlet;
  std::vector<std::pair<std::string, std::function<Vector2d(const Vector2d&)>>>
      tractions;
};

struct Problem3D {
  const mesh::PolyMesh3D* mesh = nullptr;
  Matrix6d D;
  FormulationOptions opts;
  std::vector<DirichletBC> dirichlet;
  std::vector<std::pair<std::string, std::function<Vector3d(const Vector3d&)>>>
      tractions;
};

struct Solution {
  VectorXd u;
  VectorXd reactions;  // K u - f_ext, nonzero only at constrained dofs
};

MatrixXd element_stiffness(const Problem2D& p, int e);
MatrixXd element_stiffness(const Problem3D& p, int c);

Solution assemble_and_solve(const Problem2D& p);
Solution assemble_and_solve(const Problem3D& p);

// The scaled-boundary element of one hybrid cell, global coordinates.
sbfem::SbfemElement sbfem_element(const Problem2D& p, int cell);

// Intensity factors of one hybrid cell from the solved displacement vector.
sbfem::SifResult extract_sif(const Problem2D& p, const VectorXd& u, int cell);

struct ErrorNorms {
  double l2 = 0.0, h1 = 0.0;      // absolute
  double l2_rel = 0.0, h1_rel = 0.0;
};

ErrorNorms error_norms(const Problem2D& p, const VectorXd& u,
                       const fields::PlaneField& exact);
ErrorNorms error_norms(const Problem3D& p, const VectorXd& u,
                       const fields::SolidField& exact);

// Least-squares slope of log(err) against log(h).
double convergence_rate(const std::vector<double>& h,
                        const std::vector<double>& err);

// Nodes touched by a boundary tag.
std::vector<int> tagged_nodes(const mesh::PolyMesh2D& mesh, const std::string& tag);
std::vector<int> tagged_nodes(const mesh::PolyMesh3D& mesh, const std::string& tag);

}  // namespace polymech::fea

#endif
