#ifndef POLYMECH_BENCHMARKS_HPP
#define POLYMECH_BENCHMARKS_HPP

#include <Eigen/Dense>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "polymech/fea.hpp"

namespace polymech::benchmarks {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

// Bad run configuration (missing fixture, unusable argument). Numerical
// failures surface as plain runtime errors instead.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceRow {
  double h = 0.0;
  int nelem = 0;
  int ndof = 0;
  double err_l2 = 0.0;  // relative
  double err_h1 = 0.0;  // relative
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double slope_l2 = 0.0, slope_h1 = 0.0;
};

// End-loaded cantilever (E=3e7, nu=0.3, plane stress, P=250 down, 8x4
// domain), exact displacements on the clamped edge, parabolic shear on the
// tip edge. Structured quad ladder starts at 8x4 elements and halves h per
// level.
ConvergenceReport cantilever_quad_ladder(fea::Formulation form,
                                         double alpha_star, int levels);

// Same benchmark on polygonal fixture meshes (tags: left, right).
ConvergenceReport cantilever_polygon_ladder(
    fea::Formulation form, double alpha_star,
    const std::vector<std::string>& mesh_files);

// Quarter plate with a traction-free circular hole under far-field tension
// (E=1e5, nu=0.3, plane stress, a=1, sigma=1), symmetry on the cut edges,
// exact tractions on the outer edges. Tags: symx, symy, outer_x, outer_y.
ConvergenceReport plate_hole_ladder(fea::Formulation form, double alpha_star,
                                    const std::vector<std::string>& mesh_files);

// Reentrant 270-degree corner domain (E=1000, nu=0.3, plane strain) driven
// by the exact singular mode trace on the whole boundary. Tag: boundary.
ConvergenceReport l_shape_ladder(fea::Formulation form, double alpha_star,
                                 const std::vector<std::string>& mesh_files);

// Shear-loaded prism [-1,1]^2 x [0,5] (E=1, nu=0.3, F=1), exact
// displacements on the far face, shear traction on the near face.
// Structured hex ladder starts at 2x2x10 cells.
ConvergenceReport beam3d_ladder(
    fea::Formulation form, double alpha_star, int levels,
    interp::FaceScheme scheme = interp::FaceScheme::nodal);

struct AlphaRow {
  double alpha = 0.0;
  double err_l2 = 0.0, err_h1 = 0.0;
};
struct AlphaReport {
  std::vector<AlphaRow> rows;
  double best_alpha = 0.0;  // argmin of the L2 error
};
// Cantilever benchmark on one fixture mesh across a stabilization grid.
AlphaReport alpha_study(const std::string& mesh_file,
                        const std::vector<double>& grid);

struct PatchReport {
  int nelem = 0, ndof = 0;
  double max_rel_err = 0.0;  // max free-node error over max nodal magnitude
};
// Linear displacement field imposed on every boundary node; interior nodes
// must reproduce it.
PatchReport patch_test_2d(fea::Formulation form, double alpha_star,
                          const std::string& mesh_file);
PatchReport patch_test_3d(fea::Formulation form, double alpha_star,
                          interp::FaceScheme scheme = interp::FaceScheme::nodal);

// Seven-cell hexahedral mesh of the unit cube with the interior nodes moved
// to fixed irregular positions; the classic warped patch-test mesh.
mesh::PolyMesh3D build_warped_patch_mesh();

struct SpectrumReport {
  VectorXd eig_fem, eig_sfem1, eig_stab;  // ascending
  int zeros_fem = 0, zeros_sfem1 = 0, zeros_stab = 0;
};
// Single unit-cube cell, E=1, nu=0.3; zero threshold 1e-10 * max eigenvalue.
SpectrumReport stability_spectrum(double alpha_star = 0.1);

struct EdgeCrackRow {
  double h = 0.0;
  int nelem = 0, nnodes = 0;
  double ki = 0.0, ki_norm = 0.0;  // ki_norm = KI / sqrt(pi a)
};
struct EdgeCrackReport {
  std::vector<EdgeCrackRow> rows;
  double ref_ki_norm = 0.0;  // handbook correction factor
};
// Double-edge-cracked strip (width 1, height 2, a=0.25, sigma=1, E=200e9,
// nu=0.3, plane stress), hybrid meshes with two crack-tip cells. The h per
// row labels the fixture's nominal resolution.
EdgeCrackReport edge_crack_study(const std::vector<std::string>& mesh_files,
                                 const std::vector<double>& hs);

struct InclinedCrackRow {
  double beta_deg = 0.0;
  double ki_ref = 0.0, ki_a = 0.0, ki_b = 0.0;
  double kii_ref = 0.0, kii_a = 0.0, kii_b = 0.0;
};
struct InclinedCrackReport {
  std::vector<InclinedCrackRow> rows;
};
// Center crack of half-length 1 at angle beta in a 20x20 plate under
// biaxial tension (sigma_yy=1, sigma_xx=2), one fixture per angle with a
// crack-tip cell at each end.
InclinedCrackReport inclined_crack_study(
    const std::vector<std::string>& mesh_files,
    const std::vector<double>& betas_deg);

// Worked matrices of the scalar unit-square and pentagon examples next to
// their published reference values. The published pentagon "stabilized"
// matrix is the full stiffness (consistency plus stabilization).
struct GoldenMatrices {
  Eigen::Matrix4d fem_full, fem_reduced;
  Eigen::Matrix4d sfem_sc1, sfem_sc2, vem_const, vem_stab;
  Eigen::Matrix4d ref_fem_full, ref_sfem_sc1, ref_sfem_sc2, ref_vem_const,
      ref_vem_stab;
  MatrixXd pent_sfem1, pent_vem_const, pent_vem_stab, pent_vem_full;
  MatrixXd ref_pent_consistency, ref_pent_full;
};
GoldenMatrices golden_matrices();

struct MeshInfo {
  int dim = 0;
  int nnodes = 0, nelem = 0, nsbfem = 0;
  double min_measure = 0.0, max_measure = 0.0, max_diameter = 0.0;
};
MeshInfo mesh_info(const std::string& path);

// Random convex polygon with n vertices: an affine image of n distinct
// points on the unit circle, counter-clockwise.
std::vector<Vector2d> random_convex_polygon(std::mt19937& rng, int n);

// Deterministic CSV / SVG writers.
void write_convergence_csv(const std::string& path, const ConvergenceReport& r);
void write_alpha_csv(const std::string& path, const AlphaReport& r);
void write_edge_crack_csv(const std::string& path, const EdgeCrackReport& r);
void write_inclined_csv(const std::string& path, const InclinedCrackReport& r);
void write_loglog_svg(const std::string& path, const std::string& title,
                      const ConvergenceReport& r);

}  // namespace polymech::benchmarks

#endif
