#ifndef POLYMECH_STAB_HPP
#define POLYMECH_STAB_HPP

#include <Eigen/Dense>
#include <vector>

#include "polymech/interp.hpp"
#include "polymech/mesh.hpp"

namespace polymech::stab {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector3d;

// Columns span translations, rotations and constant-strain deformation modes
// at the nodes (6 columns in 2D, 12 in 3D), centered at the node average.
// The projector is invariant to the centering point; centering keeps the
// normal equations well conditioned.
MatrixXd build_T(const std::vector<Vector2d>& coords);
MatrixXd build_T(const std::vector<Vector3d>& coords);

// P = I - T (T^T T)^{-1} T^T: orthogonal projector onto the complement of
// the linear-field modes. P annihilates every nodal sample of an affine
// displacement field.
MatrixXd stability_projector(const MatrixXd& T);

// One-subcell smoothed stiffness plus alpha* trace(K1) P.
MatrixXd stabilized_stiffness_2d(const std::vector<Vector2d>& verts,
                                 const Eigen::Matrix3d& D, double alpha_star);
MatrixXd stabilized_stiffness_3d(const mesh::PolyMesh3D& mesh, int c,
                                 const Eigen::Matrix<double, 6, 6>& D,
                                 double alpha_star,
                                 interp::FaceScheme scheme = interp::FaceScheme::nodal);

}  // namespace polymech::stab

#endif
