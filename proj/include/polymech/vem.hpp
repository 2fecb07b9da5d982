#ifndef POLYMECH_VEM_HPP
#define POLYMECH_VEM_HPP

#include <Eigen/Dense>
#include <vector>

#include "polymech/interp.hpp"
#include "polymech/mesh.hpp"

namespace polymech::vem {

using Eigen::MatrixXd;
using Eigen::Vector2d;

// Lowest-order scalar (Laplace) virtual element on a polygon.
// K_const = R R^T / |E| reproduces linear fields exactly; K_stab penalises
// the complement of the affine projector Pi (no scaling parameter).
struct VemScalarParts {
  MatrixXd R;        // n x 2, row I = (l_{I-1} n_{I-1} + l_I n_I) / 2
  MatrixXd Pi;       // n x n affine projector on nodal values
  MatrixXd K_const;
  MatrixXd K_stab;
  MatrixXd K;        // K_const + K_stab
};

VemScalarParts vem_scalar_stiffness(const std::vector<Vector2d>& verts);

// First-order 3D elasticity virtual element. Projection matrices split into
// rigid-body (R) and constant-deformation (C) parts; W_R, W_C are the dual
// bases built from the boundary flux weights q_I = (1/(2V)) int N_I n dS, so
// that W_R^T N_R = W_C^T N_C = I holds exactly. Coordinates are centered at
// the cell node average (required for the duality identity).
struct VemElasticParts {
  std::vector<int> nodes;  // global node ids, dof order follows this
  double volume = 0.0;
  MatrixXd N_R, N_C, W_R, W_C;  // 3n x 6 each
  MatrixXd K_const;
  MatrixXd K_stab;
  MatrixXd K;
};

VemElasticParts vem_elasticity_3d_stiffness(
    const mesh::PolyMesh3D& mesh, int c, const Eigen::Matrix<double, 6, 6>& D,
    double alpha_star = 0.1,
    interp::FaceScheme scheme = interp::FaceScheme::nodal);

}  // namespace polymech::vem

#endif
