#ifndef POLYMECH_SMOOTHING_HPP
#define POLYMECH_SMOOTHING_HPP

#include <Eigen/Dense>
#include <vector>

#include "polymech/interp.hpp"
#include "polymech/mesh.hpp"

namespace polymech::smoothing {

using Eigen::MatrixXd;
using Eigen::Vector2d;

// Constant smoothed gradient over one subcell: row I is the gradient
// associated with element node I, from the boundary integral of the shape
// traces (midpoint rule per straight segment, exact for linear traces).
MatrixXd smoothed_gradient_2d(const mesh::Subcell& cell);

// Strain-displacement matrix (Voigt xx, yy, 2xy ordering of rows xx, yy, xy)
// built from a smoothed gradient table.
MatrixXd strain_matrix_2d(const MatrixXd& grads);

// One smoothing cell with its constant strain operator.
struct SmoothedCell {
  double measure = 0.0;  // area or volume
  MatrixXd B;            // 3 x 2n (2D) or 6 x 3n (3D)
};

std::vector<SmoothedCell> smoothed_cells_2d(const std::vector<Vector2d>& verts,
                                            int nc);

MatrixXd sfem_stiffness_2d(const std::vector<Vector2d>& verts, int nc,
                           const Eigen::Matrix3d& D);
MatrixXd sfem_stiffness_scalar_2d(const std::vector<Vector2d>& verts, int nc);

// One-subcell smoothing over a 3D cell from face flux integrals. Node order
// follows mesh::cell_nodes.
SmoothedCell smoothed_cell_3d(const mesh::PolyMesh3D& mesh, int c,
                              interp::FaceScheme scheme = interp::FaceScheme::nodal);

MatrixXd sfem_stiffness_3d(const mesh::PolyMesh3D& mesh, int c,
                           const Eigen::Matrix<double, 6, 6>& D,
                           interp::FaceScheme scheme = interp::FaceScheme::nodal);

}  // namespace polymech::smoothing

#endif
