#ifndef POLYMECH_INTERP_HPP
#define POLYMECH_INTERP_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "polymech/mesh.hpp"

namespace polymech::interp {

using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::VectorXd;

struct ShapeEval {
  VectorXd values;
  Eigen::MatrixXd grads;  // n x dim, reference or physical per context
};

// Bilinear quad on [-1,1]^2, nodes counter-clockwise from (-1,-1).
ShapeEval q4_shape(double xi, double eta);

// Trilinear hex on [-1,1]^3, bottom ring nodes 0..3 counter-clockwise seen
// from +zeta, top ring 4..7 above them.
ShapeEval hex8_shape(double xi, double eta, double zeta);

// Value of the polygon-center interpolant at the fan center: 1/n per node.
VectorXd polygon_center_shape(int n);

// Wachspress coordinates and physical gradients at a strictly interior point
// of a convex polygon.
ShapeEval wachspress_shape(const std::vector<Vector2d>& verts, const Vector2d& x);

struct SegPoint {
  double t;  // on [-1,1]
  double w;
};
// Exact for polynomials of the given degree; degrees 2 and 3 share the
// two-point rule.
std::vector<SegPoint> segment_rule(int order);

struct TriPoint {
  double a, b;  // reference triangle (0,0)-(1,0)-(0,1)
  double w;     // weights sum to 1/2
};
std::vector<TriPoint> triangle_rule(int order);

enum class FaceScheme { nodal, conforming };

// --- planar / bilinear face integrals for 3D cells ---
// Faces with 4 nodes are treated as bilinear patches and integrated with
// product Gauss rules, which is exact and scheme-independent (warped faces
// included). Other faces must be planar.

// Integrals of each vertex shape function over a planar face.
VectorXd face_shape_integral(const std::vector<Vector3d>& pts, FaceScheme scheme);

// Integrals of N_I * n dS over the face (outward per the winding).
std::vector<Vector3d> face_flux_integrals(const std::vector<Vector3d>& pts,
                                          FaceScheme scheme = FaceScheme::nodal);

// Contribution of the face to (1/3) * surface integral of x . n dS.
double face_volume_flux(const std::vector<Vector3d>& pts);

// Contribution to the volume first moment: component k holds the integral of
// x_k^2/2 * n_k dS over the face.
Vector3d face_moment_flux(const std::vector<Vector3d>& pts);

// The 8 node ids of a 6-face hexahedral cell in trilinear reference order.
std::array<int, 8> hex_element_nodes(const mesh::PolyMesh3D& mesh, int c);

}  // namespace polymech::interp

#endif
