#include "polymech/smoothing.hpp"

#include <algorithm>
#include <stdexcept>

namespace polymech::smoothing {

MatrixXd smoothed_gradient_2d(const mesh::Subcell& cell) {
  const int m = static_cast<int>(cell.corners.size());
  const int n = static_cast<int>(cell.corner_shapes[0].size());
  MatrixXd g = MatrixXd::Zero(n, 2);
  for (int s = 0; s < m; ++s) {
    const int t = (s + 1) % m;
    const Vector2d e = cell.corners[t] - cell.corners[s];
    const Vector2d nl(e.y(), -e.x());  // outward normal times segment length
    const Eigen::VectorXd nmid =
        0.5 * (cell.corner_shapes[s] + cell.corner_shapes[t]);
    g += nmid * nl.transpose();
  }
  return g / cell.area;
}

MatrixXd strain_matrix_2d(const MatrixXd& grads) {
  const int n = static_cast<int>(grads.rows());
  MatrixXd B = MatrixXd::Zero(3, 2 * n);
  for (int i = 0; i < n; ++i) {
    B(0, 2 * i) = grads(i, 0);
    B(1, 2 * i + 1) = grads(i, 1);
    B(2, 2 * i) = grads(i, 1);
    B(2, 2 * i + 1) = grads(i, 0);
  }
  return B;
}

std::vector<SmoothedCell> smoothed_cells_2d(const std::vector<Vector2d>& verts,
                                            int nc) {
  std::vector<SmoothedCell> out;
  for (const auto& sc : mesh::polygon_subcells(verts, nc))
    out.push_back({sc.area, strain_matrix_2d(smoothed_gradient_2d(sc))});
  return out;
}

MatrixXd sfem_stiffness_2d(const std::vector<Vector2d>& verts, int nc,
                           const Eigen::Matrix3d& D) {
  const int n = static_cast<int>(verts.size());
  MatrixXd K = MatrixXd::Zero(2 * n, 2 * n);
  for (const auto& c : smoothed_cells_2d(verts, nc))
    K += c.measure * c.B.transpose() * D * c.B;
  return K;
}

MatrixXd sfem_stiffness_scalar_2d(const std::vector<Vector2d>& verts, int nc) {
  const int n = static_cast<int>(verts.size());
  MatrixXd K = MatrixXd::Zero(n, n);
  for (const auto& sc : mesh::polygon_subcells(verts, nc)) {
    const MatrixXd g = smoothed_gradient_2d(sc);
    K += sc.area * g * g.transpose();
  }
  return K;
}

SmoothedCell smoothed_cell_3d(const mesh::PolyMesh3D& mesh, int c,
                              interp::FaceScheme scheme) {
  const std::vector<int> nodes = mesh::cell_nodes(mesh, c);
  const int n = static_cast<int>(nodes.size());
  std::vector<Eigen::Vector3d> flux(n, Eigen::Vector3d::Zero());
  double vol = 0.0;
  const mesh::CellFaces cf = mesh::oriented_cell_faces(mesh, c);
  for (const auto& loop : cf.faces) {
    std::vector<Eigen::Vector3d> pts;
    for (int i : loop) pts.push_back(mesh.nodes[i]);
    const auto t = interp::face_flux_integrals(pts, scheme);
    vol += interp::face_volume_flux(pts);
    for (size_t k = 0; k < loop.size(); ++k) {
      const auto it = std::lower_bound(nodes.begin(), nodes.end(), loop[k]);
      flux[it - nodes.begin()] += t[k];
    }
  }
  if (vol <= 0.0) throw std::runtime_error("smoothed_cell_3d: nonpositive volume");
  SmoothedCell out;
  out.measure = vol;
  // Voigt rows xx, yy, zz, xy, yz, zx.
  out.B = MatrixXd::Zero(6, 3 * n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d b = flux[i] / vol;
    out.B(0, 3 * i) = b.x();
    out.B(1, 3 * i + 1) = b.y();
    out.B(2, 3 * i + 2) = b.z();
    out.B(3, 3 * i) = b.y();
    out.B(3, 3 * i + 1) = b.x();
    out.B(4, 3 * i + 1) = b.z();
    out.B(4, 3 * i + 2) = b.y();
    out.B(5, 3 * i) = b.z();
    out.B(5, 3 * i + 2) = b.x();
  }
  return out;
}

MatrixXd sfem_stiffness_3d(const mesh::PolyMesh3D& mesh, int c,
                           const Eigen::Matrix<double, 6, 6>& D,
                           interp::FaceScheme scheme) {
  const SmoothedCell sc = smoothed_cell_3d(mesh, c, scheme);
  return sc.measure * sc.B.transpose() * D * sc.B;
}

}  // namespace polymech::smoothing
