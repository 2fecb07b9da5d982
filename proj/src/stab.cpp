#include "polymech/stab.hpp"

#include "polymech/smoothing.hpp"

namespace polymech::stab {

MatrixXd build_T(const std::vector<Vector2d>& coords) {
  const int n = static_cast<int>(coords.size());
  Vector2d c = Vector2d::Zero();
  for (const auto& p : coords) c += p;
  c /= n;
  MatrixXd T = MatrixXd::Zero(2 * n, 6);
  for (int i = 0; i < n; ++i) {
    const double x = coords[i].x() - c.x();
    const double y = coords[i].y() - c.y();
    T.row(2 * i) << 1, 0, y, x, 0, y;
    T.row(2 * i + 1) << 0, 1, -x, 0, y, x;
  }
  return T;
}

MatrixXd build_T(const std::vector<Vector3d>& coords) {
  const int n = static_cast<int>(coords.size());
  Vector3d c = Vector3d::Zero();
  for (const auto& p : coords) c += p;
  c /= n;
  MatrixXd T = MatrixXd::Zero(3 * n, 12);
  for (int i = 0; i < n; ++i) {
    const double x = coords[i].x() - c.x();
    const double y = coords[i].y() - c.y();
    const double z = coords[i].z() - c.z();
    T.row(3 * i)     << 1, 0, 0,  y, 0, -z,  x, 0, 0,  y, 0, z;
    T.row(3 * i + 1) << 0, 1, 0, -x, z,  0,  0, y, 0,  x, z, 0;
    T.row(3 * i + 2) << 0, 0, 1,  0, -y, x,  0, 0, z,  0, y, x;
  }
  return T;
}

MatrixXd stability_projector(const MatrixXd& T) {
  const auto n = T.rows();
  return MatrixXd::Identity(n, n) -
         T * (T.transpose() * T).ldlt().solve(T.transpose());
}

MatrixXd stabilized_stiffness_2d(const std::vector<Vector2d>& verts,
                                 const Eigen::Matrix3d& D, double alpha_star) {
  const MatrixXd K1 = smoothing::sfem_stiffness_2d(verts, 1, D);
  const MatrixXd P = stability_projector(build_T(verts));
  return K1 + alpha_star * K1.trace() * P;
}

MatrixXd stabilized_stiffness_3d(const mesh::PolyMesh3D& mesh, int c,
                                 const Eigen::Matrix<double, 6, 6>& D,
                                 double alpha_star, interp::FaceScheme scheme) {
  const MatrixXd K1 = smoothing::sfem_stiffness_3d(mesh, c, D, scheme);
  std::vector<Vector3d> coords;
  for (int i : mesh::cell_nodes(mesh, c)) coords.push_back(mesh.nodes[i]);
  const MatrixXd P = stability_projector(build_T(coords));
  return K1 + alpha_star * K1.trace() * P;
}

}  // namespace polymech::stab
