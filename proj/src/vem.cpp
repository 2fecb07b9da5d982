#include "polymech/vem.hpp"

#include <algorithm>
#include <stdexcept>

namespace polymech::vem {

VemScalarParts vem_scalar_stiffness(const std::vector<Vector2d>& verts) {
  const int n = static_cast<int>(verts.size());
  const mesh::PolygonGeometry g = mesh::polygon_geometry(verts);
  VemScalarParts p;
  p.R.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    const int prev = (i + n - 1) % n;
    p.R.row(i) = 0.5 * (g.edge_lengths[prev] * g.edge_normals[prev] +
                        g.edge_lengths[i] * g.edge_normals[i])
                     .transpose();
  }
  p.K_const = p.R * p.R.transpose() / g.area;
  // Affine projector: gradient part evaluated at the raw node coordinates,
  // constant part fixed by the vertex average.
  MatrixXd coords(n, 2);
  for (int i = 0; i < n; ++i) coords.row(i) = verts[i].transpose();
  const MatrixXd Pi_grad = coords * p.R.transpose() / g.area;
  const MatrixXd Pi_o = MatrixXd::Constant(n, n, 1.0 / n);
  p.Pi = Pi_grad + Pi_o * (MatrixXd::Identity(n, n) - Pi_grad);
  const MatrixXd C = MatrixXd::Identity(n, n) - p.Pi;
  p.K_stab = C.transpose() * C;
  p.K = p.K_const + p.K_stab;
  return p;
}

VemElasticParts vem_elasticity_3d_stiffness(const mesh::PolyMesh3D& mesh, int c,
                                            const Eigen::Matrix<double, 6, 6>& D,
                                            double alpha_star,
                                            interp::FaceScheme scheme) {
  VemElasticParts p;
  p.nodes = mesh::cell_nodes(mesh, c);
  const int n = static_cast<int>(p.nodes.size());
  std::vector<Eigen::Vector3d> flux(n, Eigen::Vector3d::Zero());
  const mesh::CellFaces cf = mesh::oriented_cell_faces(mesh, c);
  for (const auto& loop : cf.faces) {
    std::vector<Eigen::Vector3d> pts;
    for (int i : loop) pts.push_back(mesh.nodes[i]);
    const auto t = interp::face_flux_integrals(pts, scheme);
    p.volume += interp::face_volume_flux(pts);
    for (size_t k = 0; k < loop.size(); ++k) {
      const auto it = std::lower_bound(p.nodes.begin(), p.nodes.end(), loop[k]);
      flux[it - p.nodes.begin()] += t[k];
    }
  }
  if (p.volume <= 0.0)
    throw std::runtime_error("vem_elasticity_3d_stiffness: nonpositive volume");
  Eigen::Vector3d xbar = Eigen::Vector3d::Zero();
  for (int i : p.nodes) xbar += mesh.nodes[i];
  xbar /= n;
  // Mode order: 3 translations + rotations (z, x, y), then 3 direct
  // stretches + shears (xy, yz, zx); matches the Voigt strain ordering used
  // by the constitutive matrix through W_C.
  p.N_R = MatrixXd::Zero(3 * n, 6);
  p.N_C = MatrixXd::Zero(3 * n, 6);
  p.W_R = MatrixXd::Zero(3 * n, 6);
  p.W_C = MatrixXd::Zero(3 * n, 6);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d d = mesh.nodes[p.nodes[i]] - xbar;
    const Eigen::Vector3d q = flux[i] / (2.0 * p.volume);
    auto NR = p.N_R.block<3, 6>(3 * i, 0);
    NR << 1, 0, 0, d.y(), 0, -d.z(),
          0, 1, 0, -d.x(), d.z(), 0,
          0, 0, 1, 0, -d.y(), d.x();
    auto NC = p.N_C.block<3, 6>(3 * i, 0);
    NC << d.x(), 0, 0, d.y(), 0, d.z(),
          0, d.y(), 0, d.x(), d.z(), 0,
          0, 0, d.z(), 0, d.y(), d.x();
    auto WR = p.W_R.block<3, 6>(3 * i, 0);
    WR << 1.0 / n, 0, 0, q.y(), 0, -q.z(),
          0, 1.0 / n, 0, -q.x(), q.z(), 0,
          0, 0, 1.0 / n, 0, -q.y(), q.x();
    auto WC = p.W_C.block<3, 6>(3 * i, 0);
    WC << 2 * q.x(), 0, 0, q.y(), 0, q.z(),
          0, 2 * q.y(), 0, q.x(), q.z(), 0,
          0, 0, 2 * q.z(), 0, q.y(), q.x();
  }
  p.K_const = p.volume * p.W_C * D * p.W_C.transpose();
  const MatrixXd Pp =
      p.N_R * p.W_R.transpose() + p.N_C * p.W_C.transpose();
  const MatrixXd C = MatrixXd::Identity(3 * n, 3 * n) - Pp;
  const double alpha = alpha_star * p.K_const.trace();
  p.K_stab = alpha * C.transpose() * C;
  p.K = p.K_const + p.K_stab;
  return p;
}

}  // namespace polymech::vem
