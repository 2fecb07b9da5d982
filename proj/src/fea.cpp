#include "polymech/fea.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>

#include "polymech/sbfem.hpp"
#include "polymech/smoothing.hpp"
#include "polymech/stab.hpp"
#include "polymech/vem.hpp"

namespace polymech::fea {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

constexpr double kGauss1 = 0.57735026918962576451;  // 1/sqrt(3)

struct Gauss1d {
  double t, w;
};

const std::array<Gauss1d, 3> kGauss3 = {{{-0.77459666924148337704, 5.0 / 9.0},
                                         {0.0, 8.0 / 9.0},
                                         {0.77459666924148337704, 5.0 / 9.0}}};

MatrixXd strain_matrix_3d(const MatrixXd& grads) {
  const int n = static_cast<int>(grads.rows());
  MatrixXd B = MatrixXd::Zero(6, 3 * n);
  for (int i = 0; i < n; ++i) {
    const double gx = grads(i, 0), gy = grads(i, 1), gz = grads(i, 2);
    B(0, 3 * i) = gx;
    B(1, 3 * i + 1) = gy;
    B(2, 3 * i + 2) = gz;
    B(3, 3 * i) = gy;
    B(3, 3 * i + 1) = gx;
    B(4, 3 * i + 1) = gz;
    B(4, 3 * i + 2) = gy;
    B(5, 3 * i) = gz;
    B(5, 3 * i + 2) = gx;
  }
  return B;
}

MatrixXd q4_fem_stiffness(const std::vector<Vector2d>& verts,
                          const Eigen::Matrix3d& D) {
  MatrixXd K = MatrixXd::Zero(8, 8);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double xi = a == 0 ? -kGauss1 : kGauss1;
      const double eta = b == 0 ? -kGauss1 : kGauss1;
      const interp::ShapeEval s = interp::q4_shape(xi, eta);
      Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
      for (int i = 0; i < 4; ++i) J += verts[i] * s.grads.row(i);
      const double detJ = J.determinant();
      if (detJ <= 0.0) fail("q4 element: nonpositive jacobian");
      const MatrixXd gp = s.grads * J.inverse();
      const MatrixXd B = smoothing::strain_matrix_2d(gp);
      K += detJ * B.transpose() * D * B;
    }
  }
  return K;
}

// Degree-2 quadrature over the center fan of a polygon. The fan index and
// barycentric weights double as the piecewise-linear interpolation data used
// by the error norms.
struct FanPoint {
  Vector2d x;
  double w;  // physical weight
  int fan;
  double l0, l1, l2;  // center, v_fan, v_fan+1
};

std::vector<FanPoint> fan_quadrature(const std::vector<Vector2d>& verts) {
  const int n = static_cast<int>(verts.size());
  const mesh::PolygonGeometry g = mesh::polygon_geometry(verts);
  const auto rule = interp::triangle_rule(2);
  std::vector<FanPoint> out;
  out.reserve(static_cast<std::size_t>(n) * rule.size());
  for (int t = 0; t < n; ++t) {
    const Vector2d& p0 = g.node_average;
    const Vector2d& p1 = verts[t];
    const Vector2d& p2 = verts[(t + 1) % n];
    const Vector2d d1 = p1 - p0, d2 = p2 - p0;
    const double jac = d1.x() * d2.y() - d1.y() * d2.x();  // 2 * area
    if (jac <= 0.0) fail("fan_quadrature: inverted fan triangle");
    for (const auto& q : rule) {
      FanPoint fp;
      fp.x = p0 + q.a * d1 + q.b * d2;
      fp.w = q.w * jac;
      fp.fan = t;
      fp.l0 = 1.0 - q.a - q.b;
      fp.l1 = q.a;
      fp.l2 = q.b;
      out.push_back(fp);
    }
  }
  return out;
}

// Barycentric-rational shapes sampled on the fan rule, with the gradient rows
// average-corrected so their quadrature matches the boundary integral of the
// shape traces. The correction restores exact patch-test consistency that the
// low-order rule alone cannot provide on general polygons.
struct PolyFemData {
  std::vector<FanPoint> qps;
  std::vector<VectorXd> values;
  std::vector<MatrixXd> grads;  // n x 2 per point, corrected
};

PolyFemData polygon_fem_data(const std::vector<Vector2d>& verts) {
  const int n = static_cast<int>(verts.size());
  const mesh::PolygonGeometry g = mesh::polygon_geometry(verts);
  PolyFemData d;
  d.qps = fan_quadrature(verts);
  MatrixXd avg = MatrixXd::Zero(n, 2);
  for (const auto& fp : d.qps) {
    const interp::ShapeEval s = interp::wachspress_shape(verts, fp.x);
    d.values.push_back(s.values);
    d.grads.push_back(s.grads);
    avg += fp.w * s.grads;
  }
  MatrixXd exact(n, 2);
  for (int i = 0; i < n; ++i) {
    const int p = (i + n - 1) % n;
    exact.row(i) = 0.5 *
                   (g.edge_lengths[p] * g.edge_normals[p] +
                    g.edge_lengths[i] * g.edge_normals[i])
                       .transpose();
  }
  const MatrixXd corr = (exact - avg) / g.area;
  for (auto& G : d.grads) G += corr;
  return d;
}

MatrixXd polygon_fem_stiffness(const std::vector<Vector2d>& verts,
                               const Eigen::Matrix3d& D) {
  const PolyFemData d = polygon_fem_data(verts);
  const int n = static_cast<int>(verts.size());
  MatrixXd K = MatrixXd::Zero(2 * n, 2 * n);
  for (std::size_t q = 0; q < d.qps.size(); ++q) {
    const MatrixXd B = smoothing::strain_matrix_2d(d.grads[q]);
    K += d.qps[q].w * B.transpose() * D * B;
  }
  return K;
}

MatrixXd hex_fem_stiffness(const mesh::PolyMesh3D& m,
                           const std::array<int, 8>& conn, const Matrix6d& D) {
  std::vector<Vector3d> x(8);
  for (int i = 0; i < 8; ++i) x[i] = m.nodes[conn[i]];
  MatrixXd K = MatrixXd::Zero(24, 24);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        const double xi = a == 0 ? -kGauss1 : kGauss1;
        const double eta = b == 0 ? -kGauss1 : kGauss1;
        const double zeta = c == 0 ? -kGauss1 : kGauss1;
        const interp::ShapeEval s = interp::hex8_shape(xi, eta, zeta);
        Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
        for (int i = 0; i < 8; ++i) J += x[i] * s.grads.row(i);
        const double detJ = J.determinant();
        if (detJ <= 0.0) fail("hex element: nonpositive jacobian");
        const MatrixXd gp = s.grads * J.inverse();
        const MatrixXd B = strain_matrix_3d(gp);
        K += detJ * B.transpose() * D * B;
      }
    }
  }
  return K;
}

Solution solve_system(int ndof, const std::vector<Eigen::Triplet<double>>& trips,
                      const VectorXd& f, const std::vector<DirichletBC>& bcs,
                      int dim) {
  std::vector<char> fixed(ndof, 0);
  VectorXd ud = VectorXd::Zero(ndof);
  for (const auto& bc : bcs) {
    const int dof = dim * bc.node + bc.comp;
    if (dof < 0 || dof >= ndof || bc.comp < 0 || bc.comp >= dim)
      fail("dirichlet constraint out of range");
    fixed[dof] = 1;
    ud[dof] = bc.value;
  }
  Eigen::SparseMatrix<double> K(ndof, ndof);
  K.setFromTriplets(trips.begin(), trips.end());
  VectorXd rhs = f - K * ud;
  std::vector<Eigen::Triplet<double>> kept;
  kept.reserve(trips.size() + static_cast<std::size_t>(ndof));
  for (const auto& t : trips)
    if (!fixed[t.row()] && !fixed[t.col()]) kept.push_back(t);
  for (int i = 0; i < ndof; ++i) {
    if (fixed[i]) {
      kept.emplace_back(i, i, 1.0);
      rhs[i] = ud[i];
    }
  }
  Eigen::SparseMatrix<double> Km(ndof, ndof);
  Km.setFromTriplets(kept.begin(), kept.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Km);
  if (solver.info() != Eigen::Success) fail("linear solve: factorization failed");
  Solution s;
  s.u = solver.solve(rhs);
  if (solver.info() != Eigen::Success) fail("linear solve: substitution failed");
  s.reactions = K * s.u - f;
  for (int i = 0; i < ndof; ++i)
    if (!fixed[i]) s.reactions[i] = 0.0;
  return s;
}

}  // namespace

Eigen::Matrix3d constitutive_matrix_2d(double E, double nu, bool plane_stress) {
  double Eb = E, nub = nu;
  if (!plane_stress) {
    Eb = E / (1.0 - nu * nu);
    nub = nu / (1.0 - nu);
  }
  const double c = Eb / (1.0 - nub * nub);
  Eigen::Matrix3d D;
  D << c, c * nub, 0.0, c * nub, c, 0.0, 0.0, 0.0, 0.5 * c * (1.0 - nub);
  return D;
}

Matrix6d constitutive_matrix_3d(double E, double nu) {
  const double lam = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  const double mu = 0.5 * E / (1.0 + nu);
  Matrix6d D = Matrix6d::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) D(i, j) = lam;
    D(i, i) = lam + 2.0 * mu;
    D(3 + i, 3 + i) = mu;
  }
  return D;
}

Formulation parse_formulation(const std::string& name) {
  if (name == "fem") return Formulation::fem;
  if (name == "sfem1") return Formulation::sfem1;
  if (name == "sfem2") return Formulation::sfem2;
  if (name == "sfem4") return Formulation::sfem4;
  if (name == "sfem") return Formulation::sfem;
  if (name == "stab") return Formulation::stab;
  if (name == "vem") return Formulation::vem;
  fail("unknown formulation: " + name);
}

std::string formulation_name(Formulation f) {
  switch (f) {
    case Formulation::fem: return "fem";
    case Formulation::sfem1: return "sfem1";
    case Formulation::sfem2: return "sfem2";
    case Formulation::sfem4: return "sfem4";
    case Formulation::sfem: return "sfem";
    case Formulation::stab: return "stab";
    case Formulation::vem: return "vem";
  }
  fail("unknown formulation enum value");
}

MatrixXd element_stiffness(const Problem2D& p, int e) {
  const std::vector<Vector2d> verts = mesh::element_coords(*p.mesh, e);
  const int n = static_cast<int>(verts.size());
  switch (p.opts.form) {
    case Formulation::fem:
      return n == 4 ? q4_fem_stiffness(verts, p.D)
                    : polygon_fem_stiffness(verts, p.D);
    case Formulation::sfem1:
      return smoothing::sfem_stiffness_2d(verts, 1, p.D);
    case Formulation::sfem2:
      if (n != 4) fail("sfem2 requires quadrilateral elements");
      return smoothing::sfem_stiffness_2d(verts, 2, p.D);
    case Formulation::sfem4:
      if (n != 4) fail("sfem4 requires quadrilateral elements");
      return smoothing::sfem_stiffness_2d(verts, 4, p.D);
    case Formulation::sfem:
      return smoothing::sfem_stiffness_2d(verts, n == 3 ? 1 : (n == 4 ? 4 : n),
                                          p.D);
    case Formulation::stab:
      return stab::stabilized_stiffness_2d(verts, p.D, p.opts.alpha_star);
    case Formulation::vem:
      fail("vem formulation is available for 3D cells only");
  }
  fail("unknown formulation enum value");
}

MatrixXd element_stiffness(const Problem3D& p, int c) {
  switch (p.opts.form) {
    case Formulation::fem: {
      const std::array<int, 8> conn = interp::hex_element_nodes(*p.mesh, c);
      const MatrixXd Kt = hex_fem_stiffness(*p.mesh, conn, p.D);
      // Reorder from trilinear connectivity into the sorted cell-node order
      // shared by every 3D formulation.
      const std::vector<int> sorted = mesh::cell_nodes(*p.mesh, c);
      std::array<int, 8> pos{};
      for (int i = 0; i < 8; ++i)
        pos[i] = static_cast<int>(
            std::lower_bound(sorted.begin(), sorted.end(), conn[i]) -
            sorted.begin());
      MatrixXd K = MatrixXd::Zero(24, 24);
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
          K.block<3, 3>(3 * pos[a], 3 * pos[b]) = Kt.block<3, 3>(3 * a, 3 * b);
      return K;
    }
    case Formulation::sfem1:
      return smoothing::sfem_stiffness_3d(*p.mesh, c, p.D, p.opts.scheme);
    case Formulation::stab:
      return stab::stabilized_stiffness_3d(*p.mesh, c, p.D, p.opts.alpha_star,
                                           p.opts.scheme);
    case Formulation::vem:
      return vem::vem_elasticity_3d_stiffness(*p.mesh, c, p.D,
                                              p.opts.alpha_star, p.opts.scheme)
          .K;
    default:
      fail(formulation_name(p.opts.form) + " is not available for 3D cells");
  }
}

sbfem::SbfemElement sbfem_element(const Problem2D& p, int cell) {
  const auto& c = p.sbfem_cells.at(cell);
  sbfem::SbfemElement el;
  el.coords.reserve(c.chain.size());
  for (int id : c.chain) el.coords.push_back(p.mesh->nodes[id]);
  el.center = c.tip;
  el.closed = false;
  el.frame_angle = c.angle;
  return el;
}

sbfem::SifResult extract_sif(const Problem2D& p, const VectorXd& u, int cell) {
  const auto& c = p.sbfem_cells.at(cell);
  const sbfem::SbfemElement el = sbfem_element(p, cell);
  const sbfem::CoeffMats cm = sbfem::sbfem_coefficient_matrices(el, p.D);
  const sbfem::ModalBasis mb = sbfem::sbfem_modal_basis(cm);
  VectorXd uc(2 * c.chain.size());
  for (std::size_t i = 0; i < c.chain.size(); ++i) {
    uc[2 * i] = u[2 * c.chain[i]];
    uc[2 * i + 1] = u[2 * c.chain[i] + 1];
  }
  return sbfem::sbfem_stress_and_sif(el, mb, p.D, uc);
}

Solution assemble_and_solve(const Problem2D& p) {
  const auto& m = *p.mesh;
  const int ndof = 2 * static_cast<int>(m.nodes.size());
  std::vector<Eigen::Triplet<double>> trips;
  for (int e = 0; e < static_cast<int>(m.elements.size()); ++e) {
    const MatrixXd K = element_stiffness(p, e);
    const auto& conn = m.elements[e];
    const int n = static_cast<int>(conn.size());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d1 = 0; d1 < 2; ++d1)
          for (int d2 = 0; d2 < 2; ++d2)
            trips.emplace_back(2 * conn[a] + d1, 2 * conn[b] + d2,
                               K(2 * a + d1, 2 * b + d2));
  }
  for (std::size_t k = 0; k < p.sbfem_cells.size(); ++k) {
    const auto& cell = p.sbfem_cells[k];
    const sbfem::SbfemElement el = sbfem_element(p, static_cast<int>(k));
    const sbfem::CoeffMats cm = sbfem::sbfem_coefficient_matrices(el, p.D);
    const sbfem::ModalBasis mb = sbfem::sbfem_modal_basis(cm);
    const MatrixXd K = sbfem::sbfem_stiffness(el, mb);
    const int n = static_cast<int>(cell.chain.size());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d1 = 0; d1 < 2; ++d1)
          for (int d2 = 0; d2 < 2; ++d2)
            trips.emplace_back(2 * cell.chain[a] + d1, 2 * cell.chain[b] + d2,
                               K(2 * a + d1, 2 * b + d2));
  }
  VectorXd f = VectorXd::Zero(ndof);
  const auto rule = interp::segment_rule(2);
  for (const auto& [tag, traction] : p.tractions) {
    const auto it = m.boundary_tags.find(tag);
    if (it == m.boundary_tags.end()) fail("traction tag not in mesh: " + tag);
    for (const auto& [e, k] : it->second) {
      const auto& conn = m.elements[e];
      const int n = static_cast<int>(conn.size());
      const int i = conn[k], j = conn[(k + 1) % n];
      const Vector2d a = m.nodes[i], b = m.nodes[j];
      const double len = (b - a).norm();
      for (const auto& q : rule) {
        const double Ni = 0.5 * (1.0 - q.t), Nj = 0.5 * (1.0 + q.t);
        const Vector2d t = traction(Ni * a + Nj * b);
        const double w = q.w * 0.5 * len;
        f[2 * i] += w * Ni * t.x();
        f[2 * i + 1] += w * Ni * t.y();
        f[2 * j] += w * Nj * t.x();
        f[2 * j + 1] += w * Nj * t.y();
      }
    }
  }
  return solve_system(ndof, trips, f, p.dirichlet, 2);
}

Solution assemble_and_solve(const Problem3D& p) {
  const auto& m = *p.mesh;
  const int ndof = 3 * static_cast<int>(m.nodes.size());
  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    const MatrixXd K = element_stiffness(p, c);
    const std::vector<int> conn = mesh::cell_nodes(m, c);
    const int n = static_cast<int>(conn.size());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d1 = 0; d1 < 3; ++d1)
          for (int d2 = 0; d2 < 3; ++d2)
            trips.emplace_back(3 * conn[a] + d1, 3 * conn[b] + d2,
                               K(3 * a + d1, 3 * b + d2));
  }
  VectorXd f = VectorXd::Zero(ndof);
  for (const auto& [tag, traction] : p.tractions) {
    const auto it = m.boundary_tags.find(tag);
    if (it == m.boundary_tags.end()) fail("traction tag not in mesh: " + tag);
    for (int fid : it->second) {
      const auto& loop = m.faces[fid];
      if (loop.size() != 4)
        fail("3D tractions are implemented for 4-node faces");
      std::array<Vector3d, 4> pts;
      for (int i = 0; i < 4; ++i) pts[i] = m.nodes[loop[i]];
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const double xi = a == 0 ? -kGauss1 : kGauss1;
          const double eta = b == 0 ? -kGauss1 : kGauss1;
          const interp::ShapeEval s = interp::q4_shape(xi, eta);
          Vector3d x = Vector3d::Zero();
          Vector3d xu = Vector3d::Zero(), xv = Vector3d::Zero();
          for (int i = 0; i < 4; ++i) {
            x += s.values[i] * pts[i];
            xu += s.grads(i, 0) * pts[i];
            xv += s.grads(i, 1) * pts[i];
          }
          const Vector3d t = traction(x);
          const double dS = xu.cross(xv).norm();  // winding-independent
          for (int i = 0; i < 4; ++i)
            for (int d = 0; d < 3; ++d)
              f[3 * loop[i] + d] += dS * s.values[i] * t(d);
        }
      }
    }
  }
  return solve_system(ndof, trips, f, p.dirichlet, 3);
}

namespace {

int subcell_count_2d(Formulation form, int nverts) {
  switch (form) {
    case Formulation::sfem1:
    case Formulation::stab: return 1;
    case Formulation::sfem2: return 2;
    case Formulation::sfem4: return 4;
    case Formulation::sfem:
      return nverts == 3 ? 1 : (nverts == 4 ? 4 : nverts);
    default: fail("subcell_count_2d: pointwise formulation");
  }
}

}  // namespace

ErrorNorms error_norms(const Problem2D& p, const VectorXd& u,
                       const fields::PlaneField& exact) {
  const auto& m = *p.mesh;
  const Eigen::Matrix3d Dinv = p.D.inverse();
  double num_l2 = 0.0, den_l2 = 0.0, num_h1 = 0.0, den_h1 = 0.0;
  for (int e = 0; e < static_cast<int>(m.elements.size()); ++e) {
    const std::vector<Vector2d> verts = mesh::element_coords(m, e);
    const auto& conn = m.elements[e];
    const int n = static_cast<int>(conn.size());
    VectorXd ue(2 * n);
    for (int i = 0; i < n; ++i) {
      ue[2 * i] = u[2 * conn[i]];
      ue[2 * i + 1] = u[2 * conn[i] + 1];
    }
    auto accumulate_h1 = [&](const Vector3d& eps_h, const Vector2d& x,
                             double w) {
      const Vector3d eps_ex = Dinv * exact.stress(x);
      const Vector3d d = eps_h - eps_ex;
      num_h1 += w * d.dot(p.D * d);
      den_h1 += w * eps_ex.dot(p.D * eps_ex);
    };
    if (n == 4) {
      // Bilinear geometry: displacement norms on a 3x3 rule.
      for (const auto& ga : kGauss3) {
        for (const auto& gb : kGauss3) {
          const interp::ShapeEval s = interp::q4_shape(ga.t, gb.t);
          Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
          Vector2d x = Vector2d::Zero();
          Vector2d uh = Vector2d::Zero();
          for (int i = 0; i < 4; ++i) {
            J += verts[i] * s.grads.row(i);
            x += s.values[i] * verts[i];
            uh += s.values[i] * Vector2d(ue[2 * i], ue[2 * i + 1]);
          }
          const double w = ga.w * gb.w * J.determinant();
          const Vector2d uex = exact.disp(x);
          num_l2 += w * (uh - uex).squaredNorm();
          den_l2 += w * uex.squaredNorm();
          if (p.opts.form == Formulation::fem) {
            const MatrixXd gp = s.grads * J.inverse();
            const Vector3d eps_h = smoothing::strain_matrix_2d(gp) * ue;
            accumulate_h1(eps_h, x, w);
          }
        }
      }
      if (p.opts.form != Formulation::fem) {
        // Constant strain per smoothing subcell; integrate each subcell quad.
        const int nc = subcell_count_2d(p.opts.form, 4);
        const auto sub = mesh::polygon_subcells(verts, nc);
        const auto sc = smoothing::smoothed_cells_2d(verts, nc);
        for (std::size_t csub = 0; csub < sub.size(); ++csub) {
          const Vector3d eps_h = sc[csub].B * ue;
          const auto& corners = sub[csub].corners;
          for (const auto& ga : kGauss3) {
            for (const auto& gb : kGauss3) {
              const interp::ShapeEval s = interp::q4_shape(ga.t, gb.t);
              Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
              Vector2d x = Vector2d::Zero();
              for (int i = 0; i < 4; ++i) {
                J += corners[i] * s.grads.row(i);
                x += s.values[i] * corners[i];
              }
              accumulate_h1(eps_h, x, ga.w * gb.w * J.determinant());
            }
          }
        }
      }
    } else {
      const std::vector<FanPoint> qps = fan_quadrature(verts);
      Vector2d uavg = Vector2d::Zero();
      for (int i = 0; i < n; ++i)
        uavg += Vector2d(ue[2 * i], ue[2 * i + 1]) / n;
      for (const auto& fp : qps) {
        const int i = fp.fan, j = (fp.fan + 1) % n;
        const Vector2d uh = fp.l0 * uavg +
                            fp.l1 * Vector2d(ue[2 * i], ue[2 * i + 1]) +
                            fp.l2 * Vector2d(ue[2 * j], ue[2 * j + 1]);
        const Vector2d uex = exact.disp(fp.x);
        num_l2 += fp.w * (uh - uex).squaredNorm();
        den_l2 += fp.w * uex.squaredNorm();
      }
      if (p.opts.form == Formulation::fem) {
        const PolyFemData d = polygon_fem_data(verts);
        for (std::size_t q = 0; q < d.qps.size(); ++q) {
          const Vector3d eps_h =
              smoothing::strain_matrix_2d(d.grads[q]) * ue;
          accumulate_h1(eps_h, d.qps[q].x, d.qps[q].w);
        }
      } else {
        const int nc = subcell_count_2d(p.opts.form, n);
        const auto sc = smoothing::smoothed_cells_2d(verts, nc);
        for (const auto& fp : qps) {
          const Vector3d eps_h = sc[nc == 1 ? 0 : fp.fan].B * ue;
          accumulate_h1(eps_h, fp.x, fp.w);
        }
      }
    }
  }
  ErrorNorms en;
  en.l2 = std::sqrt(num_l2);
  en.h1 = std::sqrt(num_h1);
  en.l2_rel = den_l2 > 0.0 ? en.l2 / std::sqrt(den_l2) : en.l2;
  en.h1_rel = den_h1 > 0.0 ? en.h1 / std::sqrt(den_h1) : en.h1;
  return en;
}

ErrorNorms error_norms(const Problem3D& p, const VectorXd& u,
                       const fields::SolidField& exact) {
  const auto& m = *p.mesh;
  const Matrix6d Dinv = p.D.inverse();
  using Vector6d = Eigen::Matrix<double, 6, 1>;
  double num_l2 = 0.0, den_l2 = 0.0, num_h1 = 0.0, den_h1 = 0.0;
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    const std::array<int, 8> conn = interp::hex_element_nodes(m, c);
    std::vector<Vector3d> x8(8);
    VectorXd ue(24);
    for (int i = 0; i < 8; ++i) {
      x8[i] = m.nodes[conn[i]];
      for (int d = 0; d < 3; ++d) ue[3 * i + d] = u[3 * conn[i] + d];
    }
    // Constant-strain formulations carry their operator in sorted-node order.
    Vector6d eps_const = Vector6d::Zero();
    bool pointwise = p.opts.form == Formulation::fem;
    if (!pointwise) {
      const std::vector<int> sorted = mesh::cell_nodes(m, c);
      VectorXd us(3 * sorted.size());
      for (std::size_t i = 0; i < sorted.size(); ++i)
        for (int d = 0; d < 3; ++d) us[3 * i + d] = u[3 * sorted[i] + d];
      if (p.opts.form == Formulation::vem) {
        const auto parts = vem::vem_elasticity_3d_stiffness(
            m, c, p.D, p.opts.alpha_star, p.opts.scheme);
        eps_const = parts.W_C.transpose() * us;
      } else if (p.opts.form == Formulation::sfem1 ||
                 p.opts.form == Formulation::stab) {
        const auto cell = smoothing::smoothed_cell_3d(m, c, p.opts.scheme);
        eps_const = cell.B * us;
      } else {
        fail(formulation_name(p.opts.form) + " is not available for 3D cells");
      }
    }
    for (const auto& ga : kGauss3) {
      for (const auto& gb : kGauss3) {
        for (const auto& gc : kGauss3) {
          const interp::ShapeEval s = interp::hex8_shape(ga.t, gb.t, gc.t);
          Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
          Vector3d x = Vector3d::Zero();
          Vector3d uh = Vector3d::Zero();
          for (int i = 0; i < 8; ++i) {
            J += x8[i] * s.grads.row(i);
            x += s.values[i] * x8[i];
            uh += s.values[i] * Vector3d(ue[3 * i], ue[3 * i + 1], ue[3 * i + 2]);
          }
          const double w = ga.w * gb.w * gc.w * J.determinant();
          const Vector3d uex = exact.disp(x);
          num_l2 += w * (uh - uex).squaredNorm();
          den_l2 += w * uex.squaredNorm();
          Vector6d eps_h = eps_const;
          if (pointwise) {
            const MatrixXd gp = s.grads * J.inverse();
            eps_h = strain_matrix_3d(gp) * ue;
          }
          const Vector6d eps_ex = Dinv * exact.stress(x);
          const Vector6d d = eps_h - eps_ex;
          num_h1 += w * d.dot(p.D * d);
          den_h1 += w * eps_ex.dot(p.D * eps_ex);
        }
      }
    }
  }
  ErrorNorms en;
  en.l2 = std::sqrt(num_l2);
  en.h1 = std::sqrt(num_h1);
  en.l2_rel = den_l2 > 0.0 ? en.l2 / std::sqrt(den_l2) : en.l2;
  en.h1_rel = den_h1 > 0.0 ? en.h1 / std::sqrt(den_h1) : en.h1;
  return en;
}

double convergence_rate(const std::vector<double>& h,
                        const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2)
    fail("convergence_rate: need matching series of length >= 2");
  const int n = static_cast<int>(h.size());
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    lx[i] = std::log(h[i]);
    ly[i] = std::log(err[i]);
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

std::vector<int> tagged_nodes(const mesh::PolyMesh2D& mesh,
                              const std::string& tag) {
  const auto it = mesh.boundary_tags.find(tag);
  if (it == mesh.boundary_tags.end()) fail("unknown boundary tag: " + tag);
  std::set<int> ids;
  for (const auto& [e, k] : it->second) {
    const auto& conn = mesh.elements[e];
    const int n = static_cast<int>(conn.size());
    ids.insert(conn[k]);
    ids.insert(conn[(k + 1) % n]);
  }
  return {ids.begin(), ids.end()};
}

std::vector<int> tagged_nodes(const mesh::PolyMesh3D& mesh,
                              const std::string& tag) {
  const auto it = mesh.boundary_tags.find(tag);
  if (it == mesh.boundary_tags.end()) fail("unknown boundary tag: " + tag);
  std::set<int> ids;
  for (int fid : it->second)
    for (int nid : mesh.faces[fid]) ids.insert(nid);
  return {ids.begin(), ids.end()};
}

}  // namespace polymech::fea
