#include "polymech/interp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>

namespace polymech::interp {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

constexpr double kGauss1 = 0.5773502691896257645091488;  // 1/sqrt(3)

struct PlanarFrame {
  Vector3d origin, u, v, normal;  // orthonormal in-plane axes, unit normal
  std::vector<Vector2d> verts2d;
  double diameter = 0.0;
};

// Builds a 2D frame for a planar face; throws if the vertices deviate from
// the best plane by more than 1e-10 of the face diameter.
PlanarFrame planar_frame(const std::vector<Vector3d>& pts) {
  const int n = static_cast<int>(pts.size());
  PlanarFrame f;
  f.origin = Vector3d::Zero();
  for (const auto& p : pts) f.origin += p;
  f.origin /= n;
  Vector3d nrm = Vector3d::Zero();  // Newell
  for (int i = 0; i < n; ++i) nrm += pts[i].cross(pts[(i + 1) % n]);
  const double nn = nrm.norm();
  if (nn == 0.0) fail("planar_frame: degenerate face");
  f.normal = nrm / nn;
  f.u = (pts[0] - f.origin).normalized();
  f.u = (f.u - f.u.dot(f.normal) * f.normal).normalized();
  f.v = f.normal.cross(f.u);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      f.diameter = std::max(f.diameter, (pts[i] - pts[j]).norm());
  for (const auto& p : pts) {
    const Vector3d d = p - f.origin;
    if (std::abs(d.dot(f.normal)) > 1e-10 * f.diameter)
      fail("planar_frame: face is not planar");
    f.verts2d.emplace_back(d.dot(f.u), d.dot(f.v));
  }
  return f;
}

double tri_area2(const Vector2d& a, const Vector2d& b, const Vector2d& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

}  // namespace

ShapeEval q4_shape(double xi, double eta) {
  ShapeEval s;
  s.values.resize(4);
  s.grads.resize(4, 2);
  const double xs[4] = {-1, 1, 1, -1};
  const double es[4] = {-1, -1, 1, 1};
  for (int i = 0; i < 4; ++i) {
    s.values(i) = 0.25 * (1 + xs[i] * xi) * (1 + es[i] * eta);
    s.grads(i, 0) = 0.25 * xs[i] * (1 + es[i] * eta);
    s.grads(i, 1) = 0.25 * es[i] * (1 + xs[i] * xi);
  }
  return s;
}

ShapeEval hex8_shape(double xi, double eta, double zeta) {
  ShapeEval s;
  s.values.resize(8);
  s.grads.resize(8, 3);
  const double xs[8] = {-1, 1, 1, -1, -1, 1, 1, -1};
  const double es[8] = {-1, -1, 1, 1, -1, -1, 1, 1};
  const double zs[8] = {-1, -1, -1, -1, 1, 1, 1, 1};
  for (int i = 0; i < 8; ++i) {
    s.values(i) = 0.125 * (1 + xs[i] * xi) * (1 + es[i] * eta) * (1 + zs[i] * zeta);
    s.grads(i, 0) = 0.125 * xs[i] * (1 + es[i] * eta) * (1 + zs[i] * zeta);
    s.grads(i, 1) = 0.125 * es[i] * (1 + xs[i] * xi) * (1 + zs[i] * zeta);
    s.grads(i, 2) = 0.125 * zs[i] * (1 + xs[i] * xi) * (1 + es[i] * eta);
  }
  return s;
}

VectorXd polygon_center_shape(int n) {
  return VectorXd::Constant(n, 1.0 / n);
}

ShapeEval wachspress_shape(const std::vector<Vector2d>& verts, const Vector2d& x) {
  const int n = static_cast<int>(verts.size());
  // w_i = C_i / (A_{i-1} A_i) with A_k the triangle (x, v_k, v_{k+1}) and C_i
  // the triangle (v_{i-1}, v_i, v_{i+1}); gradients via the log derivative.
  std::vector<double> A(n);
  std::vector<Vector2d> gA(n);  // grad of A_k w.r.t. x
  for (int k = 0; k < n; ++k) {
    const Vector2d& a = verts[k];
    const Vector2d& b = verts[(k + 1) % n];
    A[k] = 0.5 * tri_area2(x, a, b);
    if (A[k] <= 0.0) fail("wachspress_shape: point not strictly inside");
    gA[k] = 0.5 * Vector2d(a.y() - b.y(), b.x() - a.x());
  }
  VectorXd w(n);
  Eigen::MatrixXd R(n, 2);
  for (int i = 0; i < n; ++i) {
    const int p = (i + n - 1) % n;
    const double C = 0.5 * tri_area2(verts[p], verts[i], verts[(i + 1) % n]);
    w(i) = C / (A[p] * A[i]);
    R.row(i) = (-gA[p] / A[p] - gA[i] / A[i]).transpose();
  }
  ShapeEval s;
  const double W = w.sum();
  s.values = w / W;
  const Eigen::RowVector2d Rbar = s.values.transpose() * R;
  s.grads.resize(n, 2);
  for (int i = 0; i < n; ++i)
    s.grads.row(i) = s.values(i) * (R.row(i) - Rbar);
  return s;
}

std::vector<SegPoint> segment_rule(int order) {
  switch (order) {
    case 1:
      return {{0.0, 2.0}};
    case 2:
    case 3:
      return {{-kGauss1, 1.0}, {kGauss1, 1.0}};
    default:
      fail("segment_rule: order must be 1, 2 or 3");
  }
}

std::vector<TriPoint> triangle_rule(int order) {
  switch (order) {
    case 1:
      return {{1.0 / 3.0, 1.0 / 3.0, 0.5}};
    case 2:
      // Interior three-point rule; keeps evaluation points off the triangle
      // boundary, where barycentric-rational shapes are singular.
      return {{1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0},
              {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
              {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}};
    default:
      fail("triangle_rule: order must be 1 or 2");
  }
}

namespace {

// Bilinear-patch quadrature for 4-node faces; npt x npt product Gauss.
template <typename F>
void quad_patch_integrate(const std::vector<Vector3d>& pts, int npt, F&& accum) {
  std::vector<double> gp, gw;
  if (npt == 2) {
    gp = {-kGauss1, kGauss1};
    gw = {1.0, 1.0};
  } else {
    const double s = std::sqrt(0.6);
    gp = {-s, 0.0, s};
    gw = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  }
  for (int a = 0; a < npt; ++a)
    for (int b = 0; b < npt; ++b) {
      const ShapeEval s = q4_shape(gp[a], gp[b]);
      Vector3d x = Vector3d::Zero(), xu = Vector3d::Zero(), xv = Vector3d::Zero();
      for (int i = 0; i < 4; ++i) {
        x += s.values(i) * pts[i];
        xu += s.grads(i, 0) * pts[i];
        xv += s.grads(i, 1) * pts[i];
      }
      accum(s.values, x, Vector3d(xu.cross(xv)), gw[a] * gw[b]);
    }
}

VectorXd face_shape_integral_nodal(const PlanarFrame& f) {
  const int n = static_cast<int>(f.verts2d.size());
  const auto& v = f.verts2d;
  // Area centroid; star-convexity about it is asserted through the fan signs.
  double area2 = 0.0;
  Vector2d cm = Vector2d::Zero();
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double w = v[i].x() * v[j].y() - v[j].x() * v[i].y();
    area2 += w;
    cm += w * (v[i] + v[j]);
  }
  if (area2 <= 0.0) fail("face_shape_integral: nonpositive face area");
  const Vector2d c = cm / (3.0 * area2);
  for (int i = 0; i < n; ++i)
    if (tri_area2(c, v[i], v[(i + 1) % n]) <= 0.0)
      fail("face_shape_integral: face not star-convex about its centroid");
  VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    const int p = (i + n - 1) % n;
    const Vector2d mi = 0.5 * (v[i] + v[(i + 1) % n]);
    const Vector2d mp = 0.5 * (v[p] + v[i]);
    // Quad (v_i, m_i, c, m_p), split along the diagonal through v_i.
    out(i) = 0.5 * (tri_area2(v[i], mi, c) + tri_area2(v[i], c, mp));
    if (out(i) <= 0.0) fail("face_shape_integral: degenerate nodal quad");
  }
  return out;
}

VectorXd face_shape_integral_conforming(const PlanarFrame& f) {
  const int n = static_cast<int>(f.verts2d.size());
  // Reference regular n-gon with unit circumradius, fanned from its center;
  // quadrature points are pulled back through the Wachspress map.
  std::vector<Vector2d> ref(n);
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * std::numbers::pi * i / n;
    ref[i] = Vector2d(std::cos(th), std::sin(th));
  }
  const auto rule = triangle_rule(2);
  VectorXd out = VectorXd::Zero(n);
  for (int t = 0; t < n; ++t) {
    const Vector2d p0 = Vector2d::Zero();
    const Vector2d p1 = ref[t];
    const Vector2d p2 = ref[(t + 1) % n];
    const double jac_ref = tri_area2(p0, p1, p2);  // 2 * triangle area
    for (const auto& q : rule) {
      const Vector2d p = p0 + q.a * (p1 - p0) + q.b * (p2 - p0);
      const ShapeEval s = wachspress_shape(ref, p);
      // Physical map x(p) = sum N_i(p) v_i; its Jacobian uses grad N.
      Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
      for (int i = 0; i < n; ++i)
        J += f.verts2d[i] * s.grads.row(i);
      const double detJ = J.determinant();
      if (detJ <= 0.0) fail("face_shape_integral: conforming map not injective");
      out += s.values * (q.w * jac_ref * detJ);
    }
  }
  return out;
}

}  // namespace

VectorXd face_shape_integral(const std::vector<Vector3d>& pts, FaceScheme scheme) {
  const PlanarFrame f = planar_frame(pts);
  return scheme == FaceScheme::nodal ? face_shape_integral_nodal(f)
                                     : face_shape_integral_conforming(f);
}

std::vector<Vector3d> face_flux_integrals(const std::vector<Vector3d>& pts,
                                          FaceScheme scheme) {
  const int n = static_cast<int>(pts.size());
  std::vector<Vector3d> out(n, Vector3d::Zero());
  if (n == 4) {
    quad_patch_integrate(pts, 2,
                         [&](const VectorXd& N, const Vector3d&,
                             const Vector3d& ndS, double w) {
                           for (int i = 0; i < 4; ++i) out[i] += w * N(i) * ndS;
                         });
    return out;
  }
  const PlanarFrame f = planar_frame(pts);
  const VectorXd s = scheme == FaceScheme::nodal
                         ? face_shape_integral_nodal(f)
                         : face_shape_integral_conforming(f);
  for (int i = 0; i < n; ++i) out[i] = s(i) * f.normal;
  return out;
}

double face_volume_flux(const std::vector<Vector3d>& pts) {
  if (pts.size() == 4) {
    double v = 0.0;
    quad_patch_integrate(pts, 2,
                         [&](const VectorXd&, const Vector3d& x,
                             const Vector3d& ndS, double w) {
                           v += w * x.dot(ndS) / 3.0;
                         });
    return v;
  }
  const PlanarFrame f = planar_frame(pts);
  double area2 = 0.0;
  Vector2d cm = Vector2d::Zero();
  const auto& v2 = f.verts2d;
  const int n = static_cast<int>(v2.size());
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double w = v2[i].x() * v2[j].y() - v2[j].x() * v2[i].y();
    area2 += w;
    cm += w * (v2[i] + v2[j]);
  }
  const Vector2d c2 = cm / (3.0 * area2);
  const Vector3d c3 = f.origin + c2.x() * f.u + c2.y() * f.v;
  return 0.5 * area2 * c3.dot(f.normal) / 3.0;
}

Vector3d face_moment_flux(const std::vector<Vector3d>& pts) {
  Vector3d m = Vector3d::Zero();
  if (pts.size() == 4) {
    quad_patch_integrate(pts, 3,
                         [&](const VectorXd&, const Vector3d& x,
                             const Vector3d& ndS, double w) {
                           m += w * 0.5 * x.cwiseProduct(x).cwiseProduct(ndS);
                         });
    return m;
  }
  const PlanarFrame f = planar_frame(pts);
  const auto rule = triangle_rule(2);
  const int n = static_cast<int>(f.verts2d.size());
  for (int t = 0; t < n; ++t) {
    const Vector2d p1 = f.verts2d[t];
    const Vector2d p2 = f.verts2d[(t + 1) % n];
    const double jac = tri_area2(Vector2d::Zero(), p1, p2);
    for (const auto& q : rule) {
      const Vector2d p = q.a * p1 + q.b * p2;
      const Vector3d x = f.origin + p.x() * f.u + p.y() * f.v;
      m += (q.w * jac) * 0.5 * x.cwiseProduct(x).cwiseProduct(f.normal);
    }
  }
  return m;
}

std::array<int, 8> hex_element_nodes(const mesh::PolyMesh3D& mesh, int c) {
  const mesh::CellFaces cf = mesh::oriented_cell_faces(mesh, c);
  if (cf.faces.size() != 6) fail("hex_element_nodes: cell does not have 6 faces");
  for (const auto& f : cf.faces)
    if (f.size() != 4) fail("hex_element_nodes: non-quad face");
  // Bottom ring: any face, reversed so it is counter-clockwise seen from the
  // cell interior; partners found through lateral edges.
  std::vector<int> bottom(cf.faces[0].rbegin(), cf.faces[0].rend());
  std::set<std::pair<int, int>> edges;
  for (const auto& f : cf.faces) {
    for (int i = 0; i < 4; ++i) {
      const int a = f[i], b = f[(i + 1) % 4];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  // The opposite face shares no node with the bottom.
  std::set<int> bset(bottom.begin(), bottom.end());
  const std::vector<int>* top_face = nullptr;
  for (size_t i = 1; i < cf.faces.size(); ++i) {
    bool disjoint = true;
    for (int v : cf.faces[i])
      if (bset.count(v)) disjoint = false;
    if (disjoint) top_face = &cf.faces[i];
  }
  if (!top_face) fail("hex_element_nodes: no opposite face");
  std::array<int, 8> out{};
  for (int i = 0; i < 4; ++i) {
    out[i] = bottom[i];
    int partner = -1;
    for (int v : *top_face)
      if (edges.count({std::min(bottom[i], v), std::max(bottom[i], v)}))
        partner = v;
    if (partner < 0) fail("hex_element_nodes: missing vertical edge");
    out[4 + i] = partner;
  }
  // Orientation sanity: positive Jacobian at the element center.
  const ShapeEval s = hex8_shape(0, 0, 0);
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 8; ++i)
    J += mesh.nodes[out[i]] * s.grads.row(i);
  if (J.determinant() <= 0.0) fail("hex_element_nodes: negative Jacobian");
  return out;
}

}  // namespace polymech::interp
