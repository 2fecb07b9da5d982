#include "polymech/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>

#include "polymech/smoothing.hpp"
#include "polymech/vem.hpp"

namespace polymech::benchmarks {

using Eigen::Vector3d;

namespace {

constexpr double kPi = std::numbers::pi;

mesh::LoadedMesh load_fixture(const std::string& path, int dim) {
  mesh::LoadedMesh lm;
  try {
    lm = mesh::load_mesh(path);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("fixture ") + path + ": " + e.what());
  }
  if (lm.dim != dim)
    throw ConfigError("fixture " + path + ": expected a " +
                      std::to_string(dim) + "D mesh");
  return lm;
}

double max_diameter(const mesh::PolyMesh2D& m) {
  double d = 0.0;
  for (int e = 0; e < static_cast<int>(m.elements.size()); ++e)
    d = std::max(d, mesh::polygon_geometry(mesh::element_coords(m, e)).diameter);
  return d;
}

double cell_diameter(const mesh::PolyMesh3D& m, int c) {
  const std::vector<int> ids = mesh::cell_nodes(m, c);
  double d = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      d = std::max(d, (m.nodes[ids[i]] - m.nodes[ids[j]]).norm());
  return d;
}

double max_diameter(const mesh::PolyMesh3D& m) {
  double d = 0.0;
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c)
    d = std::max(d, cell_diameter(m, c));
  return d;
}

int nearest_node(const mesh::PolyMesh2D& m, const Vector2d& x) {
  int best = 0;
  double bd = (m.nodes[0] - x).squaredNorm();
  for (int i = 1; i < static_cast<int>(m.nodes.size()); ++i) {
    const double d = (m.nodes[i] - x).squaredNorm();
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

// One 2D benchmark: constitutive matrix, exact field, boundary conditions.
struct Case2D {
  Eigen::Matrix3d D;
  fields::PlaneField field;
  std::function<void(const mesh::PolyMesh2D&, fea::Problem2D&)> bcs;
};

Case2D cantilever_case() {
  Case2D c;
  c.D = fea::constitutive_matrix_2d(3e7, 0.3, true);
  c.field = fields::cantilever_field(3e7, 0.3, 250.0, 8.0, 4.0, true);
  const fields::PlaneField f = c.field;
  c.bcs = [f](const mesh::PolyMesh2D& m, fea::Problem2D& p) {
    for (int n : fea::tagged_nodes(m, "left")) {
      const Vector2d u = f.disp(m.nodes[n]);
      p.dirichlet.push_back({n, 0, u.x()});
      p.dirichlet.push_back({n, 1, u.y()});
    }
    p.tractions.emplace_back("right", [f](const Vector2d& x) {
      const Eigen::Vector3d s = f.stress(x);
      return Vector2d(s(0), s(2));
    });
  };
  return c;
}

Case2D plate_hole_case() {
  Case2D c;
  c.D = fea::constitutive_matrix_2d(1e5, 0.3, true);
  c.field = fields::kirsch_field(1e5, 0.3, 1.0, 1.0);
  const fields::PlaneField f = c.field;
  c.bcs = [f](const mesh::PolyMesh2D& m, fea::Problem2D& p) {
    for (int n : fea::tagged_nodes(m, "symx")) p.dirichlet.push_back({n, 0, 0.0});
    for (int n : fea::tagged_nodes(m, "symy")) p.dirichlet.push_back({n, 1, 0.0});
    p.tractions.emplace_back("outer_x", [f](const Vector2d& x) {
      const Eigen::Vector3d s = f.stress(x);
      return Vector2d(s(0), s(2));
    });
    p.tractions.emplace_back("outer_y", [f](const Vector2d& x) {
      const Eigen::Vector3d s = f.stress(x);
      return Vector2d(s(2), s(1));
    });
  };
  return c;
}

Case2D l_shape_case() {
  Case2D c;
  c.D = fea::constitutive_matrix_2d(1000.0, 0.3, false);
  c.field = fields::corner_singular_field(1000.0, 0.3);
  const fields::PlaneField f = c.field;
  c.bcs = [f](const mesh::PolyMesh2D& m, fea::Problem2D& p) {
    for (int n : fea::tagged_nodes(m, "boundary")) {
      const Vector2d u = f.disp(m.nodes[n]);
      p.dirichlet.push_back({n, 0, u.x()});
      p.dirichlet.push_back({n, 1, u.y()});
    }
  };
  return c;
}

void check_form_dim(fea::Formulation form, int dim) {
  const bool ok =
      dim == 2 ? form != fea::Formulation::vem
               : (form == fea::Formulation::fem ||
                  form == fea::Formulation::sfem1 ||
                  form == fea::Formulation::stab ||
                  form == fea::Formulation::vem);
  if (!ok)
    throw ConfigError(fea::formulation_name(form) + " is not defined for " +
                      std::to_string(dim) + "D meshes");
}

ConvergenceRow run_case_2d(const Case2D& c, const mesh::PolyMesh2D& m,
                           fea::Formulation form, double alpha_star) {
  check_form_dim(form, 2);
  fea::Problem2D p;
  p.mesh = &m;
  p.D = c.D;
  p.opts.form = form;
  p.opts.alpha_star = alpha_star;
  c.bcs(m, p);
  const fea::Solution sol = fea::assemble_and_solve(p);
  const fea::ErrorNorms en = fea::error_norms(p, sol.u, c.field);
  ConvergenceRow row;
  row.h = max_diameter(m);
  row.nelem = static_cast<int>(m.elements.size());
  row.ndof = 2 * static_cast<int>(m.nodes.size());
  row.err_l2 = en.l2_rel;
  row.err_h1 = en.h1_rel;
  return row;
}

void finish_report(ConvergenceReport& r) {
  std::vector<double> h, e2, e1;
  for (const auto& row : r.rows) {
    h.push_back(row.h);
    e2.push_back(row.err_l2);
    e1.push_back(row.err_h1);
  }
  r.slope_l2 = fea::convergence_rate(h, e2);
  r.slope_h1 = fea::convergence_rate(h, e1);
}

ConvergenceReport run_fixture_ladder(const Case2D& c, fea::Formulation form,
                                     double alpha_star,
                                     const std::vector<std::string>& files) {
  if (files.size() < 2)
    throw ConfigError("convergence ladder needs at least two meshes");
  ConvergenceReport r;
  for (const auto& path : files) {
    const mesh::LoadedMesh lm = load_fixture(path, 2);
    r.rows.push_back(run_case_2d(c, lm.mesh2d, form, alpha_star));
  }
  finish_report(r);
  return r;
}

fields::PlaneField linear_patch_field_2d(const Eigen::Matrix3d& D) {
  fields::PlaneField f;
  f.disp = [](const Vector2d& p) {
    return Vector2d(1e-3 * (0.5 + 2.0 * p.x() + p.y()),
                    1e-3 * (-0.25 + p.x() + 3.0 * p.y()));
  };
  const Eigen::Vector3d stress = D * Eigen::Vector3d(2e-3, 3e-3, 2e-3);
  f.stress = [stress](const Vector2d&) { return stress; };
  return f;
}

fields::SolidField linear_patch_field_3d(const fea::Matrix6d& D) {
  fields::SolidField f;
  f.disp = [](const Vector3d& p) {
    return Vector3d(0.5e-3 * (2.0 * p.x() + p.y() + p.z()),
                    0.5e-3 * (p.x() + 2.0 * p.y() + p.z()),
                    0.5e-3 * (p.x() + p.y() + 2.0 * p.z()));
  };
  Eigen::Matrix<double, 6, 1> eps;
  eps << 1e-3, 1e-3, 1e-3, 1e-3, 1e-3, 1e-3;
  const Eigen::Matrix<double, 6, 1> stress = D * eps;
  f.stress = [stress](const Vector3d&) { return stress; };
  return f;
}

std::set<int> boundary_nodes_2d(const mesh::PolyMesh2D& m) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& conn : m.elements) {
    const int n = static_cast<int>(conn.size());
    for (int k = 0; k < n; ++k) {
      const int a = conn[k], b = conn[(k + 1) % n];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::set<int> out;
  for (const auto& [edge, c] : count)
    if (c == 1) {
      out.insert(edge.first);
      out.insert(edge.second);
    }
  return out;
}

std::set<int> boundary_nodes_3d(const mesh::PolyMesh3D& m) {
  std::vector<int> use(m.faces.size(), 0);
  for (const auto& cell : m.cells)
    for (int fid : cell) ++use[fid];
  std::set<int> out;
  for (std::size_t fid = 0; fid < m.faces.size(); ++fid)
    if (use[fid] == 1)
      for (int nid : m.faces[fid]) out.insert(nid);
  return out;
}

}  // namespace

ConvergenceReport cantilever_quad_ladder(fea::Formulation form,
                                         double alpha_star, int levels) {
  if (levels < 2) throw ConfigError("cantilever ladder needs >= 2 levels");
  const Case2D c = cantilever_case();
  ConvergenceReport r;
  for (int k = 0; k < levels; ++k) {
    mesh::PolyMesh2D m =
        mesh::generate_structured_quad_mesh(8 << k, 4 << k, 8.0, 4.0);
    for (auto& p : m.nodes) p.y() -= 2.0;
    r.rows.push_back(run_case_2d(c, m, form, alpha_star));
  }
  finish_report(r);
  return r;
}

ConvergenceReport cantilever_polygon_ladder(
    fea::Formulation form, double alpha_star,
    const std::vector<std::string>& mesh_files) {
  return run_fixture_ladder(cantilever_case(), form, alpha_star, mesh_files);
}

ConvergenceReport plate_hole_ladder(
    fea::Formulation form, double alpha_star,
    const std::vector<std::string>& mesh_files) {
  return run_fixture_ladder(plate_hole_case(), form, alpha_star, mesh_files);
}

ConvergenceReport l_shape_ladder(fea::Formulation form, double alpha_star,
                                 const std::vector<std::string>& mesh_files) {
  return run_fixture_ladder(l_shape_case(), form, alpha_star, mesh_files);
}

ConvergenceReport beam3d_ladder(fea::Formulation form, double alpha_star,
                                int levels, interp::FaceScheme scheme) {
  if (levels < 2) throw ConfigError("beam ladder needs >= 2 levels");
  check_form_dim(form, 3);
  const fea::Matrix6d D = fea::constitutive_matrix_3d(1.0, 0.3);
  const fields::SolidField field =
      fields::shear_beam_field(1.0, 0.3, 1.0, 1.0, 1.0, 5.0);
  ConvergenceReport r;
  for (int k = 0; k < levels; ++k) {
    mesh::PolyMesh3D m = mesh::generate_structured_hex_mesh(
        2 << k, 2 << k, 10 << k, 2.0, 2.0, 5.0);
    for (auto& p : m.nodes) {
      p.x() -= 1.0;
      p.y() -= 1.0;
    }
    fea::Problem3D p;
    p.mesh = &m;
    p.D = D;
    p.opts.form = form;
    p.opts.alpha_star = alpha_star;
    p.opts.scheme = scheme;
    for (int n : fea::tagged_nodes(m, "zmax")) {
      const Vector3d u = field.disp(m.nodes[n]);
      for (int d = 0; d < 3; ++d) p.dirichlet.push_back({n, d, u(d)});
    }
    p.tractions.emplace_back("zmin", [field](const Vector3d& x) {
      const auto s = field.stress(x);
      return Vector3d(-s(5), -s(4), -s(2));
    });
    const fea::Solution sol = fea::assemble_and_solve(p);
    const fea::ErrorNorms en = fea::error_norms(p, sol.u, field);
    ConvergenceRow row;
    row.h = max_diameter(m);
    row.nelem = static_cast<int>(m.cells.size());
    row.ndof = 3 * static_cast<int>(m.nodes.size());
    row.err_l2 = en.l2_rel;
    row.err_h1 = en.h1_rel;
    r.rows.push_back(row);
  }
  finish_report(r);
  return r;
}

AlphaReport alpha_study(const std::string& mesh_file,
                        const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("alpha grid is empty");
  for (double a : grid)
    if (a <= 0.0) throw ConfigError("alpha grid entries must be positive");
  const mesh::LoadedMesh lm = load_fixture(mesh_file, 2);
  const Case2D c = cantilever_case();
  AlphaReport r;
  for (double a : grid) {
    const ConvergenceRow row =
        run_case_2d(c, lm.mesh2d, fea::Formulation::stab, a);
    r.rows.push_back({a, row.err_l2, row.err_h1});
  }
  r.best_alpha =
      std::min_element(r.rows.begin(), r.rows.end(),
                       [](const AlphaRow& x, const AlphaRow& y) {
                         return x.err_l2 < y.err_l2;
                       })
          ->alpha;
  return r;
}

PatchReport patch_test_2d(fea::Formulation form, double alpha_star,
                          const std::string& mesh_file) {
  check_form_dim(form, 2);
  const mesh::LoadedMesh lm = load_fixture(mesh_file, 2);
  const mesh::PolyMesh2D& m = lm.mesh2d;
  fea::Problem2D p;
  p.mesh = &m;
  p.D = fea::constitutive_matrix_2d(1.0, 0.3, true);
  p.opts.form = form;
  p.opts.alpha_star = alpha_star;
  const fields::PlaneField field = linear_patch_field_2d(p.D);
  const std::set<int> bnodes = boundary_nodes_2d(m);
  for (int n : bnodes) {
    const Vector2d u = field.disp(m.nodes[n]);
    p.dirichlet.push_back({n, 0, u.x()});
    p.dirichlet.push_back({n, 1, u.y()});
  }
  const fea::Solution sol = fea::assemble_and_solve(p);
  double num = 0.0, den = 0.0;
  for (int n = 0; n < static_cast<int>(m.nodes.size()); ++n) {
    const Vector2d u = field.disp(m.nodes[n]);
    den = std::max({den, std::abs(u.x()), std::abs(u.y())});
    if (bnodes.count(n)) continue;
    num = std::max({num, std::abs(sol.u[2 * n] - u.x()),
                    std::abs(sol.u[2 * n + 1] - u.y())});
  }
  PatchReport rep;
  rep.nelem = static_cast<int>(m.elements.size());
  rep.ndof = 2 * static_cast<int>(m.nodes.size());
  rep.max_rel_err = num / den;
  return rep;
}

PatchReport patch_test_3d(fea::Formulation form, double alpha_star,
                          interp::FaceScheme scheme) {
  check_form_dim(form, 3);
  const mesh::PolyMesh3D m = build_warped_patch_mesh();
  fea::Problem3D p;
  p.mesh = &m;
  p.D = fea::constitutive_matrix_3d(1.0, 0.3);
  p.opts.form = form;
  p.opts.alpha_star = alpha_star;
  p.opts.scheme = scheme;
  const fields::SolidField field = linear_patch_field_3d(p.D);
  const std::set<int> bnodes = boundary_nodes_3d(m);
  for (int n : bnodes) {
    const Vector3d u = field.disp(m.nodes[n]);
    for (int d = 0; d < 3; ++d) p.dirichlet.push_back({n, d, u(d)});
  }
  const fea::Solution sol = fea::assemble_and_solve(p);
  double num = 0.0, den = 0.0;
  for (int n = 0; n < static_cast<int>(m.nodes.size()); ++n) {
    const Vector3d u = field.disp(m.nodes[n]);
    for (int d = 0; d < 3; ++d) {
      den = std::max(den, std::abs(u(d)));
      if (!bnodes.count(n))
        num = std::max(num, std::abs(sol.u[3 * n + d] - u(d)));
    }
  }
  PatchReport rep;
  rep.nelem = static_cast<int>(m.cells.size());
  rep.ndof = 3 * static_cast<int>(m.nodes.size());
  rep.max_rel_err = num / den;
  return rep;
}

mesh::PolyMesh3D build_warped_patch_mesh() {
  mesh::PolyMesh3D m;
  const double c[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                          {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  const double in[8][3] = {
      {0.249, 0.342, 0.192}, {0.826, 0.288, 0.288}, {0.850, 0.649, 0.263},
      {0.273, 0.750, 0.230}, {0.320, 0.186, 0.643}, {0.677, 0.305, 0.683},
      {0.788, 0.693, 0.644}, {0.165, 0.745, 0.705}};
  for (const auto& p : c) m.nodes.emplace_back(p[0], p[1], p[2]);
  for (const auto& p : in) m.nodes.emplace_back(p[0], p[1], p[2]);
  auto C = [](int i) { return i; };
  auto I = [](int i) { return 8 + i; };
  // Inner warped cell plus one cell per cube side, each spanned between an
  // outer face ring and its inner counterpart.
  const std::vector<std::array<int, 8>> hexes = {
      {I(0), I(1), I(2), I(3), I(4), I(5), I(6), I(7)},
      {C(0), C(1), C(2), C(3), I(0), I(1), I(2), I(3)},
      {I(4), I(5), I(6), I(7), C(4), C(5), C(6), C(7)},
      {C(0), C(1), C(5), C(4), I(0), I(1), I(5), I(4)},
      {C(2), C(3), C(7), C(6), I(2), I(3), I(7), I(6)},
      {C(0), C(4), C(7), C(3), I(0), I(4), I(7), I(3)},
      {C(1), C(2), C(6), C(5), I(1), I(2), I(6), I(5)}};
  std::map<std::vector<int>, int> face_id;
  for (const auto& h : hexes) {
    const std::vector<std::array<int, 4>> faces = {
        {h[0], h[3], h[2], h[1]}, {h[4], h[5], h[6], h[7]},
        {h[0], h[1], h[5], h[4]}, {h[1], h[2], h[6], h[5]},
        {h[2], h[3], h[7], h[6]}, {h[3], h[0], h[4], h[7]}};
    std::vector<int> cell;
    for (const auto& fc : faces) {
      std::vector<int> key(fc.begin(), fc.end());
      std::sort(key.begin(), key.end());
      const auto it = face_id.find(key);
      int id;
      if (it == face_id.end()) {
        id = static_cast<int>(m.faces.size());
        m.faces.emplace_back(fc.begin(), fc.end());
        face_id.emplace(std::move(key), id);
      } else {
        id = it->second;
      }
      cell.push_back(id);
    }
    m.cells.push_back(std::move(cell));
  }
  mesh::validate(m);
  return m;
}

SpectrumReport stability_spectrum(double alpha_star) {
  const mesh::PolyMesh3D m =
      mesh::generate_structured_hex_mesh(1, 1, 1, 1.0, 1.0, 1.0);
  SpectrumReport rep;
  auto spectrum = [&](fea::Formulation form, VectorXd& eig, int& zeros) {
    fea::Problem3D p;
    p.mesh = &m;
    p.D = fea::constitutive_matrix_3d(1.0, 0.3);
    p.opts.form = form;
    p.opts.alpha_star = alpha_star;
    const MatrixXd K = fea::element_stiffness(p, 0);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(K);
    eig = es.eigenvalues();
    const double thr = 1e-10 * eig(eig.size() - 1);
    zeros = 0;
    for (int i = 0; i < eig.size(); ++i)
      if (eig(i) < thr) ++zeros;
  };
  spectrum(fea::Formulation::fem, rep.eig_fem, rep.zeros_fem);
  spectrum(fea::Formulation::sfem1, rep.eig_sfem1, rep.zeros_sfem1);
  spectrum(fea::Formulation::stab, rep.eig_stab, rep.zeros_stab);
  return rep;
}

EdgeCrackReport edge_crack_study(const std::vector<std::string>& mesh_files,
                                 const std::vector<double>& hs) {
  if (mesh_files.empty()) throw ConfigError("edge-crack study needs meshes");
  if (hs.size() != mesh_files.size())
    throw ConfigError("edge-crack study needs one nominal h per mesh");
  const double a = 0.25;
  EdgeCrackReport rep;
  rep.ref_ki_norm =
      fields::edge_crack_reference_ki(a, 0.5, 1.0) / std::sqrt(kPi * a);
  for (std::size_t i = 0; i < mesh_files.size(); ++i) {
    const mesh::LoadedMesh lm = load_fixture(mesh_files[i], 2);
    if (lm.sbfem_cells.empty())
      throw ConfigError("fixture " + mesh_files[i] + ": no crack-tip cells");
    fea::Problem2D p;
    p.mesh = &lm.mesh2d;
    p.sbfem_cells = lm.sbfem_cells;
    p.D = fea::constitutive_matrix_2d(200e9, 0.3, true);
    p.opts.form = fea::Formulation::stab;
    p.opts.alpha_star = 0.1;
    p.tractions.emplace_back(
        "top", [](const Vector2d&) { return Vector2d(0.0, 1.0); });
    p.tractions.emplace_back(
        "bottom", [](const Vector2d&) { return Vector2d(0.0, -1.0); });
    const int pin_a = nearest_node(lm.mesh2d, Vector2d(0.0, -1.0));
    const int pin_b = nearest_node(lm.mesh2d, Vector2d(1.0, -1.0));
    p.dirichlet.push_back({pin_a, 0, 0.0});
    p.dirichlet.push_back({pin_a, 1, 0.0});
    p.dirichlet.push_back({pin_b, 1, 0.0});
    const fea::Solution sol = fea::assemble_and_solve(p);
    const sbfem::SifResult sif = fea::extract_sif(p, sol.u, 0);
    EdgeCrackRow row;
    row.h = hs[i];
    row.nelem = static_cast<int>(lm.mesh2d.elements.size() +
                                 p.sbfem_cells.size());
    row.nnodes = static_cast<int>(lm.mesh2d.nodes.size());
    row.ki = sif.KI;
    row.ki_norm = sif.KI / std::sqrt(kPi * a);
    rep.rows.push_back(row);
  }
  return rep;
}

InclinedCrackReport inclined_crack_study(
    const std::vector<std::string>& mesh_files,
    const std::vector<double>& betas_deg) {
  if (mesh_files.size() != betas_deg.size() || mesh_files.empty())
    throw ConfigError("inclined-crack study needs one mesh per angle");
  const double a = 1.0, s1 = 1.0, s2 = 2.0;
  const double norm = std::sqrt(kPi * a);
  InclinedCrackReport rep;
  for (std::size_t i = 0; i < mesh_files.size(); ++i) {
    const mesh::LoadedMesh lm = load_fixture(mesh_files[i], 2);
    if (lm.sbfem_cells.size() != 2)
      throw ConfigError("fixture " + mesh_files[i] +
                        ": expected two crack-tip cells");
    fea::Problem2D p;
    p.mesh = &lm.mesh2d;
    p.sbfem_cells = lm.sbfem_cells;
    p.D = fea::constitutive_matrix_2d(200e9, 0.3, true);
    p.opts.form = fea::Formulation::stab;
    p.opts.alpha_star = 0.1;
    p.tractions.emplace_back(
        "left", [s2](const Vector2d&) { return Vector2d(-s2, 0.0); });
    p.tractions.emplace_back(
        "right", [s2](const Vector2d&) { return Vector2d(s2, 0.0); });
    p.tractions.emplace_back(
        "top", [s1](const Vector2d&) { return Vector2d(0.0, s1); });
    p.tractions.emplace_back(
        "bottom", [s1](const Vector2d&) { return Vector2d(0.0, -s1); });
    const int pin_a = nearest_node(lm.mesh2d, Vector2d(-10.0, -10.0));
    const int pin_b = nearest_node(lm.mesh2d, Vector2d(10.0, -10.0));
    p.dirichlet.push_back({pin_a, 0, 0.0});
    p.dirichlet.push_back({pin_a, 1, 0.0});
    p.dirichlet.push_back({pin_b, 1, 0.0});
    const fea::Solution sol = fea::assemble_and_solve(p);
    const sbfem::SifResult sa = fea::extract_sif(p, sol.u, 0);
    const sbfem::SifResult sb = fea::extract_sif(p, sol.u, 1);
    const double beta = betas_deg[i] * kPi / 180.0;
    const auto [ki_ref, kii_ref] = fields::inclined_crack_reference(beta, s1, s2, a);
    InclinedCrackRow row;
    row.beta_deg = betas_deg[i];
    row.ki_ref = ki_ref / norm;
    row.kii_ref = kii_ref / norm;
    row.ki_a = sa.KI / norm;
    row.kii_a = sa.KII / norm;
    row.ki_b = sb.KI / norm;
    row.kii_b = sb.KII / norm;
    rep.rows.push_back(row);
  }
  return rep;
}

namespace {

// Scalar Laplace stiffness of a bilinear quad; npt = 1 gives the one-point
// reduced rule.
Eigen::Matrix4d q4_scalar_laplace(const std::vector<Vector2d>& verts, int npt) {
  Eigen::Matrix4d K = Eigen::Matrix4d::Zero();
  const double g = 1.0 / std::sqrt(3.0);
  std::vector<std::pair<double, double>> pts;
  if (npt == 1)
    pts = {{0.0, 2.0}};
  else
    pts = {{-g, 1.0}, {g, 1.0}};
  for (const auto& [xi, wx] : pts) {
    for (const auto& [eta, wy] : pts) {
      const interp::ShapeEval s = interp::q4_shape(xi, eta);
      Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
      for (int i = 0; i < 4; ++i) J += verts[i] * s.grads.row(i);
      const MatrixXd gp = s.grads * J.inverse();
      K += (wx * wy * J.determinant()) * gp * gp.transpose();
    }
  }
  return K;
}

Eigen::Matrix4d mat4(std::initializer_list<double> v, double scale) {
  Eigen::Matrix4d m;
  int k = 0;
  for (double x : v) m(k / 4, k % 4) = scale * x, ++k;
  return m;
}

MatrixXd mat5(std::initializer_list<double> v) {
  MatrixXd m(5, 5);
  int k = 0;
  for (double x : v) m(k / 5, k % 5) = x, ++k;
  return m;
}

}  // namespace

GoldenMatrices golden_matrices() {
  GoldenMatrices g;
  const std::vector<Vector2d> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  g.fem_full = q4_scalar_laplace(sq, 2);
  g.fem_reduced = q4_scalar_laplace(sq, 1);
  g.sfem_sc1 = smoothing::sfem_stiffness_scalar_2d(sq, 1);
  g.sfem_sc2 = smoothing::sfem_stiffness_scalar_2d(sq, 2);
  const vem::VemScalarParts sqv = vem::vem_scalar_stiffness(sq);
  g.vem_const = sqv.K_const;
  g.vem_stab = sqv.K_stab;
  g.ref_fem_full = mat4({8, -2, -4, -2, -2, 8, -2, -4, -4, -2, 8, -2, -2, -4,
                         -2, 8},
                        1.0 / 12.0);
  g.ref_sfem_sc1 = mat4({1, 0, -1, 0, 0, 1, 0, -1, -1, 0, 1, 0, 0, -1, 0, 1},
                        0.5);
  g.ref_sfem_sc2 = mat4({9, -1, -7, -1, -1, 9, -1, -7, -7, -1, 9, -1, -1, -7,
                         -1, 9},
                        1.0 / 16.0);
  g.ref_vem_const = g.ref_sfem_sc1;
  g.ref_vem_stab = mat4({1, -1, 1, -1, -1, 1, -1, 1, 1, -1, 1, -1, -1, 1, -1,
                         1},
                        0.25);
  const std::vector<Vector2d> pent = {{0, 0}, {3, 0}, {3, 2}, {1.5, 4}, {0, 4}};
  g.pent_sfem1 = smoothing::sfem_stiffness_scalar_2d(pent, 1);
  const vem::VemScalarParts pv = vem::vem_scalar_stiffness(pent);
  g.pent_vem_const = pv.K_const;
  g.pent_vem_stab = pv.K_stab;
  g.pent_vem_full = pv.K;
  g.ref_pent_consistency = mat5(
      {0.5952,  0.0238,  -0.4881, -0.4048, 0.2738,  0.0238,  0.3095, 0.0833,
       -0.1190, -0.2976, -0.4881, 0.0833,  0.4345,  0.2976,  -0.3274, -0.4048,
       -0.1190, 0.2976,  0.3095,  -0.0833, 0.2738,  -0.2976, -0.3274, -0.0833,
       0.4345});
  g.ref_pent_full = mat5(
      {0.7422,  -0.1966, -0.3412, -0.2578, 0.0534,  -0.1966, 0.7422, -0.3412,
       -0.1354, -0.0690, -0.3412, -0.3412, 0.9896,  0.0364,  -0.3437, -0.2578,
       -0.1354, 0.0364,  0.8646,  -0.5078, 0.0534,  -0.0690, -0.3437, -0.5078,
       0.8672});
  return g;
}

MeshInfo mesh_info(const std::string& path) {
  mesh::LoadedMesh lm;
  try {
    lm = mesh::load_mesh(path);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("mesh ") + path + ": " + e.what());
  }
  MeshInfo info;
  info.dim = lm.dim;
  if (lm.dim == 2) {
    const auto& m = lm.mesh2d;
    info.nnodes = static_cast<int>(m.nodes.size());
    info.nelem = static_cast<int>(m.elements.size());
    info.nsbfem = static_cast<int>(lm.sbfem_cells.size());
    for (int e = 0; e < info.nelem; ++e) {
      const auto geo = mesh::polygon_geometry(mesh::element_coords(m, e));
      info.min_measure = e == 0 ? geo.area : std::min(info.min_measure, geo.area);
      info.max_measure = std::max(info.max_measure, geo.area);
      info.max_diameter = std::max(info.max_diameter, geo.diameter);
    }
  } else {
    const auto& m = lm.mesh3d;
    info.nnodes = static_cast<int>(m.nodes.size());
    info.nelem = static_cast<int>(m.cells.size());
    for (int c = 0; c < info.nelem; ++c) {
      const double v = mesh::cell_volume(m, c);
      info.min_measure = c == 0 ? v : std::min(info.min_measure, v);
      info.max_measure = std::max(info.max_measure, v);
      info.max_diameter = std::max(info.max_diameter, cell_diameter(m, c));
    }
  }
  return info;
}

std::vector<Vector2d> random_convex_polygon(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> ang(n);
  while (true) {
    for (auto& a : ang) a = 2.0 * kPi * unif(rng);
    std::sort(ang.begin(), ang.end());
    double gap = 2.0 * kPi + ang.front() - ang.back();
    for (int i = 1; i < n; ++i) gap = std::min(gap, ang[i] - ang[i - 1]);
    if (gap > 0.05) break;
  }
  Eigen::Matrix2d A;
  do {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        A(i, j) = (i == j ? 1.0 : 0.0) + 0.6 * (2.0 * unif(rng) - 1.0);
  } while (A.determinant() < 0.25);
  const double s = 0.5 + 1.5 * unif(rng);
  const Vector2d t(2.0 * unif(rng) - 1.0, 2.0 * unif(rng) - 1.0);
  std::vector<Vector2d> verts(n);
  for (int i = 0; i < n; ++i)
    verts[i] = s * (A * Vector2d(std::cos(ang[i]), std::sin(ang[i]))) + t;
  return verts;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(8) << v;
  return os.str();
}

std::string fix4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

}  // namespace

void write_convergence_csv(const std::string& path,
                           const ConvergenceReport& r) {
  auto out = open_out(path);
  out << "h,nelem,ndof,err_l2,err_h1\n";
  for (const auto& row : r.rows)
    out << num(row.h) << ',' << row.nelem << ',' << row.ndof << ','
        << sci(row.err_l2) << ',' << sci(row.err_h1) << '\n';
  out << "# slope_l2=" << fix4(r.slope_l2) << " slope_h1=" << fix4(r.slope_h1)
      << '\n';
}

void write_alpha_csv(const std::string& path, const AlphaReport& r) {
  auto out = open_out(path);
  out << "alpha,err_l2,err_h1\n";
  for (const auto& row : r.rows)
    out << num(row.alpha) << ',' << sci(row.err_l2) << ',' << sci(row.err_h1)
        << '\n';
  out << "# best_alpha=" << num(r.best_alpha) << '\n';
}

void write_edge_crack_csv(const std::string& path, const EdgeCrackReport& r) {
  auto out = open_out(path);
  out << "h,nelem,nnodes,KI,KI_norm\n";
  for (const auto& row : r.rows)
    out << num(row.h) << ',' << row.nelem << ',' << row.nnodes << ','
        << fix4(row.ki) << ',' << fix4(row.ki_norm) << '\n';
  out << "# ref_KI_norm=" << fix4(r.ref_ki_norm) << '\n';
}

void write_inclined_csv(const std::string& path,
                        const InclinedCrackReport& r) {
  auto out = open_out(path);
  out << "beta,KI_ref,KI_tipA,KI_tipB,KII_ref,KII_tipA,KII_tipB\n";
  for (const auto& row : r.rows)
    out << num(row.beta_deg) << ',' << fix4(row.ki_ref) << ','
        << fix4(row.ki_a) << ',' << fix4(row.ki_b) << ',' << fix4(row.kii_ref)
        << ',' << fix4(row.kii_a) << ',' << fix4(row.kii_b) << '\n';
}

void write_loglog_svg(const std::string& path, const std::string& title,
                      const ConvergenceReport& r) {
  const double x0 = 80, x1 = 560, y0 = 400, y1 = 60;  // plot box, y down
  double lxmin = 1e300, lxmax = -1e300, lymin = 1e300, lymax = -1e300;
  for (const auto& row : r.rows) {
    if (row.h <= 0 || row.err_l2 <= 0 || row.err_h1 <= 0) continue;
    lxmin = std::min(lxmin, std::log10(row.h));
    lxmax = std::max(lxmax, std::log10(row.h));
    lymin = std::min({lymin, std::log10(row.err_l2), std::log10(row.err_h1)});
    lymax = std::max({lymax, std::log10(row.err_l2), std::log10(row.err_h1)});
  }
  if (lxmax - lxmin < 1e-12) lxmax = lxmin + 1.0;
  if (lymax - lymin < 1e-12) lymax = lymin + 1.0;
  auto px = [&](double lx) {
    return x0 + (lx - lxmin) / (lxmax - lxmin) * (x1 - x0);
  };
  auto py = [&](double ly) {
    return y0 + (ly - lymin) / (lymax - lymin) * (y1 - y0);
  };
  auto polyline = [&](bool l2) {
    std::ostringstream os;
    for (const auto& row : r.rows) {
      const double e = l2 ? row.err_l2 : row.err_h1;
      if (row.h <= 0 || e <= 0) continue;
      os << px(std::log10(row.h)) << ',' << py(std::log10(e)) << ' ';
    }
    return os.str();
  };
  auto out = open_out(path);
  out << std::fixed << std::setprecision(1);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"460\" viewBox=\"0 0 640 460\">\n";
  out << "<rect width=\"640\" height=\"460\" fill=\"white\"/>\n";
  out << "<text x=\"320\" y=\"30\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
      << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
      << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
  // decade gridlines
  for (int d = static_cast<int>(std::ceil(lxmin)); d <= std::floor(lxmax); ++d) {
    out << "<line x1=\"" << px(d) << "\" y1=\"" << y0 << "\" x2=\"" << px(d)
        << "\" y2=\"" << y1 << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << px(d) << "\" y=\"" << y0 + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">1e"
        << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(lymin)); d <= std::floor(lymax); ++d) {
    out << "<line x1=\"" << x0 << "\" y1=\"" << py(d) << "\" x2=\"" << x1
        << "\" y2=\"" << py(d) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << x0 - 8 << "\" y=\"" << py(d) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">1e"
        << d << "</text>\n";
  }
  out << "<polyline points=\"" << polyline(true)
      << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  out << "<polyline points=\"" << polyline(false)
      << "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  for (const auto& row : r.rows) {
    if (row.h <= 0) continue;
    if (row.err_l2 > 0)
      out << "<circle cx=\"" << px(std::log10(row.h)) << "\" cy=\""
          << py(std::log10(row.err_l2)) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    if (row.err_h1 > 0)
      out << "<circle cx=\"" << px(std::log10(row.h)) << "\" cy=\""
          << py(std::log10(row.err_h1)) << "\" r=\"3\" fill=\"#d62728\"/>\n";
  }
  out << "<text x=\"" << x1 - 10 << "\" y=\"" << y1 + 16
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#1f77b4\">L2 (slope "
      << fix4(r.slope_l2) << ")</text>\n";
  out << "<text x=\"" << x1 - 10 << "\" y=\"" << y1 + 34
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#d62728\">H1 (slope "
      << fix4(r.slope_h1) << ")</text>\n";
  out << "<text x=\"320\" y=\"445\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"13\">h</text>\n";
  out << "</svg>\n";
}

}  // namespace polymech::benchmarks
