#include "polymech/mesh.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "polymech/interp.hpp"

namespace polymech::mesh {

using nlohmann::ordered_json;

namespace {

double cross2(const Vector2d& a, const Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

}  // namespace

PolygonGeometry polygon_geometry(const std::vector<Vector2d>& verts) {
  const int n = static_cast<int>(verts.size());
  if (n < 3) fail("polygon_geometry: fewer than 3 vertices");
  PolygonGeometry g;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      g.diameter = std::max(g.diameter, (verts[i] - verts[j]).norm());
  double a2 = 0.0;  // twice the signed area
  Vector2d cm = Vector2d::Zero();
  for (int i = 0; i < n; ++i) {
    const Vector2d& p = verts[i];
    const Vector2d& q = verts[(i + 1) % n];
    const double w = cross2(p, q);
    a2 += w;
    cm += w * (p + q);
    g.node_average += p;
    const Vector2d e = q - p;
    const double len = e.norm();
    if (len <= 1e-14 * g.diameter) fail("polygon_geometry: degenerate edge");
    g.edge_lengths.push_back(len);
    g.edge_normals.push_back(Vector2d(e.y(), -e.x()) / len);
  }
  g.area = 0.5 * a2;
  if (g.area <= 1e-14 * g.diameter * g.diameter)
    fail("polygon_geometry: nonpositive or degenerate area");
  g.centroid = cm / (3.0 * a2);
  g.node_average /= n;
  return g;
}

namespace {

Eigen::VectorXd unit_shape(int n, int i) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v(i) = 1.0;
  return v;
}

Subcell make_subcell(std::vector<Vector2d> corners,
                     std::vector<Eigen::VectorXd> shapes) {
  Subcell sc;
  const int m = static_cast<int>(corners.size());
  double a2 = 0.0;
  for (int i = 0; i < m; ++i) a2 += cross2(corners[i], corners[(i + 1) % m]);
  sc.area = 0.5 * a2;
  if (sc.area <= 0.0) fail("polygon_subcells: nonpositive subcell area");
  sc.corners = std::move(corners);
  sc.corner_shapes = std::move(shapes);
  return sc;
}

}  // namespace

std::vector<Subcell> polygon_subcells(const std::vector<Vector2d>& verts, int nc) {
  const int n = static_cast<int>(verts.size());
  if (n < 3) fail("polygon_subcells: fewer than 3 vertices");
  std::vector<Subcell> cells;
  if (nc == 1) {
    std::vector<Eigen::VectorXd> shapes;
    for (int i = 0; i < n; ++i) shapes.push_back(unit_shape(n, i));
    cells.push_back(make_subcell(verts, std::move(shapes)));
    return cells;
  }
  const Eigen::VectorXd center_shape = Eigen::VectorXd::Constant(n, 1.0 / n);
  const PolygonGeometry g = polygon_geometry(verts);
  auto mid = [&](int e) -> Vector2d {
    return 0.5 * (verts[e] + verts[(e + 1) % n]);
  };
  auto mid_shape = [&](int e) -> Eigen::VectorXd {
    return 0.5 * (unit_shape(n, e) + unit_shape(n, (e + 1) % n));
  };
  if (n == 4 && nc == 2) {
    // Split parallel to the first edge: midpoint of edge 1 to midpoint of
    // edge 3, giving two quads that share that chord.
    cells.push_back(make_subcell({verts[0], verts[1], mid(1), mid(3)},
                                 {unit_shape(4, 0), unit_shape(4, 1),
                                  mid_shape(1), mid_shape(3)}));
    cells.push_back(make_subcell({mid(3), mid(1), verts[2], verts[3]},
                                 {mid_shape(3), mid_shape(1),
                                  unit_shape(4, 2), unit_shape(4, 3)}));
    return cells;
  }
  if (n == 4 && nc == 4) {
    // Edge midpoints joined to the node-average center.
    for (int i = 0; i < 4; ++i) {
      const int p = (i + 3) % 4;
      cells.push_back(make_subcell(
          {verts[i], mid(i), g.node_average, mid(p)},
          {unit_shape(4, i), mid_shape(i), center_shape, mid_shape(p)}));
    }
    return cells;
  }
  if (nc == n) {
    // Center fan: triangle (center, v_i, v_{i+1}) per edge.
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      cells.push_back(make_subcell({g.node_average, verts[i], verts[j]},
                                   {center_shape, unit_shape(n, i),
                                    unit_shape(n, j)}));
    }
    return cells;
  }
  std::ostringstream os;
  os << "polygon_subcells: nc=" << nc << " unsupported for n=" << n;
  fail(os.str());
}

PolyMesh2D generate_structured_quad_mesh(int nx, int ny, double lx, double ly) {
  if (nx < 1 || ny < 1) fail("generate_structured_quad_mesh: bad division");
  PolyMesh2D m;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.nodes.emplace_back(lx * i / nx, ly * j / ny);
  auto nid = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      m.elements.push_back(
          {nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)});
  auto eid = [&](int i, int j) { return j * nx + i; };
  auto& tags = m.boundary_tags;
  for (int i = 0; i < nx; ++i) {
    tags["bottom"].emplace_back(eid(i, 0), 0);
    tags["top"].emplace_back(eid(i, ny - 1), 2);
  }
  for (int j = 0; j < ny; ++j) {
    tags["right"].emplace_back(eid(nx - 1, j), 1);
    tags["left"].emplace_back(eid(0, j), 3);
  }
  return m;
}

PolyMesh3D generate_structured_hex_mesh(int nx, int ny, int nz,
                                        double lx, double ly, double lz) {
  if (nx < 1 || ny < 1 || nz < 1) fail("generate_structured_hex_mesh: bad division");
  PolyMesh3D m;
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        m.nodes.emplace_back(lx * i / nx, ly * j / ny, lz * k / nz);
  auto nid = [&](int i, int j, int k) {
    return (k * (ny + 1) + j) * (nx + 1) + i;
  };
  // Faces are deduplicated through a sorted-key map; winding as first seen.
  std::map<std::vector<int>, int> face_ids;
  auto add_face = [&](std::vector<int> loop, const char* tag_or_null) {
    std::vector<int> key = loop;
    std::sort(key.begin(), key.end());
    auto it = face_ids.find(key);
    int id;
    if (it == face_ids.end()) {
      id = static_cast<int>(m.faces.size());
      m.faces.push_back(std::move(loop));
      face_ids.emplace(std::move(key), id);
    } else {
      id = it->second;
    }
    if (tag_or_null) m.boundary_tags[tag_or_null].push_back(id);
    return id;
  };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int a = nid(i, j, k), b = nid(i + 1, j, k);
        const int c = nid(i + 1, j + 1, k), d = nid(i, j + 1, k);
        const int e = nid(i, j, k + 1), f = nid(i + 1, j, k + 1);
        const int g = nid(i + 1, j + 1, k + 1), h = nid(i, j + 1, k + 1);
        std::vector<int> cell;
        cell.push_back(add_face({a, d, c, b}, k == 0 ? "zmin" : nullptr));
        cell.push_back(add_face({e, f, g, h}, k == nz - 1 ? "zmax" : nullptr));
        cell.push_back(add_face({a, b, f, e}, j == 0 ? "ymin" : nullptr));
        cell.push_back(add_face({c, d, h, g}, j == ny - 1 ? "ymax" : nullptr));
        cell.push_back(add_face({a, e, h, d}, i == 0 ? "xmin" : nullptr));
        cell.push_back(add_face({b, c, g, f}, i == nx - 1 ? "xmax" : nullptr));
        m.cells.push_back(std::move(cell));
      }
  return m;
}

LoadedMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("load_mesh: cannot open " + path);
  ordered_json j;
  in >> j;
  LoadedMesh out;
  out.dim = j.at("dim").get<int>();
  if (out.dim == 2) {
    for (const auto& p : j.at("nodes"))
      out.mesh2d.nodes.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    for (const auto& e : j.at("elements"))
      out.mesh2d.elements.push_back(e.get<std::vector<int>>());
    if (j.contains("boundary_tags")) {
      // Tags are stored as boundary node pairs; map each onto the unique
      // element edge that carries it.
      std::map<std::pair<int, int>, std::pair<int, int>> edge_of;
      for (int e = 0; e < static_cast<int>(out.mesh2d.elements.size()); ++e) {
        const auto& conn = out.mesh2d.elements[e];
        const int n = static_cast<int>(conn.size());
        for (int k = 0; k < n; ++k)
          edge_of[{conn[k], conn[(k + 1) % n]}] = {e, k};
      }
      for (const auto& [tag, lst] : j.at("boundary_tags").items())
        for (const auto& pr : lst) {
          const int a = pr.at(0).get<int>(), b = pr.at(1).get<int>();
          auto it = edge_of.find({a, b});
          if (it == edge_of.end()) it = edge_of.find({b, a});
          if (it == edge_of.end())
            fail("load_mesh: tagged edge is not an element edge");
          out.mesh2d.boundary_tags[tag].push_back(it->second);
        }
    }
    if (j.contains("sbfem_cells"))
      for (const auto& c : j.at("sbfem_cells")) {
        SbfemCell sc;
        sc.tip = Vector2d(c.at("tip").at(0).get<double>(),
                          c.at("tip").at(1).get<double>());
        sc.chain = c.at("chain").get<std::vector<int>>();
        if (c.contains("angle")) sc.angle = c.at("angle").get<double>();
        out.sbfem_cells.push_back(std::move(sc));
      }
    validate(out.mesh2d);
  } else if (out.dim == 3) {
    for (const auto& p : j.at("nodes"))
      out.mesh3d.nodes.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(),
                                    p.at(2).get<double>());
    for (const auto& f : j.at("faces"))
      out.mesh3d.faces.push_back(f.get<std::vector<int>>());
    for (const auto& c : j.at("cells"))
      out.mesh3d.cells.push_back(c.get<std::vector<int>>());
    if (j.contains("boundary_tags"))
      for (const auto& [tag, lst] : j.at("boundary_tags").items())
        out.mesh3d.boundary_tags[tag] = lst.get<std::vector<int>>();
    validate(out.mesh3d);
  } else {
    fail("load_mesh: dim must be 2 or 3");
  }
  return out;
}

void save_mesh(const std::string& path, const PolyMesh2D& mesh,
               const std::vector<SbfemCell>& sbfem_cells) {
  ordered_json j;
  j["dim"] = 2;
  for (const auto& p : mesh.nodes) j["nodes"].push_back({p.x(), p.y()});
  j["elements"] = mesh.elements;
  ordered_json tags = ordered_json::object();
  for (const auto& [tag, lst] : mesh.boundary_tags) {
    ordered_json arr = ordered_json::array();
    for (const auto& [e, k] : lst) {
      const auto& conn = mesh.elements[e];
      const int n = static_cast<int>(conn.size());
      arr.push_back({conn[k], conn[(k + 1) % n]});
    }
    tags[tag] = std::move(arr);
  }
  j["boundary_tags"] = std::move(tags);
  if (!sbfem_cells.empty()) {
    for (const auto& c : sbfem_cells) {
      ordered_json jc;
      jc["tip"] = {c.tip.x(), c.tip.y()};
      jc["chain"] = c.chain;
      jc["angle"] = c.angle;
      j["sbfem_cells"].push_back(std::move(jc));
    }
  }
  std::ofstream(path) << j.dump(1) << "\n";
}

void save_mesh(const std::string& path, const PolyMesh3D& mesh) {
  ordered_json j;
  j["dim"] = 3;
  for (const auto& p : mesh.nodes) j["nodes"].push_back({p.x(), p.y(), p.z()});
  j["faces"] = mesh.faces;
  j["cells"] = mesh.cells;
  j["boundary_tags"] = mesh.boundary_tags;
  std::ofstream(path) << j.dump(1) << "\n";
}

std::vector<Vector2d> element_coords(const PolyMesh2D& mesh, int e) {
  std::vector<Vector2d> v;
  for (int i : mesh.elements[e]) v.push_back(mesh.nodes[i]);
  return v;
}

void validate(const PolyMesh2D& mesh) {
  const int nn = static_cast<int>(mesh.nodes.size());
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& el = mesh.elements[e];
    if (el.size() < 3) fail("validate: element with fewer than 3 nodes");
    for (int i : el)
      if (i < 0 || i >= nn) fail("validate: element node index out of range");
    polygon_geometry(element_coords(mesh, static_cast<int>(e)));  // throws if bad
  }
  for (const auto& [tag, lst] : mesh.boundary_tags)
    for (const auto& [e, k] : lst) {
      if (e < 0 || e >= static_cast<int>(mesh.elements.size()))
        fail("validate: boundary tag element out of range (" + tag + ")");
      if (k < 0 || k >= static_cast<int>(mesh.elements[e].size()))
        fail("validate: boundary tag edge out of range (" + tag + ")");
    }
}

CellFaces oriented_cell_faces(const PolyMesh3D& mesh, int c) {
  CellFaces out;
  // Reference point: average of face-vertex averages. Cells are assumed
  // star-shaped about it, which holds for all generated cell types.
  Vector3d ref = Vector3d::Zero();
  for (int f : mesh.cells[c]) {
    Vector3d fc = Vector3d::Zero();
    for (int i : mesh.faces[f]) fc += mesh.nodes[i];
    ref += fc / static_cast<double>(mesh.faces[f].size());
  }
  ref /= static_cast<double>(mesh.cells[c].size());
  for (int f : mesh.cells[c]) {
    std::vector<int> loop = mesh.faces[f];
    Vector3d normal = Vector3d::Zero();  // Newell
    Vector3d fc = Vector3d::Zero();
    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
      const Vector3d& p = mesh.nodes[loop[i]];
      const Vector3d& q = mesh.nodes[loop[(i + 1) % n]];
      normal += p.cross(q);
      fc += p;
    }
    fc /= n;
    if (normal.dot(fc - ref) < 0.0) std::reverse(loop.begin(), loop.end());
    out.faces.push_back(std::move(loop));
  }
  return out;
}

std::vector<int> cell_nodes(const PolyMesh3D& mesh, int c) {
  std::set<int> s;
  for (int f : mesh.cells[c]) s.insert(mesh.faces[f].begin(), mesh.faces[f].end());
  return std::vector<int>(s.begin(), s.end());
}

double cell_volume(const PolyMesh3D& mesh, int c) {
  const CellFaces cf = oriented_cell_faces(mesh, c);
  double v = 0.0;
  for (const auto& loop : cf.faces) {
    std::vector<Vector3d> pts;
    for (int i : loop) pts.push_back(mesh.nodes[i]);
    v += interp::face_volume_flux(pts);
  }
  if (v <= 0.0) fail("cell_volume: nonpositive volume");
  return v;
}

Vector3d cell_centroid(const PolyMesh3D& mesh, int c) {
  const CellFaces cf = oriented_cell_faces(mesh, c);
  double v = 0.0;
  Vector3d m = Vector3d::Zero();
  for (const auto& loop : cf.faces) {
    std::vector<Vector3d> pts;
    for (int i : loop) pts.push_back(mesh.nodes[i]);
    v += interp::face_volume_flux(pts);
    m += interp::face_moment_flux(pts);
  }
  return m / v;
}

void validate(const PolyMesh3D& mesh) {
  const int nn = static_cast<int>(mesh.nodes.size());
  for (const auto& f : mesh.faces) {
    if (f.size() < 3) fail("validate: face with fewer than 3 nodes");
    for (int i : f)
      if (i < 0 || i >= nn) fail("validate: face node index out of range");
  }
  for (size_t c = 0; c < mesh.cells.size(); ++c) {
    for (int f : mesh.cells[c])
      if (f < 0 || f >= static_cast<int>(mesh.faces.size()))
        fail("validate: cell face index out of range");
    // Watertight: every directed edge of the oriented boundary appears once
    // in each direction.
    const CellFaces cf = oriented_cell_faces(mesh, static_cast<int>(c));
    std::map<std::pair<int, int>, int> count;
    for (const auto& loop : cf.faces) {
      const int n = static_cast<int>(loop.size());
      for (int i = 0; i < n; ++i)
        ++count[{loop[i], loop[(i + 1) % n]}];
    }
    for (const auto& [edge, cnt] : count) {
      auto rev = count.find({edge.second, edge.first});
      if (cnt != 1 || rev == count.end() || rev->second != 1)
        fail("validate: cell boundary is not watertight");
    }
    if (cell_volume(mesh, static_cast<int>(c)) <= 0.0)
      fail("validate: nonpositive cell volume");
  }
  for (const auto& [tag, lst] : mesh.boundary_tags)
    for (int f : lst)
      if (f < 0 || f >= static_cast<int>(mesh.faces.size()))
        fail("validate: boundary tag face out of range (" + tag + ")");
}

}  // namespace polymech::mesh
