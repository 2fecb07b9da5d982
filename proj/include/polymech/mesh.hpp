#ifndef POLYMECH_MESH_HPP
#define POLYMECH_MESH_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace polymech::mesh {

using Eigen::Vector2d;
using Eigen::Vector3d;

// Planar polygonal mesh. Element node lists are counter-clockwise.
struct PolyMesh2D {
  std::vector<Vector2d> nodes;
  std::vector<std::vector<int>> elements;
  // tag -> list of (element, local edge) pairs; edge e runs from local node e
  // to local node (e+1) % n.
  std::map<std::string, std::vector<std::pair<int, int>>> boundary_tags;
};

// Open node chain bounding a scaled-boundary cell. The chain is ordered along
// the boundary; for cracked cells the first and last nodes coincide in space
// but are distinct indices (the crack faces). The angle orients the local
// analysis frame: its +x axis points along the crack extension direction.
struct SbfemCell {
  Vector2d tip;
  std::vector<int> chain;
  double angle = 0.0;
};

// One face of a 3D cell, stored once with a fixed winding. Cells reference
// faces by index; the outward orientation per cell is recovered geometrically.
struct PolyMesh3D {
  std::vector<Vector3d> nodes;
  std::vector<std::vector<int>> faces;
  std::vector<std::vector<int>> cells;  // face index lists
  std::map<std::string, std::vector<int>> boundary_tags;  // tag -> face ids
};

// Derived quantities for one polygon. Both the area centroid and the plain
// node average are kept; the smoothing-cell construction uses the node
// average as its fan center while error quadrature fans from the centroid.
struct PolygonGeometry {
  double area = 0.0;
  Vector2d centroid = Vector2d::Zero();
  Vector2d node_average = Vector2d::Zero();
  std::vector<double> edge_lengths;
  std::vector<Vector2d> edge_normals;  // outward unit normals
  double diameter = 0.0;
};

// A smoothing subcell: a closed polygonal contour with the nodal shape vector
// attached to each contour vertex. Interior fan vertices carry the polygon
// center shape (1/n per node); element vertices carry unit vectors.
struct Subcell {
  double area = 0.0;
  std::vector<Vector2d> corners;
  std::vector<Eigen::VectorXd> corner_shapes;  // length = element node count
};

PolygonGeometry polygon_geometry(const std::vector<Vector2d>& verts);

// Decomposes an element into nc smoothing subcells. Quads accept nc in
// {1, 2, 4}: 1 is the whole element, 2 splits parallel to the first edge
// (midpoint of edge 1 to midpoint of edge 3), 4 joins all edge midpoints to
// the node-average center. General polygons accept nc = 1 or nc = n (the
// center fan). Requested values outside these sets throw.
std::vector<Subcell> polygon_subcells(const std::vector<Vector2d>& verts, int nc);

PolyMesh2D generate_structured_quad_mesh(int nx, int ny, double lx, double ly);
PolyMesh3D generate_structured_hex_mesh(int nx, int ny, int nz,
                                        double lx, double ly, double lz);

// JSON mesh I/O. 2D files hold {"dim":2, "nodes", "elements", "boundary_tags"}
// and optionally "sbfem_cells"; 3D files hold {"dim":3, "nodes", "faces",
// "cells", "boundary_tags"}. Indices are 0-based throughout.
struct LoadedMesh {
  int dim = 0;
  PolyMesh2D mesh2d;
  PolyMesh3D mesh3d;
  std::vector<SbfemCell> sbfem_cells;
};

LoadedMesh load_mesh(const std::string& path);
void save_mesh(const std::string& path, const PolyMesh2D& mesh,
               const std::vector<SbfemCell>& sbfem_cells = {});
void save_mesh(const std::string& path, const PolyMesh3D& mesh);

// Validation: positive areas/volumes, closed cells, consistent indices.
// Throws std::runtime_error with a description on the first violation.
void validate(const PolyMesh2D& mesh);
void validate(const PolyMesh3D& mesh);

std::vector<Vector2d> element_coords(const PolyMesh2D& mesh, int e);

// --- 3D cell helpers ---

// Per-cell view with outward-oriented face windings resolved.
struct CellFaces {
  std::vector<std::vector<int>> faces;  // node loops, outward winding
};

CellFaces oriented_cell_faces(const PolyMesh3D& mesh, int c);

double cell_volume(const PolyMesh3D& mesh, int c);
Vector3d cell_centroid(const PolyMesh3D& mesh, int c);
std::vector<int> cell_nodes(const PolyMesh3D& mesh, int c);  // sorted unique

}  // namespace polymech::mesh

#endif
