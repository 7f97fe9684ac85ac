#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ntt/geometry.hpp"

namespace ntt {

enum class Region : std::uint8_t { FreeSurface, Hull, Bottom, Inflow, FarField };

const char* region_name(Region r);

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// How a node came into existence; drives solution transfer between a mesh
/// and its refinement.
struct NodeOrigin {
  enum class Kind : std::uint8_t { Original, Copied, EdgeMidpoint, CellCenter };
  Kind kind = Kind::Original;
  int a = -1;     // Copied: old node id; EdgeMidpoint: old endpoint nodes a,b
  int b = -1;
  int cell = -1;  // CellCenter: old cell id
};

/// Quadrilateral surface mesh of the towing-tank boundary. Cells are quads
/// (node ids, counter-clockwise w.r.t. the outward-from-fluid normal), each
/// carrying a region label and a patch id. Patches split regions into smooth
/// faces; degrees of freedom are duplicated per patch along patch borders.
struct SurfaceMesh {
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 4>> cells;
  std::vector<Region> cell_region;
  std::vector<int> cell_patch;
  std::vector<Region> patch_region;              // per patch id
  std::vector<GeometryDescriptor> patch_geometry;

  // Midpoint bookkeeping: sorted node pair -> midpoint node, and the inverse
  // per node ((-1,-1) when the node is not an edge midpoint).
  std::map<std::pair<int, int>, int> edge_midpoint;
  std::vector<std::pair<int, int>> midpoint_parents;

  // Transfer provenance, valid when the mesh was produced by refine_cells.
  std::vector<NodeOrigin> node_origin;
  std::vector<int> parent_cell;  // per cell, -1 on a freshly built mesh

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int add_patch(Region r, const GeometryDescriptor& g);

  // Sorted-edge accessors.
  static std::pair<int, int> edge_key(int a, int b);
  int find_midpoint(int a, int b) const;  // -1 if absent

  // True when some cell of `patch` uses the full edge (a,b).
  bool edge_in_use(int a, int b, int patch) const;

  void validate() const;  // orientation/area sanity, throws MeshError
};

/// Bilinear map of one cell evaluated at reference coordinates (u,v) in [0,1]^2.
struct CellPoint {
  Vec3 point;
  Vec3 t_u, t_v;     // tangent vectors
  double jacobian;   // |t_u x t_v| (area element)
  Vec3 normal;       // unit, orientation from node ordering
};

CellPoint bilinear_eval(const std::array<Vec3, 4>& corners, double u, double v);

/// Shape functions of the bilinear quad, corner order matching cell node order.
std::array<double, 4> quad_shape(double u, double v);
std::array<double, 4> quad_shape_du(double u, double v);
std::array<double, 4> quad_shape_dv(double u, double v);

CellPoint cell_geometry(const SurfaceMesh& mesh, int cell, double u, double v);

std::array<Vec3, 4> cell_corners(const SurfaceMesh& mesh, int cell);

double cell_diagonal(const SurfaceMesh& mesh, int cell);
double cell_area(const SurfaceMesh& mesh, int cell);

/// Max over quadrature-like sample points of the angle between cell normals,
/// a curvature proxy used to drive hull refinement.
double cell_normal_spread(const SurfaceMesh& mesh, int cell);

/// Parametric-axis aspect ratio max(|t_u|,|t_v|)/min(|t_u|,|t_v|) at the center.
double cell_aspect_ratio(const SurfaceMesh& mesh, int cell);

/// Isotropic 1-irregular refinement: every flagged cell splits into 4
/// children; closure refinement keeps at most one hanging node per edge
/// (per patch); new nodes are projected onto the patch geometry.
SurfaceMesh refine_cells(const SurfaceMesh& mesh, const std::vector<bool>& flags);

/// Anisotropic bisection along the longer parametric axis (2 children).
/// Used by mesh construction to bring aspect ratios down; flags must not
/// create constraint chains (callers flag whole patches at once).
SurfaceMesh bisect_cells(const SurfaceMesh& mesh, const std::vector<bool>& flags);

} // namespace ntt
