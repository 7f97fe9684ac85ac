#pragma once

#include "ntt/mesh.hpp"

namespace ntt {

/// Towing-tank layout. The hull is a prolate spheroid aligned with x, its
/// center at the origin; the undisturbed free surface is the plane z = 0.
struct DomainParams {
  double hull_length = 10.0;
  double hull_radius = 1.0;
  double submergence = 2.5;  // depth of the hull center below z = 0
  double width = 100.0;      // tank width (y in [-width/2, width/2])
  double depth = 50.0;
  double upstream = 150.0;   // inflow plane at x = -upstream
  double downstream = 150.0; // far-field plane at x = +downstream

  // Initial lattice subdivisions of the box (x, y, z).
  int nx = 12;
  int ny = 6;
  int nz = 4;

  // Hull refinement: split cells whose normals spread more than this angle,
  // for at most this many sweeps.
  int hull_curvature_cycles = 7;
  double curvature_angle = 0.2618;  // ~15 degrees

  // Free-surface grading toward the hull footprint: cycle k refines cells
  // whose center lies within fs_focus_radius * 0.5^k of the origin.
  int fs_cycles = 3;
  double fs_focus_radius = 40.0;

  double max_aspect = 3.5;  // bisection threshold during construction
};

/// Closed 4-cell spheroid surface, normals oriented out of the fluid
/// (toward the spheroid center). One Hull patch.
SurfaceMesh build_spheroid_mesh(const Vec3& center, const Vec3& semi_axes);

/// Open box of the tank: free surface on top, bottom, inflow plane, and
/// three far-field walls, each face its own patch. Faces share lattice
/// nodes along box edges.
SurfaceMesh build_box_mesh(const DomainParams& p);

/// Box plus hull with curvature, aspect-ratio, and free-surface grading
/// passes applied. Throws MeshError when the hull pierces z = 0.
SurfaceMesh build_domain_mesh(const DomainParams& p);

/// Closed axis-aligned cube [0,s]^3 with n x n cells per face, fluid inside.
/// Top face FreeSurface, bottom Bottom, x=0 face Inflow, remaining three
/// faces FarField; one patch per face. Test and calibration helper.
SurfaceMesh build_cube_mesh(double size, int n);

/// Appends src (nodes, cells, patches, midpoint bookkeeping) to dst.
void append_mesh(SurfaceMesh& dst, const SurfaceMesh& src);

} // namespace ntt
