#pragma once

#include <vector>

#include "focusplan/mesh.hpp"
#include "focusplan/optics.hpp"
#include "focusplan/sampling.hpp"

namespace focusplan {

/// Generators for self-contained test scenes. All meshes come out with
/// inward windings and vertex normals already set (mm units).

/// UV sphere. Default orientation treats the ball as the solid (normals
/// toward the center); `inside_out` flips everything for room-like scenes
/// viewed from within.
TriangleMesh make_sphere(const Vec3& center, double radius, int n_lat = 16, int n_lon = 32,
                         bool inside_out = false);

/// Closed cylinder around the vertical axis through (cx, cy).
TriangleMesh make_cylinder(double cx, double cy, double radius, double z_min, double z_max,
                           int n_lon = 32, int n_rings = 8);

/// Capsule standing on z = 0: cylinder of radius r with hemispherical caps,
/// total height `height` (cap-to-cap). A stand-in for a scanned body.
TriangleMesh make_capsule(double radius = 150.0, double height = 1700.0, int n_lon = 72,
                          int n_lat_cap = 18, int n_rings = 24);

/// Axis-aligned rectangle in the x = `x` plane spanning [y0,y1] x [z0,z1],
/// faces wound so the inward normal is +x.
TriangleMesh make_wall(double x, double y0, double y1, double z0, double z1);

/// Two front-parallel walls at depths 600 mm and 1600 mm seen by two nearly
/// colocated cameras looking down +x. The near wall is laterally offset and
/// carries the larger area; every sample is statically cheaper for camera 0,
/// and no single focus distance covers both walls. Greedy per-view
/// optimization therefore parks both cameras' budget on the near wall, while
/// a joint two-view step can split the walls between the cameras.
struct TwoPlaneScene {
    TriangleMesh mesh;
    std::vector<CameraView> cameras;         // camera 0 = A, camera 1 = B
    std::vector<std::pair<int, int>> edges;  // the single pair
    int near_wall_triangles = 2;             // triangles [0, near_wall_triangles) form the near wall
    double near_depth = 600.0;
    double far_depth = 1600.0;
};

TwoPlaneScene make_two_plane_scene(const CameraIntrinsics& intrinsics = {});

/// Rigid rotation about the vertical axis through `pivot`.
TriangleMesh rotate_about_z(const TriangleMesh& mesh, double angle, const Vec3& pivot);
std::vector<SurfaceSample> rotate_about_z(const std::vector<SurfaceSample>& samples, double angle,
                                          const Vec3& pivot);

}  // namespace focusplan
