#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "focusplan/mesh.hpp"
#include "focusplan/optics.hpp"

namespace focusplan {

/// Regular cylindrical camera layout: `angular` columns around the vertical
/// axis, `vertical` rows over the extent. AUTO extent (nullopt) derives from
/// the mesh bounding box expanded by 5%.
struct GridSpec {
    int angular = 24;
    int vertical = 7;
    double radius = 750.0;
    std::optional<std::pair<double, double>> z_extent;

    void validate() const;
};

struct CameraGrid {
    std::vector<CameraView> cameras;                // id = row * angular + column
    std::vector<std::pair<int, int>> edges;         // 1-ring adjacency
    int angular = 0;
    int vertical = 0;
    double radius = 0.0;
    double z_min = 0.0;
    double z_max = 0.0;
    Vec3 axis_base = Vec3::Zero();                  // point on the cylinder axis at z = 0
};

/// Cameras at angles 2*pi*i/a looking horizontally at the axis, up = world
/// vertical, rows evenly spaced over the extent (mid-height for a single
/// row). Angular neighbors wrap; vertical neighbors do not.
CameraGrid generate_cylindrical_grid(const GridSpec& spec, const TriangleMesh& mesh,
                                     const CameraIntrinsics& intrinsics);

CameraGrid generate_cylindrical_grid(const GridSpec& spec, const Vec3& axis_base, double z_min,
                                     double z_max, const CameraIntrinsics& intrinsics);

/// Camera pairs within the given grid distance (angular steps wrap around,
/// vertical steps do not; distances add). ring = 1 reproduces `edges`.
std::vector<std::pair<int, int>> ring_adjacency(const CameraGrid& grid, int ring);

}  // namespace focusplan
