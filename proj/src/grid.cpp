#include "focusplan/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace focusplan {

void GridSpec::validate() const {
    if (angular < 1 || vertical < 1) throw std::invalid_argument("grid: angular and vertical counts must be >= 1");
    if (radius <= 0.0) throw std::invalid_argument("grid: radius must be > 0");
    if (z_extent && !(z_extent->first <= z_extent->second))
        throw std::invalid_argument("grid: invalid vertical extent");
}

CameraGrid generate_cylindrical_grid(const GridSpec& spec, const TriangleMesh& mesh,
                                     const CameraIntrinsics& intrinsics) {
    spec.validate();
    const Eigen::AlignedBox3d box = bounding_box(mesh);
    const Vec3 center = box.center();
    double z_min, z_max;
    if (spec.z_extent) {
        z_min = spec.z_extent->first;
        z_max = spec.z_extent->second;
    } else {
        const double range = box.max().z() - box.min().z();
        if (!(range > 0.0)) throw std::invalid_argument("grid: degenerate mesh bounding box");
        const double margin = 0.025 * range;  // range expanded by 5% in total
        z_min = box.min().z() - margin;
        z_max = box.max().z() + margin;
    }
    return generate_cylindrical_grid(spec, Vec3(center.x(), center.y(), 0.0), z_min, z_max, intrinsics);
}

CameraGrid generate_cylindrical_grid(const GridSpec& spec, const Vec3& axis_base, double z_min,
                                     double z_max, const CameraIntrinsics& intrinsics) {
    spec.validate();
    if (!(z_min <= z_max)) throw std::invalid_argument("grid: invalid vertical extent");

    CameraGrid grid;
    grid.angular = spec.angular;
    grid.vertical = spec.vertical;
    grid.radius = spec.radius;
    grid.z_min = z_min;
    grid.z_max = z_max;
    grid.axis_base = Vec3(axis_base.x(), axis_base.y(), 0.0);

    std::vector<double> heights(static_cast<size_t>(spec.vertical));
    if (spec.vertical == 1) {
        heights[0] = 0.5 * (z_min + z_max);
    } else {
        const double step = (z_max - z_min) / static_cast<double>(spec.vertical - 1);
        for (int j = 0; j < spec.vertical; ++j) heights[static_cast<size_t>(j)] = z_min + step * j;
    }

    grid.cameras.reserve(static_cast<size_t>(spec.angular * spec.vertical));
    for (int j = 0; j < spec.vertical; ++j)
        for (int i = 0; i < spec.angular; ++i) {
            const double theta = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(spec.angular);
            CameraView cam;
            cam.position = grid.axis_base +
                           Vec3(spec.radius * std::cos(theta), spec.radius * std::sin(theta),
                                heights[static_cast<size_t>(j)]);
            cam.direction = Vec3(-std::cos(theta), -std::sin(theta), 0.0);
            cam.up = Vec3::UnitZ();
            cam.intrinsics = intrinsics;
            cam.id = j * spec.angular + i;
            grid.cameras.push_back(cam);
        }

    const auto id = [&](int i, int j) { return j * spec.angular + i; };
    for (int j = 0; j < spec.vertical; ++j) {
        if (spec.angular >= 3) {
            for (int i = 0; i < spec.angular; ++i)
                grid.edges.emplace_back(id(i, j), id((i + 1) % spec.angular, j));
        } else if (spec.angular == 2) {
            grid.edges.emplace_back(id(0, j), id(1, j));
        }
    }
    for (int j = 0; j + 1 < spec.vertical; ++j)
        for (int i = 0; i < spec.angular; ++i) grid.edges.emplace_back(id(i, j), id(i, j + 1));
    return grid;
}

std::vector<std::pair<int, int>> ring_adjacency(const CameraGrid& grid, int ring) {
    if (ring < 1) throw std::invalid_argument("ring_adjacency: ring must be >= 1");
    if (ring == 1) return grid.edges;
    std::vector<std::pair<int, int>> pairs;
    const int a = grid.angular;
    const int z = grid.vertical;
    const int n = a * z;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            const int iu = u % a, ju = u / a;
            const int iv = v % a, jv = v / a;
            const int raw = std::abs(iu - iv);
            const int da = std::min(raw, a - raw);
            const int dz = std::abs(ju - jv);
            const int dist = da + dz;
            if (dist >= 1 && dist <= ring) pairs.emplace_back(u, v);
        }
    return pairs;
}

}  // namespace focusplan
