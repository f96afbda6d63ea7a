#pragma once

#include <map>
#include <string>
#include <vector>

#include "focusplan/mesh.hpp"

namespace focusplan {

/// Loads an OBJ or PLY mesh (dispatch by extension; PLY may be ASCII or
/// binary little-endian). Coordinates are multiplied by `scale` and assumed
/// to be mm afterwards. The result is finalized: degenerate triangles
/// dropped, windings and normals oriented inward.
TriangleMesh load_mesh(const std::string& path, double scale = 1.0);

/// Vertex data of a PLY file: positions plus every other scalar vertex
/// property by name (values widened to double).
struct PlyPointCloud {
    Eigen::MatrixX3d positions;
    std::map<std::string, std::vector<double>> properties;
};

PlyPointCloud load_ply_pointcloud(const std::string& path);

/// Extra per-vertex column for write_ply_pointcloud. Values are stored as
/// double here and narrowed to `type` on write.
struct PlyProperty {
    enum class Type { Float64, Float32, Uint8 };
    std::string name;
    Type type = Type::Float64;
    std::vector<double> values;
};

/// Writes a binary little-endian PLY point cloud with double x/y/z and the
/// given extra properties.
void write_ply_pointcloud(const std::string& path, const Eigen::MatrixX3d& positions,
                          const std::vector<PlyProperty>& extra);

}  // namespace focusplan
