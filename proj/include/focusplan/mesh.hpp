#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "focusplan/optics.hpp"

namespace focusplan {

/// Indexed triangle surface, positions in mm. After finalize() the winding of
/// every triangle and the per-vertex normals follow the inward-pointing
/// convention (normals oriented into the solid).
struct TriangleMesh {
    Eigen::MatrixX3d vertices;
    Eigen::MatrixX3i triangles;
    Eigen::MatrixX3d vertex_normals;  // zero rows until computed or provided
    int dropped_degenerate = 0;

    Eigen::Index vertex_count() const { return vertices.rows(); }
    Eigen::Index triangle_count() const { return triangles.rows(); }
    bool has_vertex_normals() const { return vertex_normals.rows() == vertices.rows() && vertices.rows() > 0; }
};

double triangle_area(const TriangleMesh& mesh, Eigen::Index t);

/// Unit normal from the triangle winding (right-handed cross product).
Vec3 face_normal(const TriangleMesh& mesh, Eigen::Index t);

double total_area(const TriangleMesh& mesh);

double signed_volume(const TriangleMesh& mesh);

Eigen::AlignedBox3d bounding_box(const TriangleMesh& mesh);

/// Removes triangles with area <= area_tol (mm^2); increments dropped_degenerate.
void drop_degenerate_triangles(TriangleMesh& mesh, double area_tol = 1e-12);

/// Validation shared by loaders and generators: indices in range, finite
/// coordinates, non-empty geometry with positive area.
void validate_mesh(const TriangleMesh& mesh);

/// Area-weighted vertex normals from the current face windings.
void compute_vertex_normals(TriangleMesh& mesh);

/// Enforces the inward-normal convention on a freshly loaded mesh:
/// drops degenerate triangles, orients windings inward by the sign of the
/// signed volume (open or flat meshes keep their authored orientation),
/// and fills in vertex normals when absent. Provided normals are negated
/// wholesale if they disagree with the inward winding.
void finalize_mesh(TriangleMesh& mesh);

}  // namespace focusplan
