#include "focusplan/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace focusplan {

double triangle_area(const TriangleMesh& mesh, Eigen::Index t) {
    const auto idx = mesh.triangles.row(t);
    const Vec3 a = mesh.vertices.row(idx[0]);
    const Vec3 b = mesh.vertices.row(idx[1]);
    const Vec3 c = mesh.vertices.row(idx[2]);
    return 0.5 * (b - a).cross(c - a).norm();
}

Vec3 face_normal(const TriangleMesh& mesh, Eigen::Index t) {
    const auto idx = mesh.triangles.row(t);
    const Vec3 a = mesh.vertices.row(idx[0]);
    const Vec3 b = mesh.vertices.row(idx[1]);
    const Vec3 c = mesh.vertices.row(idx[2]);
    const Vec3 n = (b - a).cross(c - a);
    const double len = n.norm();
    return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
}

double total_area(const TriangleMesh& mesh) {
    double area = 0.0;
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) area += triangle_area(mesh, t);
    return area;
}

double signed_volume(const TriangleMesh& mesh) {
    double v6 = 0.0;
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
        const auto idx = mesh.triangles.row(t);
        const Vec3 a = mesh.vertices.row(idx[0]);
        const Vec3 b = mesh.vertices.row(idx[1]);
        const Vec3 c = mesh.vertices.row(idx[2]);
        v6 += a.dot(b.cross(c));
    }
    return v6 / 6.0;
}

Eigen::AlignedBox3d bounding_box(const TriangleMesh& mesh) {
    Eigen::AlignedBox3d box;
    for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v) box.extend(Vec3(mesh.vertices.row(v)));
    return box;
}

void drop_degenerate_triangles(TriangleMesh& mesh, double area_tol) {
    std::vector<Eigen::Index> keep;
    keep.reserve(static_cast<size_t>(mesh.triangle_count()));
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t)
        if (triangle_area(mesh, t) > area_tol) keep.push_back(t);
    if (static_cast<Eigen::Index>(keep.size()) == mesh.triangle_count()) return;
    Eigen::MatrixX3i kept(static_cast<Eigen::Index>(keep.size()), 3);
    for (Eigen::Index i = 0; i < kept.rows(); ++i) kept.row(i) = mesh.triangles.row(keep[static_cast<size_t>(i)]);
    mesh.dropped_degenerate += static_cast<int>(mesh.triangle_count() - kept.rows());
    mesh.triangles = std::move(kept);
}

void validate_mesh(const TriangleMesh& mesh) {
    if (mesh.vertex_count() == 0 || mesh.triangle_count() == 0)
        throw std::runtime_error("mesh: empty geometry");
    if (!mesh.vertices.allFinite())
        throw std::runtime_error("mesh: non-finite vertex coordinates");
    const int nv = static_cast<int>(mesh.vertex_count());
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k) {
            const int i = mesh.triangles(t, k);
            if (i < 0 || i >= nv) throw std::runtime_error("mesh: triangle index out of range");
        }
    if (!(total_area(mesh) > 0.0)) throw std::runtime_error("mesh: zero surface area");
}

void compute_vertex_normals(TriangleMesh& mesh) {
    mesh.vertex_normals = Eigen::MatrixX3d::Zero(mesh.vertex_count(), 3);
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
        const auto idx = mesh.triangles.row(t);
        const Vec3 a = mesh.vertices.row(idx[0]);
        const Vec3 b = mesh.vertices.row(idx[1]);
        const Vec3 c = mesh.vertices.row(idx[2]);
        const Vec3 weighted = 0.5 * (b - a).cross(c - a);  // area-weighted face normal
        for (int k = 0; k < 3; ++k) mesh.vertex_normals.row(idx[k]) += weighted.transpose();
    }
    for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v) {
        const double len = mesh.vertex_normals.row(v).norm();
        if (len > 0.0) mesh.vertex_normals.row(v) /= len;
    }
}

void finalize_mesh(TriangleMesh& mesh) {
    drop_degenerate_triangles(mesh);
    validate_mesh(mesh);

    // Positive signed volume means the windings are coherently outward;
    // flip them all so face normals point into the solid. Open or flat
    // meshes (volume near zero at the mesh's own scale) are left as authored.
    const double area = total_area(mesh);
    const double volume_tol = 1e-9 * std::pow(area, 1.5);
    if (signed_volume(mesh) > volume_tol)
        for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t)
            std::swap(mesh.triangles(t, 1), mesh.triangles(t, 2));

    if (mesh.has_vertex_normals()) {
        TriangleMesh tmp = mesh;
        compute_vertex_normals(tmp);
        double alignment = 0.0;
        for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v)
            alignment += mesh.vertex_normals.row(v).dot(tmp.vertex_normals.row(v));
        if (alignment < 0.0) mesh.vertex_normals = -mesh.vertex_normals;
        for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v) {
            const double len = mesh.vertex_normals.row(v).norm();
            if (len > 0.0) mesh.vertex_normals.row(v) /= len;
        }
    } else {
        compute_vertex_normals(mesh);
    }
}

}  // namespace focusplan
