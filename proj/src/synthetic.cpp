#include "focusplan/synthetic.hpp"

#include <cmath>

namespace focusplan {

namespace {

struct SurfaceBuilder {
    std::vector<Vec3> verts;
    std::vector<Eigen::Vector3i> tris;

    int add(const Vec3& p) {
        verts.push_back(p);
        return static_cast<int>(verts.size()) - 1;
    }

    int add_ring(double cx, double cy, double radius, double z, int n_lon) {
        const int start = static_cast<int>(verts.size());
        for (int i = 0; i < n_lon; ++i) {
            const double theta = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n_lon);
            verts.emplace_back(cx + radius * std::cos(theta), cy + radius * std::sin(theta), z);
        }
        return start;
    }

    // All faces built with outward orientation; flipped at the end if the
    // enclosed region is the solid.
    void connect(int lower, int upper, int n_lon) {
        for (int i = 0; i < n_lon; ++i) {
            const int j = (i + 1) % n_lon;
            tris.push_back({lower + i, lower + j, upper + j});
            tris.push_back({lower + i, upper + j, upper + i});
        }
    }

    void fan_bottom(int pole, int ring, int n_lon) {
        for (int i = 0; i < n_lon; ++i) tris.push_back({pole, ring + (i + 1) % n_lon, ring + i});
    }

    void fan_top(int pole, int ring, int n_lon) {
        for (int i = 0; i < n_lon; ++i) tris.push_back({pole, ring + i, ring + (i + 1) % n_lon});
    }

    TriangleMesh finish(bool flip_to_inward) {
        TriangleMesh mesh;
        mesh.vertices.resize(static_cast<Eigen::Index>(verts.size()), 3);
        for (size_t i = 0; i < verts.size(); ++i) mesh.vertices.row(static_cast<Eigen::Index>(i)) = verts[i];
        mesh.triangles.resize(static_cast<Eigen::Index>(tris.size()), 3);
        for (size_t i = 0; i < tris.size(); ++i) mesh.triangles.row(static_cast<Eigen::Index>(i)) = tris[i];
        if (flip_to_inward)
            for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t)
                std::swap(mesh.triangles(t, 1), mesh.triangles(t, 2));
        validate_mesh(mesh);
        compute_vertex_normals(mesh);
        return mesh;
    }
};

}  // namespace

TriangleMesh make_sphere(const Vec3& center, double radius, int n_lat, int n_lon, bool inside_out) {
    SurfaceBuilder b;
    const int bottom = b.add(center + Vec3(0, 0, -radius));
    std::vector<int> rings;
    for (int k = 1; k < n_lat; ++k) {
        const double phi = -M_PI / 2.0 + M_PI * static_cast<double>(k) / static_cast<double>(n_lat);
        rings.push_back(b.add_ring(center.x(), center.y(), radius * std::cos(phi),
                                   center.z() + radius * std::sin(phi), n_lon));
    }
    const int top = b.add(center + Vec3(0, 0, radius));
    b.fan_bottom(bottom, rings.front(), n_lon);
    for (size_t k = 0; k + 1 < rings.size(); ++k) b.connect(rings[k], rings[k + 1], n_lon);
    b.fan_top(top, rings.back(), n_lon);
    return b.finish(!inside_out);
}

TriangleMesh make_cylinder(double cx, double cy, double radius, double z_min, double z_max,
                           int n_lon, int n_rings) {
    SurfaceBuilder b;
    std::vector<int> rings;
    for (int j = 0; j <= n_rings; ++j) {
        const double z = z_min + (z_max - z_min) * static_cast<double>(j) / static_cast<double>(n_rings);
        rings.push_back(b.add_ring(cx, cy, radius, z, n_lon));
    }
    for (size_t j = 0; j + 1 < rings.size(); ++j) b.connect(rings[j], rings[j + 1], n_lon);
    const int bottom_center = b.add(Vec3(cx, cy, z_min));
    const int top_center = b.add(Vec3(cx, cy, z_max));
    b.fan_bottom(bottom_center, rings.front(), n_lon);
    b.fan_top(top_center, rings.back(), n_lon);
    return b.finish(true);
}

TriangleMesh make_capsule(double radius, double height, int n_lon, int n_lat_cap, int n_rings) {
    SurfaceBuilder b;
    const double cyl_lo = radius;
    const double cyl_hi = height - radius;
    const int bottom = b.add(Vec3(0, 0, 0));
    std::vector<int> rings;
    for (int k = 1; k <= n_lat_cap; ++k) {
        const double phi = -M_PI / 2.0 + (M_PI / 2.0) * static_cast<double>(k) / static_cast<double>(n_lat_cap);
        rings.push_back(b.add_ring(0, 0, radius * std::cos(phi), cyl_lo + radius * std::sin(phi), n_lon));
    }
    for (int j = 1; j < n_rings; ++j) {
        const double z = cyl_lo + (cyl_hi - cyl_lo) * static_cast<double>(j) / static_cast<double>(n_rings);
        rings.push_back(b.add_ring(0, 0, radius, z, n_lon));
    }
    for (int k = 0; k < n_lat_cap; ++k) {
        const double phi = (M_PI / 2.0) * static_cast<double>(k) / static_cast<double>(n_lat_cap);
        rings.push_back(b.add_ring(0, 0, radius * std::cos(phi), cyl_hi + radius * std::sin(phi), n_lon));
    }
    const int top = b.add(Vec3(0, 0, height));
    b.fan_bottom(bottom, rings.front(), n_lon);
    for (size_t k = 0; k + 1 < rings.size(); ++k) b.connect(rings[k], rings[k + 1], n_lon);
    b.fan_top(top, rings.back(), n_lon);
    return b.finish(true);
}

TriangleMesh make_wall(double x, double y0, double y1, double z0, double z1) {
    TriangleMesh mesh;
    mesh.vertices.resize(4, 3);
    mesh.vertices.row(0) = Vec3(x, y0, z0);
    mesh.vertices.row(1) = Vec3(x, y1, z0);
    mesh.vertices.row(2) = Vec3(x, y1, z1);
    mesh.vertices.row(3) = Vec3(x, y0, z1);
    mesh.triangles.resize(2, 3);
    mesh.triangles.row(0) = Eigen::Vector3i(0, 1, 2);
    mesh.triangles.row(1) = Eigen::Vector3i(0, 2, 3);
    mesh.vertex_normals = Eigen::MatrixX3d::Zero(4, 3);
    mesh.vertex_normals.col(0).setOnes();  // +x, into the wall as seen from -x
    validate_mesh(mesh);
    return mesh;
}

TwoPlaneScene make_two_plane_scene(const CameraIntrinsics& intrinsics) {
    TwoPlaneScene scene;
    const TriangleMesh near_wall = make_wall(600.0, -65.0, -25.0, -130.0, 130.0);
    const TriangleMesh far_wall = make_wall(1600.0, -20.0, 8.0, -110.0, 110.0);

    TriangleMesh& mesh = scene.mesh;
    mesh.vertices.resize(8, 3);
    mesh.vertices << near_wall.vertices, far_wall.vertices;
    mesh.triangles.resize(4, 3);
    mesh.triangles << near_wall.triangles, (far_wall.triangles.array() + 4).matrix();
    mesh.vertex_normals.resize(8, 3);
    mesh.vertex_normals << near_wall.vertex_normals, far_wall.vertex_normals;
    scene.near_wall_triangles = 2;

    CameraView a;
    a.position = Vec3(0, 0, 0);
    a.direction = Vec3::UnitX();
    a.up = Vec3::UnitZ();
    a.intrinsics = intrinsics;
    a.id = 0;
    CameraView bcam = a;
    bcam.position = Vec3(0, 20.0, 0);
    bcam.id = 1;
    scene.cameras = {a, bcam};
    scene.edges = {{0, 1}};
    return scene;
}

TriangleMesh rotate_about_z(const TriangleMesh& mesh, double angle, const Vec3& pivot) {
    Eigen::Matrix3d rot = Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
    TriangleMesh out = mesh;
    const Vec3 center(pivot.x(), pivot.y(), 0.0);
    for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v) {
        const Vec3 p = mesh.vertices.row(v);
        out.vertices.row(v) = center + rot * (p - center);
    }
    if (mesh.has_vertex_normals())
        for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v)
            out.vertex_normals.row(v) = rot * Vec3(mesh.vertex_normals.row(v));
    return out;
}

std::vector<SurfaceSample> rotate_about_z(const std::vector<SurfaceSample>& samples, double angle,
                                          const Vec3& pivot) {
    Eigen::Matrix3d rot = Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
    const Vec3 center(pivot.x(), pivot.y(), 0.0);
    std::vector<SurfaceSample> out = samples;
    for (auto& s : out) {
        s.position = center + rot * (s.position - center);
        s.normal = rot * s.normal;
    }
    return out;
}

}  // namespace focusplan
