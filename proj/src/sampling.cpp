#include "focusplan/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace focusplan {

std::vector<SurfaceSample> sample_surface(const TriangleMesh& mesh, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample_surface: count must be >= 1");
    const Eigen::Index ntri = mesh.triangle_count();
    if (ntri == 0) throw std::invalid_argument("sample_surface: mesh has no triangles");

    std::vector<double> cumulative(static_cast<size_t>(ntri));
    double running = 0.0;
    for (Eigen::Index t = 0; t < ntri; ++t) {
        running += triangle_area(mesh, t);
        cumulative[static_cast<size_t>(t)] = running;
    }
    const double area = running;
    if (!(area > 0.0)) throw std::invalid_argument("sample_surface: zero total area");

    const bool smooth = mesh.has_vertex_normals();
    std::mt19937_64 gen(seed);
    std::vector<SurfaceSample> samples(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double r = uniform_unit(gen) * area;
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), r);
        const Eigen::Index t = std::min<Eigen::Index>(
            static_cast<Eigen::Index>(it - cumulative.begin()), ntri - 1);

        double u = uniform_unit(gen);
        double v = uniform_unit(gen);
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        const double w = 1.0 - u - v;

        const auto idx = mesh.triangles.row(t);
        const Vec3 a = mesh.vertices.row(idx[0]);
        const Vec3 b = mesh.vertices.row(idx[1]);
        const Vec3 c = mesh.vertices.row(idx[2]);

        SurfaceSample& s = samples[static_cast<size_t>(i)];
        s.position = w * a + u * b + v * c;
        s.source_triangle = static_cast<int>(t);
        s.weight = area / static_cast<double>(count);

        Vec3 n;
        if (smooth) {
            n = w * Vec3(mesh.vertex_normals.row(idx[0])) + u * Vec3(mesh.vertex_normals.row(idx[1])) +
                v * Vec3(mesh.vertex_normals.row(idx[2]));
        } else {
            n = face_normal(mesh, t);
        }
        double len = n.norm();
        if (len < 1e-12) {
            n = face_normal(mesh, t);
            len = n.norm();
        }
        s.normal = n / len;
    }
    return samples;
}

}  // namespace focusplan
