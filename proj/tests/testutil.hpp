#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "focusplan/cost_cache.hpp"
#include "focusplan/grid.hpp"
#include "focusplan/synthetic.hpp"
#include "focusplan/visibility.hpp"

namespace testutil {

using namespace focusplan;

inline double urand(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(gen);
}

inline CameraView camera_at(const Vec3& position, const Vec3& direction, const Vec3& up, int id = 0,
                            const CameraIntrinsics& intr = {}) {
    CameraView cam;
    cam.position = position;
    cam.direction = direction.normalized();
    cam.up = up.normalized();
    cam.intrinsics = intr;
    cam.id = id;
    cam.validate();
    return cam;
}

/// Counts depth intervals containing a focus distance by binary search over
/// the sorted interval endpoints; independent of the sweep-based partition.
class StabbingOracle {
public:
    StabbingOracle(const CameraIntrinsics& intr, const std::vector<double>& depths) {
        for (double d : depths) {
            const FocusInterval iv = focus_interval_for_depth(d, intr);
            if (iv.empty()) continue;
            los_.push_back(iv.lo);
            if (iv.hi) his_.push_back(*iv.hi);
        }
        std::sort(los_.begin(), los_.end());
        std::sort(his_.begin(), his_.end());
    }

    /// Closed intervals: contains s iff lo <= s and (unbounded or hi >= s).
    int count(double s) const {
        const auto started = std::upper_bound(los_.begin(), los_.end(), s) - los_.begin();
        const auto ended = std::lower_bound(his_.begin(), his_.end(), s) - his_.begin();
        return static_cast<int>(started - ended);
    }

private:
    std::vector<double> los_;
    std::vector<double> his_;
};

/// Exhaustive all-triangle version of the visibility predicate.
inline bool brute_force_visible(const TriangleMesh& mesh, const SurfaceSample& sample,
                                const CameraView& camera) {
    double u, v, depth;
    if (!project_to_image(sample.position, camera, u, v, depth)) return false;
    if (!in_image_bounds(camera, u, v)) return false;
    if (camera.direction.dot(sample.normal) <= 0.0) return false;
    const Vec3 dir = sample.position - camera.position;
    const double dist = dir.norm();
    if (dist <= kOcclusionOffsetMm) return true;
    const double t_max = 1.0 - kOcclusionOffsetMm / dist;
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
        const auto idx = mesh.triangles.row(t);
        double hit_t;
        if (intersect_triangle(camera.position, dir, mesh.vertices.row(idx[0]),
                               mesh.vertices.row(idx[1]), mesh.vertices.row(idx[2]), 1e-7, t_max, hit_t))
            return false;
    }
    return true;
}

struct RandomScene {
    TriangleMesh mesh;
    CameraGrid grid;
    std::vector<SurfaceSample> samples;
    VisibilityTable visibility;
    CostCache cache;
};

/// Small randomized scene: a sphere, capsule or cylinder surrounded by a
/// coarse cylindrical grid.
inline RandomScene random_scene(std::mt19937_64& gen, int sample_count = 200) {
    RandomScene scene;
    const int shape = static_cast<int>(gen() % 3);
    if (shape == 0) {
        const double r = urand(gen, 120.0, 300.0);
        scene.mesh = make_sphere(Vec3(0, 0, r), r, 10, 20);
    } else if (shape == 1) {
        const double r = urand(gen, 80.0, 150.0);
        const double h = urand(gen, 5.0 * r, 9.0 * r);
        scene.mesh = make_capsule(r, h, 20, 5, 6);
    } else {
        const double r = urand(gen, 100.0, 250.0);
        const double h = urand(gen, 400.0, 1000.0);
        scene.mesh = make_cylinder(0, 0, r, 0, h, 20, 6);
    }
    GridSpec spec;
    spec.angular = 4 + static_cast<int>(gen() % 5);
    spec.vertical = 1 + static_cast<int>(gen() % 3);
    spec.radius = urand(gen, 450.0, 900.0);
    scene.grid = generate_cylindrical_grid(spec, scene.mesh, CameraIntrinsics{});
    scene.samples = sample_surface(scene.mesh, sample_count, gen());
    scene.visibility = build_visibility(scene.mesh, scene.samples, scene.grid.cameras);
    scene.cache = CostCache::build(scene.samples, scene.grid.cameras, CostParams{}, scene.visibility);
    return scene;
}

/// Asserts that a solver trace never increases.
inline bool non_increasing(const std::vector<TraceRow>& trace, double slack = 1e-9) {
    for (size_t i = 1; i < trace.size(); ++i)
        if (trace[i].total_cost > trace[i - 1].total_cost + slack) return false;
    return true;
}

}  // namespace testutil
