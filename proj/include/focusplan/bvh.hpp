#pragma once

#include <vector>

#include "focusplan/mesh.hpp"

namespace focusplan {

/// Möller–Trumbore ray/triangle intersection. `dir` need not be unit; the
/// returned parameter t is in units of `dir`. Returns true when the ray hits
/// the triangle with t in (t_min, t_max).
bool intersect_triangle(const Vec3& origin, const Vec3& dir, const Vec3& a, const Vec3& b,
                        const Vec3& c, double t_min, double t_max, double& t);

/// Bounding-volume hierarchy over mesh triangles for any-hit ray queries.
/// Median split on the widest centroid axis. Immutable after construction.
class Bvh {
public:
    explicit Bvh(const TriangleMesh& mesh);

    /// True iff any triangle intersects the ray with parameter in (t_min, t_max).
    bool any_hit(const Vec3& origin, const Vec3& dir, double t_min, double t_max) const;

    Eigen::Index triangle_count() const { return static_cast<Eigen::Index>(tri_a_.size()); }

private:
    struct Node {
        Vec3 lo, hi;
        int left = -1;   // internal: child indices; leaf: left == -1
        int right = -1;
        int first = 0;   // leaf triangle range [first, first + count)
        int count = 0;
    };

    int build(std::vector<int>& order, int begin, int end, const std::vector<Vec3>& centroids);
    bool hit_leaf(const Node& node, const Vec3& origin, const Vec3& dir, double t_min, double t_max) const;

    std::vector<Node> nodes_;
    std::vector<int> tri_order_;
    std::vector<Vec3> tri_a_, tri_e1_, tri_e2_;
};

}  // namespace focusplan
