#include "focusplan/bvh.hpp"

#include <algorithm>
#include <numeric>

namespace focusplan {

bool intersect_triangle(const Vec3& origin, const Vec3& dir, const Vec3& a, const Vec3& b,
                        const Vec3& c, double t_min, double t_max, double& t) {
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 pvec = dir.cross(e2);
    const double det = e1.dot(pvec);
    if (std::abs(det) < 1e-12) return false;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = origin - a;
    const double u = tvec.dot(pvec) * inv_det;
    if (u < 0.0 || u > 1.0) return false;
    const Vec3 qvec = tvec.cross(e1);
    const double v = dir.dot(qvec) * inv_det;
    if (v < 0.0 || u + v > 1.0) return false;
    t = e2.dot(qvec) * inv_det;
    return t > t_min && t < t_max;
}

namespace {

bool ray_box(const Vec3& lo, const Vec3& hi, const Vec3& origin, const Vec3& inv_dir,
             double t_min, double t_max) {
    for (int k = 0; k < 3; ++k) {
        double t0 = (lo[k] - origin[k]) * inv_dir[k];
        double t1 = (hi[k] - origin[k]) * inv_dir[k];
        if (inv_dir[k] < 0.0) std::swap(t0, t1);
        t_min = std::max(t_min, t0);
        t_max = std::min(t_max, t1);
        if (t_max < t_min) return false;
    }
    return true;
}

}  // namespace

Bvh::Bvh(const TriangleMesh& mesh) {
    const Eigen::Index n = mesh.triangle_count();
    tri_a_.resize(static_cast<size_t>(n));
    tri_e1_.resize(static_cast<size_t>(n));
    tri_e2_.resize(static_cast<size_t>(n));
    std::vector<Vec3> centroids(static_cast<size_t>(n));
    for (Eigen::Index t = 0; t < n; ++t) {
        const auto idx = mesh.triangles.row(t);
        const Vec3 a = mesh.vertices.row(idx[0]);
        const Vec3 b = mesh.vertices.row(idx[1]);
        const Vec3 c = mesh.vertices.row(idx[2]);
        tri_a_[static_cast<size_t>(t)] = a;
        tri_e1_[static_cast<size_t>(t)] = b - a;
        tri_e2_[static_cast<size_t>(t)] = c - a;
        centroids[static_cast<size_t>(t)] = (a + b + c) / 3.0;
    }
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    nodes_.reserve(static_cast<size_t>(2 * n));
    if (n > 0) build(order, 0, static_cast<int>(n), centroids);
    tri_order_ = std::move(order);
}

int Bvh::build(std::vector<int>& order, int begin, int end, const std::vector<Vec3>& centroids) {
    const int node_index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (int i = begin; i < end; ++i) {
        const size_t t = static_cast<size_t>(order[static_cast<size_t>(i)]);
        const Vec3& a = tri_a_[t];
        const Vec3 b = a + tri_e1_[t];
        const Vec3 c = a + tri_e2_[t];
        lo = lo.cwiseMin(a).cwiseMin(b).cwiseMin(c);
        hi = hi.cwiseMax(a).cwiseMax(b).cwiseMax(c);
    }
    nodes_[static_cast<size_t>(node_index)].lo = lo;
    nodes_[static_cast<size_t>(node_index)].hi = hi;

    const int count = end - begin;
    if (count <= 4) {
        nodes_[static_cast<size_t>(node_index)].first = begin;
        nodes_[static_cast<size_t>(node_index)].count = count;
        return node_index;
    }

    Vec3 clo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 chi = -clo;
    for (int i = begin; i < end; ++i) {
        const Vec3& c = centroids[static_cast<size_t>(order[static_cast<size_t>(i)])];
        clo = clo.cwiseMin(c);
        chi = chi.cwiseMax(c);
    }
    int axis = 0;
    (chi - clo).maxCoeff(&axis);

    const int mid = begin + count / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](int ta, int tb) {
                         const double ca = centroids[static_cast<size_t>(ta)][axis];
                         const double cb = centroids[static_cast<size_t>(tb)][axis];
                         return ca < cb || (ca == cb && ta < tb);
                     });

    const int left = build(order, begin, mid, centroids);
    const int right = build(order, mid, end, centroids);
    nodes_[static_cast<size_t>(node_index)].left = left;
    nodes_[static_cast<size_t>(node_index)].right = right;
    return node_index;
}

bool Bvh::hit_leaf(const Node& node, const Vec3& origin, const Vec3& dir, double t_min,
                   double t_max) const {
    for (int i = node.first; i < node.first + node.count; ++i) {
        const size_t t = static_cast<size_t>(tri_order_[static_cast<size_t>(i)]);
        double hit_t;
        if (intersect_triangle(origin, dir, tri_a_[t], tri_a_[t] + tri_e1_[t], tri_a_[t] + tri_e2_[t],
                               t_min, t_max, hit_t))
            return true;
    }
    return false;
}

bool Bvh::any_hit(const Vec3& origin, const Vec3& dir, double t_min, double t_max) const {
    if (nodes_.empty()) return false;
    const Vec3 inv_dir = dir.cwiseInverse();
    int stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[static_cast<size_t>(stack[--top])];
        if (!ray_box(node.lo, node.hi, origin, inv_dir, t_min, t_max)) continue;
        if (node.left < 0) {
            if (hit_leaf(node, origin, dir, t_min, t_max)) return true;
        } else {
            stack[top++] = node.left;
            stack[top++] = node.right;
        }
    }
    return false;
}

}  // namespace focusplan
