#include "focusplan/cost_cache.hpp"

#include <stdexcept>

namespace focusplan {

CostCache CostCache::build(const std::vector<SurfaceSample>& samples,
                           const std::vector<CameraView>& cameras, const CostParams& params,
                           const VisibilityTable& visibility) {
    params.validate();
    const auto cams = static_cast<Eigen::Index>(cameras.size());
    const auto n = static_cast<Eigen::Index>(samples.size());
    if (visibility.camera_count() != cams || visibility.sample_count() != n)
        throw std::invalid_argument("cost cache: visibility table dimensions mismatch");

    constexpr double inf = std::numeric_limits<double>::infinity();
    CostCache cache;
    cache.params_ = params;
    cache.cameras_ = cameras;
    cache.weights_.resize(static_cast<size_t>(n));
    for (Eigen::Index p = 0; p < n; ++p) cache.weights_[static_cast<size_t>(p)] = samples[static_cast<size_t>(p)].weight;
    cache.static_cost_.setOnes(cams, n);
    cache.depth_.setZero(cams, n);
    cache.focus_lo_.setConstant(cams, n, inf);
    cache.focus_hi_.setConstant(cams, n, -inf);
    cache.visible_ = visibility.visible;

    for (Eigen::Index c = 0; c < cams; ++c) {
        const CameraView& cam = cameras[static_cast<size_t>(c)];
        for (Eigen::Index p = 0; p < n; ++p) {
            if (!visibility.is_visible(c, p)) continue;
            const SurfaceSample& s = samples[static_cast<size_t>(p)];
            const Vec3 d = s.position - cam.position;
            const double depth = d.dot(cam.direction);
            const double facing = cam.direction.dot(s.normal);
            if (facing <= 0.0)
                throw std::logic_error("cost cache: back-facing sample marked visible");
            const double area_term = std::min(params.eps1 * depth * depth / facing, 1.0);
            const double deviation_term = std::min((d - depth * cam.direction).norm() / params.eps2, 1.0);
            cache.static_cost_(c, p) = params.w1 * area_term + params.w2 * deviation_term;
            cache.depth_(c, p) = depth;
            const FocusInterval iv = focus_interval_for_depth(depth, cam.intrinsics);
            if (!iv.empty()) {
                cache.focus_lo_(c, p) = iv.lo;
                cache.focus_hi_(c, p) = iv.hi ? *iv.hi : inf;
            }
        }
    }
    return cache;
}

}  // namespace focusplan
