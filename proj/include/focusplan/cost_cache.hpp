#pragma once

#include <limits>
#include <vector>

#include "focusplan/optics.hpp"
#include "focusplan/sampling.hpp"
#include "focusplan/visibility.hpp"

namespace focusplan {

/// Dense per-(camera, sample) precomputation. The first two cost terms and
/// the sample depth do not depend on the focus distance, so they are
/// evaluated once; the focus-dependent term reduces to membership of s in
/// the per-pair focus interval [focus_lo, focus_hi].
///
/// Matrix layout is cameras x samples. For invisible pairs static_cost is 1
/// and the interval is empty (lo = +inf, hi = -inf); interval bounds are only
/// ever compared, never used in arithmetic. focus_hi = +inf with finite
/// focus_lo marks an interval unbounded above.
class CostCache {
public:
    static CostCache build(const std::vector<SurfaceSample>& samples,
                           const std::vector<CameraView>& cameras, const CostParams& params,
                           const VisibilityTable& visibility);

    Eigen::Index camera_count() const { return static_cost_.rows(); }
    Eigen::Index sample_count() const { return static_cost_.cols(); }

    bool visible(Eigen::Index camera, Eigen::Index sample) const { return visible_(camera, sample) != 0; }
    double static_cost(Eigen::Index camera, Eigen::Index sample) const { return static_cost_(camera, sample); }
    double depth(Eigen::Index camera, Eigen::Index sample) const { return depth_(camera, sample); }
    double focus_lo(Eigen::Index camera, Eigen::Index sample) const { return focus_lo_(camera, sample); }
    double focus_hi(Eigen::Index camera, Eigen::Index sample) const { return focus_hi_(camera, sample); }

    bool in_focus(Eigen::Index camera, Eigen::Index sample, double s) const {
        return s >= focus_lo_(camera, sample) && s <= focus_hi_(camera, sample);
    }

    /// Pointwise cost of imaging `sample` with `camera` focused at s;
    /// exactly 1 for invisible pairs.
    double cost(Eigen::Index camera, Eigen::Index sample, double s) const {
        if (!visible(camera, sample)) return 1.0;
        return static_cost_(camera, sample) + params_.w3 * (in_focus(camera, sample, s) ? 0.0 : 1.0);
    }

    const CostParams& params() const { return params_; }
    const std::vector<CameraView>& cameras() const { return cameras_; }
    const std::vector<double>& sample_weights() const { return weights_; }
    const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>& visibility() const { return visible_; }

private:
    CostParams params_;
    std::vector<CameraView> cameras_;
    std::vector<double> weights_;
    Eigen::MatrixXd static_cost_;
    Eigen::MatrixXd depth_;
    Eigen::MatrixXd focus_lo_;
    Eigen::MatrixXd focus_hi_;
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> visible_;
};

}  // namespace focusplan
