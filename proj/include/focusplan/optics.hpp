#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>

namespace focusplan {

using Vec3 = Eigen::Vector3d;

/// Pinhole camera with thin-lens depth-of-field constants.
/// Defaults model a DSLR with a 50 mm lens and shallow depth of field
/// (hyperfocal length 10 m), portrait sensor with a 2:3 (W/H) aspect.
/// All distances in mm, image coordinates in pixels.
struct CameraIntrinsics {
    double focal_mm = 50.0;
    double hyperfocal_mm = 10000.0;
    int width_px = 4640;
    int height_px = 6960;
    double fx_px = 15625.0;
    double fy_px = 15625.0;
    double cx_px = 2320.0;
    double cy_px = 3480.0;

    void validate() const {
        if (focal_mm <= 0.0) throw std::invalid_argument("intrinsics: focal length must be > 0");
        if (hyperfocal_mm <= focal_mm) throw std::invalid_argument("intrinsics: hyperfocal must exceed focal length");
        if (width_px <= 0 || height_px <= 0) throw std::invalid_argument("intrinsics: image bounds must be positive");
        if (fx_px <= 0.0 || fy_px <= 0.0) throw std::invalid_argument("intrinsics: pixel focal lengths must be > 0");
    }
};

/// A posed camera. `direction` is the viewing direction (unit), `up` is a
/// unit vector orthogonal to it.
struct CameraView {
    Vec3 position = Vec3::Zero();
    Vec3 direction = Vec3::UnitX();
    Vec3 up = Vec3::UnitZ();
    CameraIntrinsics intrinsics;
    int id = 0;

    Vec3 right() const { return direction.cross(up); }

    void validate() const {
        constexpr double tol = 1e-9;
        if (std::abs(direction.norm() - 1.0) > tol) throw std::invalid_argument("camera: direction must be unit");
        if (std::abs(up.norm() - 1.0) > tol) throw std::invalid_argument("camera: up must be unit");
        if (std::abs(direction.dot(up)) > tol) throw std::invalid_argument("camera: up must be orthogonal to direction");
        intrinsics.validate();
    }
};

/// Weights and thresholds of the three-term pointwise cost.
/// eps1 scales the squared depth (mm^2) in the projected-area term,
/// eps2 (mm) thresholds the optical-axis deviation.
struct CostParams {
    double w1 = 1.0 / 3.0;
    double w2 = 1.0 / 3.0;
    double w3 = 1.0 / 3.0;
    double eps1 = 1e-6;
    double eps2 = 750.0;

    void validate() const {
        if (w1 < 0.0 || w2 < 0.0 || w3 < 0.0) throw std::invalid_argument("cost params: weights must be >= 0");
        if (eps1 <= 0.0 || eps2 <= 0.0) throw std::invalid_argument("cost params: thresholds must be > 0");
    }
};

/// Near/far depth-of-field limits for one focus distance. The far limit is
/// unbounded once the focus distance reaches the hyperfocal regime.
struct DofLimits {
    double near_mm = 0.0;
    std::optional<double> far_mm;  // nullopt = +infinity

    bool contains(double depth) const {
        return depth >= near_mm && (!far_mm || depth <= *far_mm);
    }
};

/// Closed range of focus distances [lo, hi] keeping a fixed depth inside the
/// depth of field. `hi == nullopt` means unbounded above. A depth at or below
/// the focal length admits no such focus distance; the interval is empty.
struct FocusInterval {
    double lo = 0.0;
    std::optional<double> hi;

    bool empty() const { return hi && *hi < lo; }
    bool contains(double s) const { return !empty() && s >= lo && (!hi || s <= *hi); }
};

/// Thin-lens depth-of-field limits at focus distance s:
///   near = H*s/(H+s-F),  far = H*s/(H-s+F)  (unbounded for s >= H+F).
inline DofLimits dof_limits(double s, const CameraIntrinsics& intr) {
    const double h = intr.hyperfocal_mm;
    const double f = intr.focal_mm;
    if (s <= f) throw std::invalid_argument("dof_limits: focus distance must exceed focal length");
    DofLimits lim;
    lim.near_mm = h * s / (h + s - f);
    const double denom = h - s + f;
    if (denom > 0.0) lim.far_mm = h * s / denom;
    return lim;
}

/// Inverse of dof_limits in the depth argument: the set of focus distances s
/// with near(s) <= d <= far(s). For d < H this is
/// [d(H+F)/(H+d), d(H-F)/(H-d)]; for d >= H the upper end is unbounded.
inline FocusInterval focus_interval_for_depth(double d, const CameraIntrinsics& intr) {
    const double h = intr.hyperfocal_mm;
    const double f = intr.focal_mm;
    if (d <= 0.0) throw std::invalid_argument("focus_interval_for_depth: depth must be > 0");
    FocusInterval iv;
    iv.lo = d * (h + f) / (h + d);
    if (d < h) iv.hi = d * (h - f) / (h - d);
    return iv;
}

/// Depth of a point along the camera's optical axis.
inline double depth_along_axis(const Vec3& p, const CameraView& cam) {
    return (p - cam.position).dot(cam.direction);
}

/// Pinhole projection. Returns false for points at or behind the camera
/// plane. Pixel coordinates use the stored principal point.
inline bool project_to_image(const Vec3& p, const CameraView& cam, double& u, double& v, double& depth) {
    const Vec3 d = p - cam.position;
    depth = d.dot(cam.direction);
    if (depth <= 0.0) return false;
    const double x = d.dot(cam.right());
    const double y = d.dot(cam.up);
    u = cam.intrinsics.cx_px + cam.intrinsics.fx_px * (x / depth);
    v = cam.intrinsics.cy_px + cam.intrinsics.fy_px * (y / depth);
    return true;
}

/// Image-bounds test with closed bounds: points exactly on the boundary
/// count as inside.
inline bool in_image_bounds(const CameraView& cam, double u, double v) {
    return u >= 0.0 && u <= static_cast<double>(cam.intrinsics.width_px) &&
           v >= 0.0 && v <= static_cast<double>(cam.intrinsics.height_px);
}

/// Membership in the view frustum clipped at the depth-of-field limits of
/// focus distance s.
inline bool in_frustum(const Vec3& p, const CameraView& cam, double s) {
    double u, v, depth;
    if (!project_to_image(p, cam, u, v, depth)) return false;
    if (!in_image_bounds(cam, u, v)) return false;
    return dof_limits(s, cam.intrinsics).contains(depth);
}

/// Three-term pointwise cost of imaging a surface point with camera `cam`
/// focused at distance s. Invisible points cost exactly 1. `inward_normal`
/// must point into the solid, so a front-facing visible point has
/// dot(direction, normal) > 0.
inline double pointwise_cost(const Vec3& p, const Vec3& inward_normal, const CameraView& cam,
                             double s, const CostParams& params, bool visible) {
    if (!visible) return 1.0;
    const Vec3 d = p - cam.position;
    const double depth = d.dot(cam.direction);
    const double facing = cam.direction.dot(inward_normal);
    if (facing <= 0.0)
        throw std::logic_error("pointwise_cost: back-facing point marked visible");
    const double area_term = std::min(params.eps1 * depth * depth / facing, 1.0);
    const double deviation = (d - depth * cam.direction).norm();
    const double deviation_term = std::min(deviation / params.eps2, 1.0);
    const double focus_term = in_frustum(p, cam, s) ? 0.0 : 1.0;
    return params.w1 * area_term + params.w2 * deviation_term + params.w3 * focus_term;
}

}  // namespace focusplan
