#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "focusplan/bvh.hpp"
#include "focusplan/optics.hpp"
#include "focusplan/sampling.hpp"

namespace focusplan {

/// Offset (mm) by which occlusion rays stop short of the sample, keeping the
/// sample's own triangle out of the test.
inline constexpr double kOcclusionOffsetMm = 1e-3;

/// Boolean (camera, sample) table: true iff the sample lies inside the
/// camera's lateral frustum, faces it, and is unoccluded. Focus-independent.
struct VisibilityTable {
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> visible;  // cameras x samples

    Eigen::Index camera_count() const { return visible.rows(); }
    Eigen::Index sample_count() const { return visible.cols(); }
    bool is_visible(Eigen::Index camera, Eigen::Index sample) const {
        return visible(camera, sample) != 0;
    }

    /// Number of visible samples per camera (cameras seeing none are legal).
    std::vector<int> samples_seen() const;
};

/// Single-pair predicate used by the table builder: (a) projects inside the
/// image bounds, (b) front-facing under the inward-normal convention,
/// (c) the camera-to-sample segment, shortened by the occlusion offset,
/// hits no mesh triangle.
bool sample_visible(const Bvh& bvh, const SurfaceSample& sample, const CameraView& camera);

VisibilityTable build_visibility(const TriangleMesh& mesh, const std::vector<SurfaceSample>& samples,
                                 const std::vector<CameraView>& cameras);

VisibilityTable build_visibility(const Bvh& bvh, const std::vector<SurfaceSample>& samples,
                                 const std::vector<CameraView>& cameras);

/// Cache format: packed row-major bitmap (one row per camera, 8 samples per
/// byte) plus a JSON sidecar carrying dimensions, the sampling seed and an
/// FNV-1a checksum of the bitmap.
void save_visibility(const VisibilityTable& table, const std::string& bin_path,
                     const std::string& json_path, std::uint64_t seed);

VisibilityTable load_visibility(const std::string& bin_path, const std::string& json_path);

}  // namespace focusplan
