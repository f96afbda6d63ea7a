#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "focusplan/mesh.hpp"

namespace focusplan {

/// Area-measure point on the surface. `normal` is unit and inward-pointing,
/// `weight` (mm^2) is the Monte-Carlo area share of the sample.
struct SurfaceSample {
    Vec3 position = Vec3::Zero();
    Vec3 normal = Vec3::UnitX();
    double weight = 0.0;
    int source_triangle = -1;
};

/// Uniform double in [0, 1) from the top 53 bits of the generator. Written
/// out explicitly so sampling streams are identical across standard-library
/// implementations.
inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Area-proportional surface sampling: the triangle is drawn from the
/// area-weighted discrete distribution, the point uniformly inside it.
/// Output order is the generation order; a fixed seed reproduces the exact
/// sample list. Each sample carries weight total_area/count.
std::vector<SurfaceSample> sample_surface(const TriangleMesh& mesh, int count, std::uint64_t seed);

}  // namespace focusplan
