#include "focusplan/visibility.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace focusplan {

namespace {

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint8_t byte : data) {
        h ^= byte;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<std::uint8_t> pack_bits(const VisibilityTable& table) {
    const Eigen::Index cams = table.camera_count();
    const Eigen::Index samples = table.sample_count();
    const size_t row_bytes = static_cast<size_t>((samples + 7) / 8);
    std::vector<std::uint8_t> bytes(row_bytes * static_cast<size_t>(cams), 0);
    for (Eigen::Index c = 0; c < cams; ++c)
        for (Eigen::Index p = 0; p < samples; ++p)
            if (table.visible(c, p))
                bytes[static_cast<size_t>(c) * row_bytes + static_cast<size_t>(p / 8)] |=
                    static_cast<std::uint8_t>(1u << (p % 8));
    return bytes;
}

}  // namespace

std::vector<int> VisibilityTable::samples_seen() const {
    std::vector<int> seen(static_cast<size_t>(camera_count()), 0);
    for (Eigen::Index c = 0; c < camera_count(); ++c)
        for (Eigen::Index p = 0; p < sample_count(); ++p)
            if (visible(c, p)) ++seen[static_cast<size_t>(c)];
    return seen;
}

bool sample_visible(const Bvh& bvh, const SurfaceSample& sample, const CameraView& camera) {
    double u, v, depth;
    if (!project_to_image(sample.position, camera, u, v, depth)) return false;
    if (!in_image_bounds(camera, u, v)) return false;
    if (camera.direction.dot(sample.normal) <= 0.0) return false;
    const Vec3 dir = sample.position - camera.position;
    const double dist = dir.norm();
    if (dist <= kOcclusionOffsetMm) return true;
    const double t_max = 1.0 - kOcclusionOffsetMm / dist;
    return !bvh.any_hit(camera.position, dir, 1e-7, t_max);
}

VisibilityTable build_visibility(const Bvh& bvh, const std::vector<SurfaceSample>& samples,
                                 const std::vector<CameraView>& cameras) {
    if (samples.empty() || cameras.empty())
        throw std::invalid_argument("build_visibility: samples and cameras must be non-empty");
    VisibilityTable table;
    table.visible.setZero(static_cast<Eigen::Index>(cameras.size()),
                          static_cast<Eigen::Index>(samples.size()));
    for (size_t c = 0; c < cameras.size(); ++c)
        for (size_t p = 0; p < samples.size(); ++p)
            table.visible(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(p)) =
                sample_visible(bvh, samples[p], cameras[c]) ? 1 : 0;
    return table;
}

VisibilityTable build_visibility(const TriangleMesh& mesh, const std::vector<SurfaceSample>& samples,
                                 const std::vector<CameraView>& cameras) {
    const Bvh bvh(mesh);
    return build_visibility(bvh, samples, cameras);
}

void save_visibility(const VisibilityTable& table, const std::string& bin_path,
                     const std::string& json_path, std::uint64_t seed) {
    const auto bytes = pack_bits(table);
    {
        std::ofstream out(bin_path, std::ios::binary);
        if (!out) throw std::runtime_error("save_visibility: cannot open " + bin_path);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("save_visibility: write failure on " + bin_path);
    }
    nlohmann::json meta;
    meta["cameras"] = table.camera_count();
    meta["samples"] = table.sample_count();
    meta["row_bytes"] = (table.sample_count() + 7) / 8;
    meta["seed"] = seed;
    {
        std::ostringstream hex;
        hex << std::hex << fnv1a64(bytes);
        meta["checksum_fnv1a64"] = hex.str();
    }
    std::ofstream out(json_path);
    if (!out) throw std::runtime_error("save_visibility: cannot open " + json_path);
    out << meta.dump(2) << "\n";
}

VisibilityTable load_visibility(const std::string& bin_path, const std::string& json_path) {
    nlohmann::json meta;
    {
        std::ifstream in(json_path);
        if (!in) throw std::runtime_error("load_visibility: cannot open " + json_path);
        in >> meta;
    }
    const Eigen::Index cams = meta.at("cameras").get<Eigen::Index>();
    const Eigen::Index samples = meta.at("samples").get<Eigen::Index>();
    const size_t row_bytes = meta.at("row_bytes").get<size_t>();
    if (row_bytes != static_cast<size_t>((samples + 7) / 8))
        throw std::runtime_error("load_visibility: inconsistent row_bytes");

    std::ifstream in(bin_path, std::ios::binary);
    if (!in) throw std::runtime_error("load_visibility: cannot open " + bin_path);
    std::vector<std::uint8_t> bytes(row_bytes * static_cast<size_t>(cams));
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<size_t>(in.gcount()) != bytes.size())
        throw std::runtime_error("load_visibility: truncated bitmap");

    std::ostringstream hex;
    hex << std::hex << fnv1a64(bytes);
    if (meta.contains("checksum_fnv1a64") && meta["checksum_fnv1a64"].get<std::string>() != hex.str())
        throw std::runtime_error("load_visibility: checksum mismatch");

    VisibilityTable table;
    table.visible.setZero(cams, samples);
    for (Eigen::Index c = 0; c < cams; ++c)
        for (Eigen::Index p = 0; p < samples; ++p)
            table.visible(c, p) =
                (bytes[static_cast<size_t>(c) * row_bytes + static_cast<size_t>(p / 8)] >> (p % 8)) & 1u;
    return table;
}

}  // namespace focusplan
