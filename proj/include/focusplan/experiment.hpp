#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "focusplan/grid.hpp"
#include "focusplan/solver.hpp"
#include "focusplan/synthetic.hpp"

namespace focusplan {

enum class ExperimentMode { Single, SamplingDensity, GridSweep, OverlapStudy, TupleSize };

ExperimentMode parse_mode(const std::string& name);
std::string mode_name(ExperimentMode mode);

/// One JSON document describes a whole experiment; every field has a
/// default, so {} is a valid config (capsule scene, 7x24 grid at 750 mm,
/// 1024 samples, all four methods).
struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::Single;

    // Scene: either a mesh file or a bundled generator.
    std::string mesh_file;
    double mesh_scale = 1.0;
    std::string generator = "capsule";
    double generator_radius = 150.0;
    double generator_height = 1700.0;
    int generator_resolution = 72;

    GridSpec grid;
    CameraIntrinsics intrinsics;
    CostParams cost;
    SolverConfig solver;
    std::string kview_init = "em";  // "em" or a baseline policy name

    int sample_count = 1024;
    std::uint64_t seed = 42;
    std::string output_dir = "out";
    bool record_timings = true;  // when false all wall-time columns are written as 0
    std::vector<std::string> methods = {"closest", "avg", "em", "kview"};

    // sampling-density mode
    std::vector<int> density_sample_counts = {128, 256, 512, 1024, 2048, 4096, 8192};
    int density_reseeds = 10;

    // grid-sweep mode
    std::vector<int> sweep_budgets = {60, 120, 240};
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

/// Mesh plus camera rig resolved from a config. The two_plane generator
/// carries its own two-camera rig; every other scene uses the cylindrical
/// grid.
struct Scene {
    TriangleMesh mesh;
    std::vector<CameraView> cameras;
    std::vector<std::pair<int, int>> edges;
    CameraGrid grid;
    bool has_grid = false;
};

Scene build_scene(const ExperimentConfig& config);

/// Pointwise cost of every sample under the plan (1 for unassigned samples).
std::vector<double> per_sample_costs(const FocusPlan& plan, const CostCache& cache);

/// Colored point cloud of per-sample costs: blue at 0, red at 1 (linear),
/// with the exact cost kept as a double property for lossless round-trips.
void export_cost_pointcloud(const std::vector<SurfaceSample>& samples,
                            const std::vector<double>& costs, const std::string& path);

/// Camera focus points: each camera position pushed along its viewing
/// direction by the focus distance (cameras without one are skipped).
void export_focus_cloud(const std::vector<CameraView>& cameras,
                        const std::vector<std::optional<double>>& focus, const std::string& path);

/// Runs the configured experiment, writing artifacts under output_dir, and
/// returns the report.json document. On failure a FAILED.txt marker with the
/// error text is left in the output directory and the error is rethrown.
nlohmann::json run_experiment(const ExperimentConfig& config);

}  // namespace focusplan
