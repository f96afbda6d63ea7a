#include "focusplan/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "focusplan/mesh_io.hpp"

namespace focusplan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("experiment: cannot open " + path + " for writing");
    return out;
}

InitPolicy parse_policy(const std::string& name) {
    if (name == "closest") return InitPolicy::Closest;
    if (name == "avg") return InitPolicy::Avg;
    if (name == "midrange") return InitPolicy::Midrange;
    throw std::invalid_argument("unknown init policy '" + name + "'");
}

std::string policy_name(InitPolicy policy) {
    switch (policy) {
        case InitPolicy::Closest: return "closest";
        case InitPolicy::Avg: return "avg";
        case InitPolicy::Midrange: return "midrange";
    }
    return "avg";
}

double sample_stddev(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double mean_minimize_ms(const SolveResult& result) {
    double total = 0.0;
    int n = 0;
    for (const auto& row : result.trace)
        if (row.phase == "minimize") {
            total += row.wall_ms;
            ++n;
        }
    return n > 0 ? total / n : 0.0;
}

}  // namespace

// ---------------------------------------------------------------- config ----

ExperimentMode parse_mode(const std::string& name) {
    if (name == "single") return ExperimentMode::Single;
    if (name == "sampling-density") return ExperimentMode::SamplingDensity;
    if (name == "grid-sweep") return ExperimentMode::GridSweep;
    if (name == "overlap-study") return ExperimentMode::OverlapStudy;
    if (name == "tuple-size") return ExperimentMode::TupleSize;
    throw std::invalid_argument("unknown experiment mode '" + name + "'");
}

std::string mode_name(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::Single: return "single";
        case ExperimentMode::SamplingDensity: return "sampling-density";
        case ExperimentMode::GridSweep: return "grid-sweep";
        case ExperimentMode::OverlapStudy: return "overlap-study";
        case ExperimentMode::TupleSize: return "tuple-size";
    }
    return "single";
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.mode = parse_mode(j.value("mode", "single"));
    if (j.contains("mesh")) {
        const auto& m = j.at("mesh");
        c.mesh_file = m.value("file", "");
        c.mesh_scale = m.value("scale", 1.0);
        c.generator = m.value("generator", c.mesh_file.empty() ? "capsule" : "");
        c.generator_radius = m.value("radius", 150.0);
        c.generator_height = m.value("height", 1700.0);
        c.generator_resolution = m.value("resolution", 72);
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.grid.angular = g.value("angular", 24);
        c.grid.vertical = g.value("vertical", 7);
        c.grid.radius = g.value("radius", 750.0);
        if (g.contains("z_extent") && g.at("z_extent").is_array()) {
            const auto& e = g.at("z_extent");
            c.grid.z_extent = std::make_pair(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    if (j.contains("intrinsics")) {
        const auto& i = j.at("intrinsics");
        c.intrinsics.focal_mm = i.value("focal_mm", c.intrinsics.focal_mm);
        c.intrinsics.hyperfocal_mm = i.value("hyperfocal_mm", c.intrinsics.hyperfocal_mm);
        c.intrinsics.width_px = i.value("width_px", c.intrinsics.width_px);
        c.intrinsics.height_px = i.value("height_px", c.intrinsics.height_px);
        c.intrinsics.fx_px = i.value("fx_px", c.intrinsics.fx_px);
        c.intrinsics.fy_px = i.value("fy_px", c.intrinsics.fy_px);
        c.intrinsics.cx_px = i.value("cx_px", c.intrinsics.cx_px);
        c.intrinsics.cy_px = i.value("cy_px", c.intrinsics.cy_px);
    }
    if (j.contains("cost")) {
        const auto& k = j.at("cost");
        c.cost.w1 = k.value("w1", c.cost.w1);
        c.cost.w2 = k.value("w2", c.cost.w2);
        c.cost.w3 = k.value("w3", c.cost.w3);
        c.cost.eps1 = k.value("eps1", c.cost.eps1);
        c.cost.eps2 = k.value("eps2", c.cost.eps2);
    }
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        c.solver.k = s.value("k", 2);
        c.solver.max_iterations = s.value("max_iterations", 50);
        c.solver.tolerance = s.value("tolerance", 1e-6);
        c.solver.init = parse_policy(s.value("init", "avg"));
        c.solver.ring = s.value("ring", 1);
        c.solver.reassign_between_batches = s.value("reassign_between_batches", false);
        c.kview_init = s.value("kview_init", "em");
    }
    c.sample_count = j.value("samples", 1024);
    c.seed = j.value("seed", std::uint64_t{42});
    c.output_dir = j.value("output_dir", "out");
    c.record_timings = j.value("record_timings", true);
    if (j.contains("methods")) c.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("density")) {
        const auto& d = j.at("density");
        if (d.contains("sample_counts")) c.density_sample_counts = d.at("sample_counts").get<std::vector<int>>();
        c.density_reseeds = d.value("reseeds", 10);
    }
    if (j.contains("sweep") && j.at("sweep").contains("budgets"))
        c.sweep_budgets = j.at("sweep").at("budgets").get<std::vector<int>>();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["mode"] = mode_name(c.mode);
    json mesh;
    if (!c.mesh_file.empty()) {
        mesh["file"] = c.mesh_file;
        mesh["scale"] = c.mesh_scale;
    } else {
        mesh["generator"] = c.generator;
        mesh["radius"] = c.generator_radius;
        mesh["height"] = c.generator_height;
        mesh["resolution"] = c.generator_resolution;
    }
    j["mesh"] = mesh;
    json grid;
    grid["angular"] = c.grid.angular;
    grid["vertical"] = c.grid.vertical;
    grid["radius"] = c.grid.radius;
    if (c.grid.z_extent) grid["z_extent"] = {c.grid.z_extent->first, c.grid.z_extent->second};
    else grid["z_extent"] = "auto";
    j["grid"] = grid;
    j["intrinsics"] = {{"focal_mm", c.intrinsics.focal_mm},     {"hyperfocal_mm", c.intrinsics.hyperfocal_mm},
                       {"width_px", c.intrinsics.width_px},     {"height_px", c.intrinsics.height_px},
                       {"fx_px", c.intrinsics.fx_px},           {"fy_px", c.intrinsics.fy_px},
                       {"cx_px", c.intrinsics.cx_px},           {"cy_px", c.intrinsics.cy_px}};
    j["cost"] = {{"w1", c.cost.w1}, {"w2", c.cost.w2}, {"w3", c.cost.w3},
                 {"eps1", c.cost.eps1}, {"eps2", c.cost.eps2}};
    j["solver"] = {{"k", c.solver.k},
                   {"max_iterations", c.solver.max_iterations},
                   {"tolerance", c.solver.tolerance},
                   {"init", policy_name(c.solver.init)},
                   {"ring", c.solver.ring},
                   {"reassign_between_batches", c.solver.reassign_between_batches},
                   {"kview_init", c.kview_init}};
    j["samples"] = c.sample_count;
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["record_timings"] = c.record_timings;
    j["methods"] = c.methods;
    j["density"] = {{"sample_counts", c.density_sample_counts}, {"reseeds", c.density_reseeds}};
    j["sweep"] = {{"budgets", c.sweep_budgets}};
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    json j;
    in >> j;
    return config_from_json(j);
}

// ----------------------------------------------------------------- scene ----

Scene build_scene(const ExperimentConfig& config) {
    Scene scene;
    if (!config.mesh_file.empty()) {
        scene.mesh = load_mesh(config.mesh_file, config.mesh_scale);
    } else if (config.generator == "capsule") {
        const int res = config.generator_resolution;
        scene.mesh = make_capsule(config.generator_radius, config.generator_height, res,
                                  std::max(4, res / 4), std::max(4, res / 3));
    } else if (config.generator == "sphere") {
        const double r = config.generator_radius;
        scene.mesh = make_sphere(Vec3(0, 0, r), r, std::max(8, config.generator_resolution / 2),
                                 config.generator_resolution);
    } else if (config.generator == "cylinder") {
        scene.mesh = make_cylinder(0, 0, config.generator_radius, 0.0, config.generator_height,
                                   config.generator_resolution, std::max(4, config.generator_resolution / 3));
    } else if (config.generator == "two_plane") {
        TwoPlaneScene two = make_two_plane_scene(config.intrinsics);
        scene.mesh = std::move(two.mesh);
        scene.cameras = std::move(two.cameras);
        scene.edges = std::move(two.edges);
        return scene;
    } else {
        throw std::invalid_argument("unknown generator '" + config.generator + "'");
    }
    scene.grid = generate_cylindrical_grid(config.grid, scene.mesh, config.intrinsics);
    scene.cameras = scene.grid.cameras;
    scene.edges = config.solver.ring == 1 ? scene.grid.edges : ring_adjacency(scene.grid, config.solver.ring);
    scene.has_grid = true;
    return scene;
}

// --------------------------------------------------------------- exports ----

std::vector<double> per_sample_costs(const FocusPlan& plan, const CostCache& cache) {
    std::vector<double> costs(static_cast<size_t>(cache.sample_count()), 1.0);
    for (Eigen::Index p = 0; p < cache.sample_count(); ++p) {
        const int c = plan.assignment[static_cast<size_t>(p)];
        if (c == kUnassigned) continue;
        costs[static_cast<size_t>(p)] = cache.cost(c, p, *plan.focus[static_cast<size_t>(c)]);
    }
    return costs;
}

void export_cost_pointcloud(const std::vector<SurfaceSample>& samples,
                            const std::vector<double>& costs, const std::string& path) {
    if (samples.size() != costs.size())
        throw std::invalid_argument("export_cost_pointcloud: size mismatch");
    Eigen::MatrixX3d positions(static_cast<Eigen::Index>(samples.size()), 3);
    PlyProperty red{"red", PlyProperty::Type::Uint8, {}};
    PlyProperty green{"green", PlyProperty::Type::Uint8, {}};
    PlyProperty blue{"blue", PlyProperty::Type::Uint8, {}};
    PlyProperty cost{"cost", PlyProperty::Type::Float64, {}};
    for (size_t i = 0; i < samples.size(); ++i) {
        positions.row(static_cast<Eigen::Index>(i)) = samples[i].position;
        const double c = costs[i];
        if (c < 0.0 || c > 1.0)
            throw std::invalid_argument("export_cost_pointcloud: cost outside [0,1]");
        red.values.push_back(std::round(255.0 * c));
        green.values.push_back(0.0);
        blue.values.push_back(std::round(255.0 * (1.0 - c)));
        cost.values.push_back(c);
    }
    write_ply_pointcloud(path, positions, {red, green, blue, cost});
}

void export_focus_cloud(const std::vector<CameraView>& cameras,
                        const std::vector<std::optional<double>>& focus, const std::string& path) {
    std::vector<Vec3> points;
    PlyProperty red{"red", PlyProperty::Type::Uint8, {}};
    PlyProperty green{"green", PlyProperty::Type::Uint8, {}};
    PlyProperty blue{"blue", PlyProperty::Type::Uint8, {}};
    PlyProperty dist{"focus_mm", PlyProperty::Type::Float64, {}};
    PlyProperty cam{"camera", PlyProperty::Type::Float64, {}};
    for (size_t c = 0; c < cameras.size(); ++c) {
        if (!focus[c]) continue;
        points.push_back(cameras[c].position + *focus[c] * cameras[c].direction);
        red.values.push_back(0.0);
        green.values.push_back(0.0);
        blue.values.push_back(0.0);
        dist.values.push_back(*focus[c]);
        cam.values.push_back(static_cast<double>(cameras[c].id));
    }
    Eigen::MatrixX3d positions(static_cast<Eigen::Index>(points.size()), 3);
    for (size_t i = 0; i < points.size(); ++i) positions.row(static_cast<Eigen::Index>(i)) = points[i];
    write_ply_pointcloud(path, positions, {red, green, blue, dist, cam});
}

// ----------------------------------------------------------------- modes ----

namespace {

struct MethodRun {
    std::string method;
    FocusPlan plan;
    CostReport report;
    std::vector<TraceRow> trace;
    double wall_ms = 0.0;
    int iterations = 0;
};

MethodRun run_method(const std::string& method, const ExperimentConfig& config, const CostCache& cache,
                     const std::vector<std::pair<int, int>>& edges) {
    MethodRun run;
    run.method = method;
    const auto t0 = std::chrono::steady_clock::now();
    if (method == "closest" || method == "avg" || method == "midrange") {
        FocusPlan plan = make_initial_plan(cache, parse_policy(method));
        plan.assignment = assign_step(plan.focus, cache);
        run.plan = std::move(plan);
    } else if (method == "em") {
        SolveResult res = em_optimize(cache, config.solver);
        run.plan = std::move(res.plan);
        run.trace = std::move(res.trace);
        run.iterations = res.iterations;
    } else if (method == "kview") {
        FocusPlan initial;
        if (config.kview_init == "em") {
            initial = em_optimize(cache, config.solver).plan;
        } else {
            initial = make_initial_plan(cache, parse_policy(config.kview_init));
        }
        SolveResult res = kview_optimize(cache, edges, config.solver, std::move(initial));
        run.plan = std::move(res.plan);
        run.trace = std::move(res.trace);
        run.iterations = res.iterations;
    } else {
        throw std::invalid_argument("unknown method '" + method + "'");
    }
    run.wall_ms = ms_since(t0);
    run.report = total_cost(run.plan, cache);
    return run;
}

void write_report_csv(const std::string& path, const std::vector<MethodRun>& runs, Eigen::Index cameras,
                      bool timings) {
    auto out = open_out(path);
    out << "method,samples,cameras,total_cost,mean_cost,in_focus_area_mm2,wall_ms\n";
    for (const auto& r : runs)
        out << r.method << "," << r.report.sample_count << "," << cameras << "," << fmt(r.report.total)
            << "," << fmt(r.report.mean) << "," << fmt(r.report.in_focus_area_mm2) << ","
            << fmt(timings ? r.wall_ms : 0.0) << "\n";
}

void write_trace_csv(const std::string& path, const std::vector<MethodRun>& runs, bool timings) {
    auto out = open_out(path);
    out << "method,iteration,phase,total_cost,wall_ms\n";
    for (const auto& r : runs)
        for (const auto& row : r.trace)
            out << r.method << "," << row.iteration << "," << row.phase << "," << fmt(row.total_cost)
                << "," << fmt(timings ? row.wall_ms : 0.0) << "\n";
}

json run_single(const ExperimentConfig& config, const Scene& scene, const fs::path& dir) {
    const auto samples = sample_surface(scene.mesh, config.sample_count, config.seed);
    const VisibilityTable visibility = build_visibility(scene.mesh, samples, scene.cameras);
    save_visibility(visibility, (dir / "visibility.bin").string(), (dir / "visibility.json").string(),
                    config.seed);
    const CostCache cache = CostCache::build(samples, scene.cameras, config.cost, visibility);
    const double bound = lower_bound(cache);

    std::vector<MethodRun> runs;
    for (const auto& method : config.methods)
        runs.push_back(run_method(method, config, cache, scene.edges));

    write_report_csv((dir / "report.csv").string(), runs, cache.camera_count(), config.record_timings);
    write_trace_csv((dir / "trace.csv").string(), runs, config.record_timings);
    for (const auto& r : runs) {
        export_cost_pointcloud(samples, per_sample_costs(r.plan, cache),
                               (dir / ("cost_" + r.method + ".ply")).string());
        export_focus_cloud(scene.cameras, r.plan.focus, (dir / ("cameras_" + r.method + ".ply")).string());
    }

    json report;
    report["mode"] = "single";
    report["samples"] = config.sample_count;
    report["cameras"] = scene.cameras.size();
    report["seed"] = config.seed;
    report["lower_bound"] = bound;
    report["results"] = json::array();
    for (const auto& r : runs) {
        json entry;
        entry["method"] = r.method;
        entry["total_cost"] = r.report.total;
        entry["mean_cost"] = r.report.mean;
        entry["in_focus_area_mm2"] = r.report.in_focus_area_mm2;
        entry["unassigned_cost"] = r.report.unassigned;
        entry["iterations"] = r.iterations;
        entry["wall_ms"] = config.record_timings ? r.wall_ms : 0.0;
        report["results"].push_back(entry);
    }
    return report;
}

json run_sampling_density(const ExperimentConfig& config, const Scene& scene, const fs::path& dir) {
    const Bvh bvh(scene.mesh);
    auto raw = open_out((dir / "density_raw.csv").string());
    raw << "samples,seed,total_cost,iterations,mean_iter_ms\n";
    auto summary = open_out((dir / "density.csv").string());
    summary << "samples,reseeds,sigma,mean_total,mean_iter_ms\n";

    json report;
    report["mode"] = "sampling-density";
    report["rows"] = json::array();
    for (int n : config.density_sample_counts) {
        std::vector<double> totals;
        std::vector<double> iter_ms;
        for (int i = 0; i < config.density_reseeds; ++i) {
            const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
            const auto samples = sample_surface(scene.mesh, n, seed);
            const VisibilityTable visibility = build_visibility(bvh, samples, scene.cameras);
            const CostCache cache = CostCache::build(samples, scene.cameras, config.cost, visibility);
            FocusPlan initial = config.kview_init == "em"
                                    ? em_optimize(cache, config.solver).plan
                                    : make_initial_plan(cache, parse_policy(config.kview_init));
            SolveResult res = kview_optimize(cache, scene.edges, config.solver, std::move(initial));
            totals.push_back(res.report.total);
            iter_ms.push_back(mean_minimize_ms(res));
            raw << n << "," << seed << "," << fmt(res.report.total) << "," << res.iterations << ","
                << fmt(config.record_timings ? iter_ms.back() : 0.0) << "\n";
        }
        const double sigma = sample_stddev(totals);
        const double mean_total =
            std::accumulate(totals.begin(), totals.end(), 0.0) / static_cast<double>(totals.size());
        const double mean_ms =
            std::accumulate(iter_ms.begin(), iter_ms.end(), 0.0) / static_cast<double>(iter_ms.size());
        summary << n << "," << config.density_reseeds << "," << fmt(sigma) << "," << fmt(mean_total)
                << "," << fmt(config.record_timings ? mean_ms : 0.0) << "\n";
        report["rows"].push_back({{"samples", n},
                                  {"sigma", sigma},
                                  {"mean_total", mean_total},
                                  {"mean_iter_ms", config.record_timings ? mean_ms : 0.0}});
    }
    return report;
}

json run_grid_sweep(const ExperimentConfig& config, const Scene& scene, const fs::path& dir) {
    if (!scene.has_grid) throw std::invalid_argument("grid-sweep requires a grid scene");
    const Bvh bvh(scene.mesh);
    const auto samples = sample_surface(scene.mesh, config.sample_count, config.seed);

    auto out = open_out((dir / "gridsweep.csv").string());
    out << "budget,angular,vertical,aspect_ratio,method,total_cost\n";

    json report;
    report["mode"] = "grid-sweep";
    report["rows"] = json::array();
    for (int budget : config.sweep_budgets) {
        for (int z = 2; z <= budget / 4; ++z) {
            if (budget % z != 0) continue;
            const int a = budget / z;
            if (a < 4) continue;
            GridSpec spec = config.grid;
            spec.angular = a;
            spec.vertical = z;
            const CameraGrid grid = generate_cylindrical_grid(spec, scene.mesh, config.intrinsics);
            const VisibilityTable visibility = build_visibility(bvh, samples, grid.cameras);
            const CostCache cache = CostCache::build(samples, grid.cameras, config.cost, visibility);
            const double dz = (grid.z_max - grid.z_min) / static_cast<double>(z - 1);
            const double da = 2.0 * M_PI * spec.radius / static_cast<double>(a);
            const double aspect = dz / da;

            const auto edges =
                config.solver.ring == 1 ? grid.edges : ring_adjacency(grid, config.solver.ring);
            SolveResult em = em_optimize(cache, config.solver);
            SolveResult kv = kview_optimize(cache, edges, config.solver, em.plan);
            for (const auto& [method, total] :
                 {std::make_pair(std::string("em"), em.report.total),
                  std::make_pair(std::string("kview"), kv.report.total)}) {
                out << budget << "," << a << "," << z << "," << fmt(aspect) << "," << method << ","
                    << fmt(total) << "\n";
                report["rows"].push_back({{"budget", budget},
                                          {"angular", a},
                                          {"vertical", z},
                                          {"aspect_ratio", aspect},
                                          {"method", method},
                                          {"total_cost", total}});
            }
        }
    }
    return report;
}

json run_overlap_study(const ExperimentConfig& config, const Scene& scene, const fs::path& dir) {
    const auto samples = sample_surface(scene.mesh, config.sample_count, config.seed);
    const VisibilityTable visibility = build_visibility(scene.mesh, samples, scene.cameras);
    const CostCache cache = CostCache::build(samples, scene.cameras, config.cost, visibility);
    const SolveResult em = em_optimize(cache, config.solver);

    auto out = open_out((dir / "overlap.csv").string());
    out << "cam_a,cam_b,overlap,cost_before,cost_after,decrease\n";

    json report;
    report["mode"] = "overlap-study";
    report["rows"] = json::array();
    for (const auto& [u, v] : scene.edges) {
        const CameraTuple tuple{{std::min(u, v), std::max(u, v)}};
        FocusPlan plan = em.plan;
        const KviewStepResult step = kview_step(cache, tuple, plan);
        const double overlap = measure_overlap(tuple, cache);
        out << tuple.cameras[0] << "," << tuple.cameras[1] << "," << fmt(overlap) << ","
            << fmt(step.cost_before) << "," << fmt(step.cost_after) << ","
            << fmt(step.cost_before - step.cost_after) << "\n";
        report["rows"].push_back({{"cam_a", tuple.cameras[0]},
                                  {"cam_b", tuple.cameras[1]},
                                  {"overlap", overlap},
                                  {"decrease", step.cost_before - step.cost_after}});
    }
    return report;
}

json run_tuple_size(const ExperimentConfig& config, const Scene& scene, const fs::path& dir) {
    const auto samples = sample_surface(scene.mesh, config.sample_count, config.seed);
    const VisibilityTable visibility = build_visibility(scene.mesh, samples, scene.cameras);
    const CostCache cache = CostCache::build(samples, scene.cameras, config.cost, visibility);

    const SolveResult em = em_optimize(cache, config.solver);
    SolverConfig cfg2 = config.solver;
    cfg2.k = 2;
    SolverConfig cfg3 = config.solver;
    cfg3.k = 3;
    const SolveResult k2 = kview_optimize(cache, scene.edges, cfg2, em.plan);
    const SolveResult k3 = kview_optimize(cache, scene.edges, cfg3, em.plan);

    auto out = open_out((dir / "tuplesize.csv").string());
    out << "method,total_cost,iterations,mean_iter_ms\n";
    json report;
    report["mode"] = "tuple-size";
    report["rows"] = json::array();
    for (const auto& [name, res] : {std::make_pair(std::string("em"), &em),
                                    std::make_pair(std::string("k2"), &k2),
                                    std::make_pair(std::string("k3"), &k3)}) {
        const double iter_ms = config.record_timings ? mean_minimize_ms(*res) : 0.0;
        out << name << "," << fmt(res->report.total) << "," << res->iterations << "," << fmt(iter_ms)
            << "\n";
        report["rows"].push_back({{"method", name},
                                  {"total_cost", res->report.total},
                                  {"iterations", res->iterations},
                                  {"mean_iter_ms", iter_ms}});
    }
    return report;
}

}  // namespace

json run_experiment(const ExperimentConfig& config) {
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    try {
        {
            auto out = open_out((dir / "config.json").string());
            out << config_to_json(config).dump(2) << "\n";
        }
        const Scene scene = build_scene(config);
        json report;
        switch (config.mode) {
            case ExperimentMode::Single: report = run_single(config, scene, dir); break;
            case ExperimentMode::SamplingDensity: report = run_sampling_density(config, scene, dir); break;
            case ExperimentMode::GridSweep: report = run_grid_sweep(config, scene, dir); break;
            case ExperimentMode::OverlapStudy: report = run_overlap_study(config, scene, dir); break;
            case ExperimentMode::TupleSize: report = run_tuple_size(config, scene, dir); break;
        }
        auto out = open_out((dir / "report.json").string());
        out << report.dump(2) << "\n";
        return report;
    } catch (const std::exception& e) {
        auto marker = open_out((dir / "FAILED.txt").string());
        marker << e.what() << "\n";
        throw;
    }
}

}  // namespace focusplan
