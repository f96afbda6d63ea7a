#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "focusplan/assignment.hpp"

namespace focusplan {

/// Subdivision of the focus-distance axis (starting at the focal length)
/// into cells on which the in-frustum indicator of every generating sample
/// is constant. Cell i spans (edge(i), edge(i+1)) with edge(0) = domain_min
/// and the last cell unbounded above.
struct BreakpointPartition {
    double domain_min = 0.0;           // focal length of the generating camera
    double unbounded_cap = 0.0;        // hyperfocal + focal, caps the last cell's representative
    std::vector<double> breakpoints;   // strictly increasing, all > domain_min
    std::vector<int> counts;           // in-frustum count per cell, size breakpoints+1

    size_t cell_count() const { return breakpoints.size() + 1; }

    double lower_edge(size_t cell) const { return cell == 0 ? domain_min : breakpoints[cell - 1]; }

    /// Interior point of the cell: the midpoint for bounded cells; for the
    /// unbounded last cell twice the lower edge, capped at hyperfocal+focal
    /// whenever the cap still lies inside the cell.
    double representative(size_t cell) const;

    /// Cell with the maximal count; ties break to the smallest lower edge.
    size_t max_count_cell() const;
};

/// Partition generated by the focus intervals of the given depths.
BreakpointPartition build_partition(const CameraIntrinsics& intr, std::span<const double> depths);

/// Partition for one camera over a sample subset; samples invisible to the
/// camera are ignored.
BreakpointPartition build_partition(const CostCache& cache, int camera, std::span<const int> sample_ids);

/// Single-view baselines over the camera's visible point set. Unset when the
/// camera sees nothing. Results are clamped above the focal length.
std::optional<double> baseline_closest(const CostCache& cache, int camera);
std::optional<double> baseline_avg(const CostCache& cache, int camera);
std::optional<double> baseline_midrange(const CostCache& cache, int camera);

/// Exact single-view optimum: the representative of the partition cell with
/// the maximal in-frustum count over the given depths. Unset for no depths.
std::optional<double> optimal_focus_single(const CameraIntrinsics& intr, std::span<const double> depths);
std::optional<double> optimal_focus_single(const CostCache& cache, int camera, std::span<const int> sample_ids);

/// k distinct camera ids in ascending order.
struct CameraTuple {
    std::vector<int> cameras;
};

/// Partitions the tuples into batches sharing no camera. k=2 covers every
/// adjacency edge exactly once per full pass (greedy proper edge coloring);
/// k=3 forms all two-edge paths of the adjacency graph; k=1 yields one batch
/// of per-camera singletons.
std::vector<std::vector<CameraTuple>> independent_tuple_schedule(
    int camera_count, const std::vector<std::pair<int, int>>& edges, int k);

enum class InitPolicy { Closest, Avg, Midrange };

struct SolverConfig {
    int k = 2;
    int max_iterations = 50;
    double tolerance = 1e-6;  // stop once the relative cost decrease falls below
    InitPolicy init = InitPolicy::Avg;
    int ring = 1;
    bool reassign_between_batches = false;  // global assignment after each batch, not only each pass
};

struct TraceRow {
    int iteration = 0;
    std::string phase;  // "assign" or "minimize"
    double total_cost = 0.0;
    double wall_ms = 0.0;
};

struct SolveResult {
    FocusPlan plan;
    std::vector<TraceRow> trace;
    CostReport report;
    int iterations = 0;
};

/// Focus distances from a single-view baseline, assignment left empty.
FocusPlan make_initial_plan(const CostCache& cache, InitPolicy policy);

struct KviewStepResult {
    bool improved = false;
    double cost_before = 0.0;  // tuple-restricted cost under the incoming plan
    double cost_after = 0.0;
};

/// Joint focus/assignment update for one camera tuple: enumerates the cells
/// of the Cartesian product of the per-camera partitions built from the
/// samples currently assigned to the tuple, evaluates the optimal
/// within-tuple re-assignment at each cell's representative distances, and
/// commits the best candidate. Never increases the tuple-restricted cost.
KviewStepResult kview_step(const CostCache& cache, const CameraTuple& tuple, FocusPlan& plan);

/// Expectation-minimization: alternates the global assignment step with
/// exact per-camera focus updates (the k=1 partition sweep) until the
/// relative cost decrease drops below tolerance.
SolveResult em_optimize(const CostCache& cache, const SolverConfig& config);

/// k-view optimization from an initial plan (a baseline or an EM result):
/// each iteration applies kview_step over every batch of the tuple schedule,
/// then re-assigns globally. With k=1 this reduces to em_optimize.
SolveResult kview_optimize(const CostCache& cache, const std::vector<std::pair<int, int>>& edges,
                           const SolverConfig& config, FocusPlan initial);

/// |samples visible to all tuple cameras| / |samples visible to any|.
double measure_overlap(const CameraTuple& tuple, const VisibilityTable& visibility);
double measure_overlap(const CameraTuple& tuple, const CostCache& cache);

}  // namespace focusplan
