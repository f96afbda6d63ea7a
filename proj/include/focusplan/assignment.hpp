#pragma once

#include <optional>
#include <vector>

#include "focusplan/cost_cache.hpp"

namespace focusplan {

inline constexpr int kUnassigned = -1;

/// Per-camera focus distances plus the per-sample camera assignment.
/// Cameras that see nothing may stay unset; samples visible to no camera
/// stay unassigned and cost exactly 1.
struct FocusPlan {
    std::vector<std::optional<double>> focus;
    std::vector<int> assignment;

    bool has_assignment() const { return !assignment.empty(); }
};

struct CostReport {
    double total = 0.0;
    double mean = 0.0;
    std::vector<double> per_camera;  // subtotal of samples assigned to each camera
    double unassigned = 0.0;         // contribution of unassigned samples (1 each)
    double in_focus_area_mm2 = 0.0;  // sum of weights of assigned, in-focus samples
    int sample_count = 0;
};

/// Monte-Carlo total of the assigned pointwise costs; unassigned samples
/// count 1 each.
CostReport total_cost(const FocusPlan& plan, const CostCache& cache);

/// Greedy per-sample assignment: the cost-minimizing camera among those that
/// see the sample and have a set focus distance, ties to the lowest id;
/// unassigned when no such camera exists.
std::vector<int> assign_step(const std::vector<std::optional<double>>& focus, const CostCache& cache);

/// Conservative lower bound: per-sample minimum of the focus-independent
/// cost terms over all seeing cameras (samples seen by nobody still cost 1).
double lower_bound(const CostCache& cache);

}  // namespace focusplan
