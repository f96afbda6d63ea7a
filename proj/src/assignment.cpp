#include "focusplan/assignment.hpp"

#include <stdexcept>

namespace focusplan {

CostReport total_cost(const FocusPlan& plan, const CostCache& cache) {
    const Eigen::Index cams = cache.camera_count();
    const Eigen::Index n = cache.sample_count();
    if (static_cast<Eigen::Index>(plan.assignment.size()) != n)
        throw std::invalid_argument("total_cost: assignment size mismatch");

    CostReport report;
    report.sample_count = static_cast<int>(n);
    report.per_camera.assign(static_cast<size_t>(cams), 0.0);
    for (Eigen::Index p = 0; p < n; ++p) {
        const int c = plan.assignment[static_cast<size_t>(p)];
        if (c == kUnassigned) {
            report.unassigned += 1.0;
            report.total += 1.0;
            continue;
        }
        if (c < 0 || c >= cams) throw std::invalid_argument("total_cost: plan references unknown camera id");
        const auto& focus = plan.focus[static_cast<size_t>(c)];
        if (!focus) throw std::logic_error("total_cost: sample assigned to a camera without focus");
        const double kappa = cache.cost(c, p, *focus);
        report.per_camera[static_cast<size_t>(c)] += kappa;
        report.total += kappa;
        if (cache.visible(c, p) && cache.in_focus(c, p, *focus))
            report.in_focus_area_mm2 += cache.sample_weights()[static_cast<size_t>(p)];
    }
    report.mean = n > 0 ? report.total / static_cast<double>(n) : 0.0;
    return report;
}

std::vector<int> assign_step(const std::vector<std::optional<double>>& focus, const CostCache& cache) {
    const Eigen::Index cams = cache.camera_count();
    const Eigen::Index n = cache.sample_count();
    if (static_cast<Eigen::Index>(focus.size()) != cams)
        throw std::invalid_argument("assign_step: focus size mismatch");

    std::vector<int> assignment(static_cast<size_t>(n), kUnassigned);
    for (Eigen::Index p = 0; p < n; ++p) {
        double best = std::numeric_limits<double>::infinity();
        int best_cam = kUnassigned;
        for (Eigen::Index c = 0; c < cams; ++c) {
            if (!cache.visible(c, p) || !focus[static_cast<size_t>(c)]) continue;
            const double kappa = cache.cost(c, p, *focus[static_cast<size_t>(c)]);
            if (kappa < best) {
                best = kappa;
                best_cam = static_cast<int>(c);
            }
        }
        assignment[static_cast<size_t>(p)] = best_cam;
    }
    return assignment;
}

double lower_bound(const CostCache& cache) {
    double bound = 0.0;
    for (Eigen::Index p = 0; p < cache.sample_count(); ++p) {
        double best = 1.0;
        for (Eigen::Index c = 0; c < cache.camera_count(); ++c)
            if (cache.visible(c, p)) best = std::min(best, cache.static_cost(c, p));
        bound += best;
    }
    return bound;
}

}  // namespace focusplan
