#include "focusplan/solver.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstring>
#include <set>
#include <stdexcept>

namespace focusplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ms_between(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

}  // namespace

// ------------------------------------------------------------ partition ----

double BreakpointPartition::representative(size_t cell) const {
    if (cell + 1 < cell_count())
        return 0.5 * (lower_edge(cell) + breakpoints[cell]);
    const double b = lower_edge(cell);
    // Any interior point of the unbounded cell is equivalent; cap at
    // hyperfocal+focal while the cap still lies inside the cell.
    return b < unbounded_cap ? std::min(2.0 * b, unbounded_cap) : 2.0 * b;
}

size_t BreakpointPartition::max_count_cell() const {
    size_t best = 0;
    for (size_t i = 1; i < counts.size(); ++i)
        if (counts[i] > counts[best]) best = i;
    return best;
}

namespace {

BreakpointPartition partition_from_intervals(double domain_min, double cap,
                                             const std::vector<std::pair<double, double>>& intervals) {
    BreakpointPartition part;
    part.domain_min = domain_min;
    part.unbounded_cap = cap;

    std::vector<double> los, his;
    los.reserve(intervals.size());
    his.reserve(intervals.size());
    std::vector<double> edges;
    for (const auto& [lo, hi] : intervals) {
        if (hi < lo) continue;  // empty: never in focus
        los.push_back(lo);
        if (std::isfinite(hi)) his.push_back(hi);
        if (lo > domain_min) edges.push_back(lo);
        if (std::isfinite(hi) && hi > domain_min) edges.push_back(hi);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    part.breakpoints = std::move(edges);

    std::sort(los.begin(), los.end());
    std::sort(his.begin(), his.end());

    // Cell j is covered by [lo, hi] iff lo <= lower_edge(j) < hi; sweep the
    // lower edges with two pointers.
    part.counts.assign(part.cell_count(), 0);
    size_t ilo = 0, ihi = 0;
    for (size_t j = 0; j < part.cell_count(); ++j) {
        const double edge = part.lower_edge(j);
        while (ilo < los.size() && los[ilo] <= edge) ++ilo;
        while (ihi < his.size() && his[ihi] <= edge) ++ihi;
        part.counts[j] = static_cast<int>(ilo - ihi);
    }
    return part;
}

// Inclusive cell range covered by [lo, hi]; empty ranges have begin > end.
std::pair<int, int> covered_cells(const BreakpointPartition& part, double lo, double hi) {
    if (hi < lo) return {1, 0};
    int begin;
    if (lo <= part.domain_min) {
        begin = 0;
    } else {
        const auto it = std::lower_bound(part.breakpoints.begin(), part.breakpoints.end(), lo);
        begin = static_cast<int>(it - part.breakpoints.begin()) + 1;
    }
    int end;
    if (std::isfinite(hi)) {
        const auto it = std::lower_bound(part.breakpoints.begin(), part.breakpoints.end(), hi);
        end = static_cast<int>(it - part.breakpoints.begin());
    } else {
        end = static_cast<int>(part.cell_count()) - 1;
    }
    return {begin, end};
}

}  // namespace

BreakpointPartition build_partition(const CameraIntrinsics& intr, std::span<const double> depths) {
    std::vector<std::pair<double, double>> intervals;
    intervals.reserve(depths.size());
    for (double d : depths) {
        const FocusInterval iv = focus_interval_for_depth(d, intr);
        intervals.emplace_back(iv.lo, iv.hi ? *iv.hi : kInf);
    }
    return partition_from_intervals(intr.focal_mm, intr.hyperfocal_mm + intr.focal_mm, intervals);
}

BreakpointPartition build_partition(const CostCache& cache, int camera, std::span<const int> sample_ids) {
    const CameraIntrinsics& intr = cache.cameras()[static_cast<size_t>(camera)].intrinsics;
    std::vector<std::pair<double, double>> intervals;
    intervals.reserve(sample_ids.size());
    for (int p : sample_ids)
        if (cache.visible(camera, p))
            intervals.emplace_back(cache.focus_lo(camera, p), cache.focus_hi(camera, p));
    return partition_from_intervals(intr.focal_mm, intr.hyperfocal_mm + intr.focal_mm, intervals);
}

// ------------------------------------------------------------ baselines ----

namespace {

double clamp_focus(double s, const CameraIntrinsics& intr) {
    return std::max(s, intr.focal_mm + 1e-9);
}

template <typename Fold>
std::optional<double> fold_visible_depths(const CostCache& cache, int camera, Fold fold) {
    bool any = false;
    double acc = 0.0;
    int count = 0;
    for (Eigen::Index p = 0; p < cache.sample_count(); ++p) {
        if (!cache.visible(camera, p)) continue;
        fold(acc, count, cache.depth(camera, p), any);
        any = true;
        ++count;
    }
    if (!any) return std::nullopt;
    return acc;
}

}  // namespace

std::optional<double> baseline_closest(const CostCache& cache, int camera) {
    auto s = fold_visible_depths(cache, camera, [](double& acc, int, double d, bool any) {
        acc = any ? std::min(acc, d) : d;
    });
    if (!s) return std::nullopt;
    return clamp_focus(*s, cache.cameras()[static_cast<size_t>(camera)].intrinsics);
}

std::optional<double> baseline_avg(const CostCache& cache, int camera) {
    double sum = 0.0;
    int n = 0;
    for (Eigen::Index p = 0; p < cache.sample_count(); ++p)
        if (cache.visible(camera, p)) {
            sum += cache.depth(camera, p);
            ++n;
        }
    if (n == 0) return std::nullopt;
    return clamp_focus(sum / n, cache.cameras()[static_cast<size_t>(camera)].intrinsics);
}

std::optional<double> baseline_midrange(const CostCache& cache, int camera) {
    double lo = kInf, hi = -kInf;
    bool any = false;
    for (Eigen::Index p = 0; p < cache.sample_count(); ++p)
        if (cache.visible(camera, p)) {
            lo = std::min(lo, cache.depth(camera, p));
            hi = std::max(hi, cache.depth(camera, p));
            any = true;
        }
    if (!any) return std::nullopt;
    return clamp_focus(0.5 * (lo + hi), cache.cameras()[static_cast<size_t>(camera)].intrinsics);
}

std::optional<double> optimal_focus_single(const CameraIntrinsics& intr, std::span<const double> depths) {
    if (depths.empty()) return std::nullopt;
    const BreakpointPartition part = build_partition(intr, depths);
    return part.representative(part.max_count_cell());
}

std::optional<double> optimal_focus_single(const CostCache& cache, int camera,
                                           std::span<const int> sample_ids) {
    std::vector<double> depths;
    depths.reserve(sample_ids.size());
    for (int p : sample_ids)
        if (cache.visible(camera, p)) depths.push_back(cache.depth(camera, p));
    if (depths.empty()) return std::nullopt;
    return optimal_focus_single(cache.cameras()[static_cast<size_t>(camera)].intrinsics, depths);
}

// ------------------------------------------------------------- schedule ----

std::vector<std::vector<CameraTuple>> independent_tuple_schedule(
    int camera_count, const std::vector<std::pair<int, int>>& edges, int k) {
    if (k < 1 || k > 3) throw std::invalid_argument("independent_tuple_schedule: only k in {1,2,3} supported");

    if (k == 1) {
        std::vector<CameraTuple> singletons;
        singletons.reserve(static_cast<size_t>(camera_count));
        for (int c = 0; c < camera_count; ++c) singletons.push_back({{c}});
        return {singletons};
    }

    std::vector<std::pair<int, int>> sorted_edges;
    sorted_edges.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u == v) continue;
        sorted_edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(sorted_edges.begin(), sorted_edges.end());
    sorted_edges.erase(std::unique(sorted_edges.begin(), sorted_edges.end()), sorted_edges.end());

    if (k == 2) {
        // Greedy proper edge coloring; every color class is a matching.
        std::vector<std::uint64_t> used(static_cast<size_t>(camera_count), 0);
        std::vector<std::vector<CameraTuple>> batches;
        for (auto [u, v] : sorted_edges) {
            const std::uint64_t conflict = used[static_cast<size_t>(u)] | used[static_cast<size_t>(v)];
            int color = 0;
            while (color < 64 && (conflict >> color) & 1u) ++color;
            if (color == 64) throw std::runtime_error("independent_tuple_schedule: adjacency degree too high");
            if (static_cast<size_t>(color) >= batches.size()) batches.resize(static_cast<size_t>(color) + 1);
            batches[static_cast<size_t>(color)].push_back({{u, v}});
            used[static_cast<size_t>(u)] |= 1ull << color;
            used[static_cast<size_t>(v)] |= 1ull << color;
        }
        return batches;
    }

    // k == 3: all two-edge paths u - v - w of the adjacency graph.
    std::vector<std::vector<int>> neighbors(static_cast<size_t>(camera_count));
    for (auto [u, v] : sorted_edges) {
        neighbors[static_cast<size_t>(u)].push_back(v);
        neighbors[static_cast<size_t>(v)].push_back(u);
    }
    std::set<std::array<int, 3>> triples;
    for (int v = 0; v < camera_count; ++v) {
        const auto& nb = neighbors[static_cast<size_t>(v)];
        for (size_t i = 0; i < nb.size(); ++i)
            for (size_t j = i + 1; j < nb.size(); ++j) {
                std::array<int, 3> t = {v, nb[i], nb[j]};
                std::sort(t.begin(), t.end());
                triples.insert(t);
            }
    }
    std::vector<std::vector<CameraTuple>> batches;
    std::vector<std::vector<char>> occupied;  // per batch, per camera
    for (const auto& t : triples) {
        size_t b = 0;
        for (; b < batches.size(); ++b)
            if (!occupied[b][static_cast<size_t>(t[0])] && !occupied[b][static_cast<size_t>(t[1])] &&
                !occupied[b][static_cast<size_t>(t[2])])
                break;
        if (b == batches.size()) {
            batches.emplace_back();
            occupied.emplace_back(static_cast<size_t>(camera_count), 0);
        }
        batches[b].push_back({{t[0], t[1], t[2]}});
        for (int c : t) occupied[b][static_cast<size_t>(c)] = 1;
    }
    return batches;
}

// ----------------------------------------------------------- kview step ----

namespace {

struct SweepDim {
    int camera = -1;
    BreakpointPartition part;
    std::vector<std::vector<int>> enter;  // per cell: working-sample indices entering coverage
    std::vector<std::vector<int>> exit;   // per cell: indices leaving at the cell's start
};

SweepDim make_dim(const CostCache& cache, int camera, const std::vector<int>& working) {
    SweepDim dim;
    dim.camera = camera;
    dim.part = build_partition(cache, camera, working);
    const size_t cells = dim.part.cell_count();
    dim.enter.assign(cells, {});
    dim.exit.assign(cells, {});
    for (size_t i = 0; i < working.size(); ++i) {
        const int p = working[i];
        if (!cache.visible(camera, p)) continue;
        const auto [begin, end] =
            covered_cells(dim.part, cache.focus_lo(camera, p), cache.focus_hi(camera, p));
        if (begin > end) continue;
        dim.enter[static_cast<size_t>(begin)].push_back(static_cast<int>(i));
        if (static_cast<size_t>(end + 1) < cells) dim.exit[static_cast<size_t>(end + 1)].push_back(static_cast<int>(i));
    }
    return dim;
}

/// Direct tuple-restricted evaluation at fixed focus distances: per-sample
/// argmin over the seeing tuple cameras, ties to the lowest camera id.
double evaluate_tuple(const CostCache& cache, const std::vector<int>& cams,
                      const std::vector<double>& focus, const std::vector<int>& working,
                      std::vector<int>& assignment_out) {
    const double w3 = cache.params().w3;
    assignment_out.resize(working.size());
    double total = 0.0;
    for (size_t i = 0; i < working.size(); ++i) {
        const int p = working[i];
        double best = kInf;
        int best_cam = kUnassigned;
        for (size_t t = 0; t < cams.size(); ++t) {
            if (!cache.visible(cams[t], p)) continue;
            const double kappa =
                cache.static_cost(cams[t], p) + w3 * (cache.in_focus(cams[t], p, focus[t]) ? 0.0 : 1.0);
            if (kappa < best) {
                best = kappa;
                best_cam = cams[t];
            }
        }
        assignment_out[i] = best_cam;
        total += best;
    }
    return total;
}

}  // namespace

KviewStepResult kview_step(const CostCache& cache, const CameraTuple& tuple, FocusPlan& plan) {
    KviewStepResult result;

    std::vector<int> working;
    for (Eigen::Index p = 0; p < cache.sample_count(); ++p) {
        const int a = plan.assignment[static_cast<size_t>(p)];
        for (int c : tuple.cameras)
            if (a == c) {
                working.push_back(static_cast<int>(p));
                break;
            }
    }
    if (working.empty()) return result;

    double cost_before = 0.0;
    for (int p : working) {
        const int c = plan.assignment[static_cast<size_t>(p)];
        cost_before += cache.cost(c, p, *plan.focus[static_cast<size_t>(c)]);
    }
    result.cost_before = cost_before;
    result.cost_after = cost_before;

    // Cameras with no visible working sample cannot receive any of these
    // samples; they keep their focus and drop out of the sweep.
    std::vector<int> cams;
    for (int c : tuple.cameras) {
        bool sees = false;
        for (int p : working)
            if (cache.visible(c, p)) {
                sees = true;
                break;
            }
        if (sees) cams.push_back(c);
    }

    const size_t n = working.size();
    const size_t kdim = cams.size();
    std::vector<SweepDim> dims;
    dims.reserve(kdim);
    for (int c : cams) dims.push_back(make_dim(cache, c, working));

    std::vector<size_t> best_cell(kdim, 0);
    if (kdim == 1) {
        best_cell[0] = dims[0].part.max_count_cell();
    } else {
        // Per-sample cost under each in/out pattern of the tuple cameras
        // (bit t set = inside camera t's depth of field).
        const double w3 = cache.params().w3;
        const size_t npat = size_t{1} << kdim;
        std::vector<std::vector<double>> m(npat, std::vector<double>(n));
        for (size_t i = 0; i < n; ++i) {
            const int p = working[i];
            for (size_t mask = 0; mask < npat; ++mask) {
                double best = kInf;
                for (size_t t = 0; t < kdim; ++t) {
                    if (!cache.visible(cams[t], p)) continue;
                    const double kappa =
                        cache.static_cost(cams[t], p) + w3 * ((mask >> t) & 1u ? 0.0 : 1.0);
                    best = std::min(best, kappa);
                }
                m[mask][i] = best;
            }
        }

        double best_val = kInf;
        if (kdim == 2) {
            std::vector<std::uint8_t> in0(n, 0);
            for (size_t a = 0; a < dims[0].part.cell_count(); ++a) {
                for (int i : dims[0].enter[a]) in0[static_cast<size_t>(i)] = 1;
                for (int i : dims[0].exit[a]) in0[static_cast<size_t>(i)] = 0;
                double total = 0.0;
                for (size_t i = 0; i < n; ++i) total += m[in0[i]][i];
                for (size_t b = 0; b < dims[1].part.cell_count(); ++b) {
                    for (int i : dims[1].enter[b]) {
                        const size_t base = in0[static_cast<size_t>(i)];
                        total += m[base | 2][static_cast<size_t>(i)] - m[base][static_cast<size_t>(i)];
                    }
                    for (int i : dims[1].exit[b]) {
                        const size_t base = in0[static_cast<size_t>(i)];
                        total += m[base][static_cast<size_t>(i)] - m[base | 2][static_cast<size_t>(i)];
                    }
                    if (total < best_val) {
                        best_val = total;
                        best_cell[0] = a;
                        best_cell[1] = b;
                    }
                }
            }
        } else {  // kdim == 3
            std::vector<std::uint8_t> in0(n, 0), in1(n, 0);
            for (size_t a = 0; a < dims[0].part.cell_count(); ++a) {
                for (int i : dims[0].enter[a]) in0[static_cast<size_t>(i)] = 1;
                for (int i : dims[0].exit[a]) in0[static_cast<size_t>(i)] = 0;
                for (size_t b = 0; b < dims[1].part.cell_count(); ++b) {
                    for (int i : dims[1].enter[b]) in1[static_cast<size_t>(i)] = 1;
                    for (int i : dims[1].exit[b]) in1[static_cast<size_t>(i)] = 0;
                    double total = 0.0;
                    for (size_t i = 0; i < n; ++i)
                        total += m[static_cast<size_t>(in0[i] | (in1[i] << 1))][i];
                    for (size_t cc = 0; cc < dims[2].part.cell_count(); ++cc) {
                        for (int i : dims[2].enter[cc]) {
                            const size_t base =
                                static_cast<size_t>(in0[static_cast<size_t>(i)] | (in1[static_cast<size_t>(i)] << 1));
                            total += m[base | 4][static_cast<size_t>(i)] - m[base][static_cast<size_t>(i)];
                        }
                        for (int i : dims[2].exit[cc]) {
                            const size_t base =
                                static_cast<size_t>(in0[static_cast<size_t>(i)] | (in1[static_cast<size_t>(i)] << 1));
                            total += m[base][static_cast<size_t>(i)] - m[base | 4][static_cast<size_t>(i)];
                        }
                        if (total < best_val) {
                            best_val = total;
                            best_cell[0] = a;
                            best_cell[1] = b;
                            best_cell[2] = cc;
                        }
                    }
                }
                std::fill(in1.begin(), in1.end(), 0);
            }
        }
    }

    std::vector<double> candidate(kdim);
    for (size_t t = 0; t < kdim; ++t) candidate[t] = dims[t].part.representative(best_cell[t]);

    std::vector<int> new_assignment;
    const double cost_after = evaluate_tuple(cache, cams, candidate, working, new_assignment);
    if (cost_after <= cost_before) {
        for (size_t t = 0; t < kdim; ++t) plan.focus[static_cast<size_t>(cams[t])] = candidate[t];
        for (size_t i = 0; i < n; ++i) plan.assignment[static_cast<size_t>(working[i])] = new_assignment[i];
        result.cost_after = cost_after;
        result.improved = cost_after < cost_before;
    }
    return result;
}

// ------------------------------------------------------------ EM/k-view ----

FocusPlan make_initial_plan(const CostCache& cache, InitPolicy policy) {
    FocusPlan plan;
    plan.focus.resize(static_cast<size_t>(cache.camera_count()));
    for (Eigen::Index c = 0; c < cache.camera_count(); ++c) {
        const int cam = static_cast<int>(c);
        switch (policy) {
            case InitPolicy::Closest: plan.focus[static_cast<size_t>(c)] = baseline_closest(cache, cam); break;
            case InitPolicy::Avg: plan.focus[static_cast<size_t>(c)] = baseline_avg(cache, cam); break;
            case InitPolicy::Midrange: plan.focus[static_cast<size_t>(c)] = baseline_midrange(cache, cam); break;
        }
    }
    return plan;
}

namespace {

SolveResult run_loop(const CostCache& cache, const std::vector<std::vector<CameraTuple>>& schedule,
                     const SolverConfig& config, FocusPlan plan) {
    SolveResult result;
    auto t0 = std::chrono::steady_clock::now();
    if (plan.assignment.empty()) plan.assignment = assign_step(plan.focus, cache);
    double prev = total_cost(plan, cache).total;
    result.trace.push_back({0, "assign", prev, ms_between(t0, std::chrono::steady_clock::now())});

    int executed = 0;
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        executed = iter;
        auto t_min = std::chrono::steady_clock::now();
        for (const auto& batch : schedule) {
            for (const auto& tuple : batch) kview_step(cache, tuple, plan);
            if (config.reassign_between_batches) plan.assignment = assign_step(plan.focus, cache);
        }
        const double after_min = total_cost(plan, cache).total;
        result.trace.push_back(
            {iter, "minimize", after_min, ms_between(t_min, std::chrono::steady_clock::now())});

        auto t_assign = std::chrono::steady_clock::now();
        plan.assignment = assign_step(plan.focus, cache);
        const double cur = total_cost(plan, cache).total;
        result.trace.push_back(
            {iter, "assign", cur, ms_between(t_assign, std::chrono::steady_clock::now())});

        const bool converged = (prev - cur) <= config.tolerance * prev;
        prev = cur;
        if (converged) break;
    }
    result.iterations = executed;
    result.report = total_cost(plan, cache);
    result.plan = std::move(plan);
    return result;
}

}  // namespace

SolveResult em_optimize(const CostCache& cache, const SolverConfig& config) {
    const auto schedule = independent_tuple_schedule(static_cast<int>(cache.camera_count()), {}, 1);
    return run_loop(cache, schedule, config, make_initial_plan(cache, config.init));
}

SolveResult kview_optimize(const CostCache& cache, const std::vector<std::pair<int, int>>& edges,
                           const SolverConfig& config, FocusPlan initial) {
    const auto schedule =
        independent_tuple_schedule(static_cast<int>(cache.camera_count()), edges, config.k);
    return run_loop(cache, schedule, config, std::move(initial));
}

// -------------------------------------------------------------- overlap ----

namespace {

template <typename Visible>
double overlap_impl(const CameraTuple& tuple, Eigen::Index samples, Visible visible) {
    int shared = 0, any = 0;
    for (Eigen::Index p = 0; p < samples; ++p) {
        bool all_see = true, any_see = false;
        for (int c : tuple.cameras) {
            const bool v = visible(c, p);
            all_see = all_see && v;
            any_see = any_see || v;
        }
        if (any_see) ++any;
        if (all_see) ++shared;
    }
    return any > 0 ? static_cast<double>(shared) / static_cast<double>(any) : 0.0;
}

}  // namespace

double measure_overlap(const CameraTuple& tuple, const VisibilityTable& visibility) {
    return overlap_impl(tuple, visibility.sample_count(),
                        [&](int c, Eigen::Index p) { return visibility.is_visible(c, p); });
}

double measure_overlap(const CameraTuple& tuple, const CostCache& cache) {
    return overlap_impl(tuple, cache.sample_count(),
                        [&](int c, Eigen::Index p) { return cache.visible(c, p); });
}

}  // namespace focusplan
