#pragma once

#include <cassert>
#include <cstddef>
#include <deque>
#include <vector>

#include "kts/bounding.hpp"
#include "kts/kantorovich.hpp"
#include "kts/newton.hpp"
#include "kts/tensor_poly.hpp"
#include "kts/vec.hpp"

namespace kts {

struct SolveConfig {
    double min_patch_width = 1e-6;
    std::size_t max_patches = 1'000'000;
    double newton_step_tol = 1e-12;
    int newton_max_iter = 50;
    double zero_residual_tol = 1e-10;
    double duplicate_tol = 1e-8;
};

// Table-style run statistics.
struct SolveStats {
    std::size_t patches_examined = 0;
    double smallest_width = 1.0;
    int max_newton_iterations = 0;
};

enum class PatchOutcome {
    PrunedSafeRegion,
    Excluded,
    KantFailH,
    KantFailDomain,
    KantSingular,
    PassNewZero,
    PassDuplicate,
    PassNewtonFailed,
};

inline const char* outcome_name(PatchOutcome o) {
    switch (o) {
        case PatchOutcome::PrunedSafeRegion: return "pruned_safe_region";
        case PatchOutcome::Excluded: return "excluded";
        case PatchOutcome::KantFailH: return "kant_fail_h";
        case PatchOutcome::KantFailDomain: return "kant_fail_domain";
        case PatchOutcome::KantSingular: return "kant_singular";
        case PatchOutcome::PassNewZero: return "pass_new_zero";
        case PatchOutcome::PassDuplicate: return "pass_duplicate";
        case PatchOutcome::PassNewtonFailed: return "pass_newton_failed";
    }
    return "?";
}

struct PatchTrace {
    Vec2 center{};
    double radius = 0.0;
    PatchOutcome outcome{};
};

// Kantorovich-pass event with everything the convergence diagnostics need.
struct PassEvent {
    Patch patch;
    KantorovichReport report;
    NewtonOutcome newton;
};

struct SolveResult {
    std::vector<Vec2> zeros;  // inside [0,1]^2 (within duplicate_tol)
    std::vector<SafeRegion> safe_regions;
    SolveStats stats;
    std::vector<Patch> unresolved;
    bool budget_exhausted = false;
    std::vector<Vec2> zeros_all;  // includes zeros detected outside the square
    std::vector<PatchTrace> trace;
    std::vector<PassEvent> pass_events;

    // True when every discarded patch either passed the exclusion test or lay
    // inside a safe region, i.e. the zero list is certified complete.
    bool complete() const { return unresolved.empty(); }
};

// Exclusion test: reparametrize f over the patch and ask whether the bounding
// polygon of the result misses the origin. True means the patch provably
// contains no zero.
inline bool exclusion_test(const TensorPoly<2>& f, const Patch& patch) {
    return !contains_origin(bounding_polygon(f.reparametrized(patch)));
}

namespace detail {

inline bool inside_unit_square(const Vec2& x, double tol) {
    return x[0] >= -tol && x[0] <= 1.0 + tol && x[1] >= -tol && x[1] <= 1.0 + tol;
}

}  // namespace detail

// The subdivision main loop. FIFO queue seeded with [0,1]^2; each surviving
// patch runs the exclusion test, then the Kantorovich test, and is always
// quadrisected afterwards. Quadrants below min_patch_width are reported as
// unresolved instead of being enqueued, which keeps non-generic inputs
// (multiple zeros, singular Jacobians) from looping forever.
inline SolveResult solve(const TensorPoly<2>& f, const SolveConfig& config = {}) {
    const double theta_value = theta(f);
    SolveResult res;

    std::deque<Patch> queue;
    queue.push_back(Patch{{0.5, 0.5}, 0.5});

    double previous_width = 2.0;  // FIFO quadrisection processes widths in non-increasing order
    while (!queue.empty()) {
        if (res.stats.patches_examined >= config.max_patches) {
            res.budget_exhausted = true;
            res.unresolved.insert(res.unresolved.end(), queue.begin(), queue.end());
            break;
        }
        const Patch patch = queue.front();
        queue.pop_front();

        res.stats.patches_examined++;
        assert(patch.width() <= previous_width * (1.0 + 1e-12));
        previous_width = patch.width();
        res.stats.smallest_width = std::min(res.stats.smallest_width, patch.width());

        bool pruned = false;
        for (const SafeRegion& sr : res.safe_regions) {
            if (dist_inf(patch.center, sr.zero) + patch.radius <= sr.rho_star + 1e-12) {
                pruned = true;
                break;
            }
        }
        if (pruned) {
            res.trace.push_back({patch.center, patch.radius, PatchOutcome::PrunedSafeRegion});
            continue;
        }

        if (exclusion_test(f, patch)) {
            res.trace.push_back({patch.center, patch.radius, PatchOutcome::Excluded});
            continue;
        }

        PatchOutcome outcome;
        const KantorovichReport report = kantorovich_test(f, patch, theta_value);
        switch (report.verdict) {
            case KantoVerdict::FailH: outcome = PatchOutcome::KantFailH; break;
            case KantoVerdict::FailDomain: outcome = PatchOutcome::KantFailDomain; break;
            case KantoVerdict::SingularJacobian: outcome = PatchOutcome::KantSingular; break;
            case KantoVerdict::Pass: {
                const NewtonOutcome nt = newton_solve(f, patch.center, config.newton_step_tol,
                                                      config.newton_max_iter);
                if (nt.converged && nt.residual <= config.zero_residual_tol) {
                    res.stats.max_newton_iterations =
                        std::max(res.stats.max_newton_iterations, nt.iterations);
                    bool known = false;
                    for (const SafeRegion& sr : res.safe_regions)
                        if (dist_inf(nt.zero, sr.zero) <= sr.rho_star) known = true;
                    for (const Vec2& z : res.zeros_all)
                        if (dist_inf(nt.zero, z) <= config.duplicate_tol) known = true;
                    if (!known) {
                        res.zeros_all.push_back(nt.zero);
                        const SafeRegion sr = safe_region(f, nt.zero);
                        if (sr.usable()) res.safe_regions.push_back(sr);
                        if (detail::inside_unit_square(nt.zero, config.duplicate_tol))
                            res.zeros.push_back(nt.zero);
                        outcome = PatchOutcome::PassNewZero;
                    } else {
                        outcome = PatchOutcome::PassDuplicate;
                    }
                } else {
                    outcome = PatchOutcome::PassNewtonFailed;
                }
                res.pass_events.push_back({patch, report, nt});
                break;
            }
            default: outcome = PatchOutcome::KantSingular; break;
        }
        res.trace.push_back({patch.center, patch.radius, outcome});

        // Quadrisect regardless of the Kantorovich verdict. Centers stay on
        // the dyadic grid, so patch boundaries are exact in binary floating
        // point.
        const double r = patch.radius / 2.0;
        const Patch children[4] = {
            Patch{{patch.center[0] - r, patch.center[1] - r}, r},
            Patch{{patch.center[0] + r, patch.center[1] - r}, r},
            Patch{{patch.center[0] - r, patch.center[1] + r}, r},
            Patch{{patch.center[0] + r, patch.center[1] + r}, r},
        };
        if (children[0].width() < config.min_patch_width) {
            res.unresolved.insert(res.unresolved.end(), children, children + 4);
        } else {
            queue.insert(queue.end(), children, children + 4);
        }
    }
    return res;
}

}  // namespace kts
