#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "kts/solver.hpp"
#include "kts/tensor_poly.hpp"
#include "kts/vec.hpp"

namespace kts {

// Line {p + d t : t real}; d must be nonzero.
struct Line3 {
    Vec3 p{};
    Vec3 d{};
};

// Parametric surface patch over [0,1]^2 with 3-vector coefficients.
using Surface3 = TensorPoly<3>;

struct Intersection {
    Vec2 uv{};
    double t = 0.0;
    Vec3 point{};
    double residual = 0.0;
};

struct IntersectResult {
    std::vector<Intersection> intersections;  // sorted by t
    std::vector<Patch> unresolved;
    bool budget_exhausted = false;
    SolveStats stats;

    bool complete() const { return unresolved.empty(); }
};

// Axis with the largest |d_k|; ties go to the lowest index so the reduction
// is deterministic.
inline int pivot_axis(const Vec3& d) {
    if (norm_inf(d) == 0.0) throw std::invalid_argument("line direction is zero");
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(d[static_cast<std::size_t>(i)]) > std::abs(d[static_cast<std::size_t>(k)]))
            k = i;
    return k;
}

// Eliminates t from f(u,v) = p + d t by crossing the pivot component with the
// other two, yielding a 2-vector system in the surface's own basis.
inline TensorPoly<2> reduce(const TensorPoly<3>& surface, const Line3& line) {
    const std::size_t k = static_cast<std::size_t>(pivot_axis(line.d));
    const std::size_t a = k == 0 ? 1 : 0;
    const std::size_t b = k == 2 ? 1 : 2;

    std::array<std::array<double, 3>, 2> m{};
    m[0][a] = line.d[k];
    m[0][k] = -line.d[a];
    m[1][b] = line.d[k];
    m[1][k] = -line.d[b];
    const Vec2 offset{line.d[a] * line.p[k] - line.d[k] * line.p[a],
                      line.d[b] * line.p[k] - line.d[k] * line.p[b]};
    return linear_combine<2, 3>(surface, m, offset);
}

// Solves the pivot row for the line parameter at a known (u,v).
inline double recover_t(const TensorPoly<3>& surface, const Line3& line, const Vec2& uv) {
    const std::size_t k = static_cast<std::size_t>(pivot_axis(line.d));
    return (surface.eval(uv)[k] - line.p[k]) / line.d[k];
}

inline IntersectResult intersect(const TensorPoly<3>& surface, const Line3& line,
                                 const SolveConfig& config = {}) {
    const TensorPoly<2> reduced = reduce(surface, line);
    const SolveResult sol = solve(reduced, config);

    IntersectResult out;
    out.unresolved = sol.unresolved;
    out.budget_exhausted = sol.budget_exhausted;
    out.stats = sol.stats;
    for (const Vec2& uv : sol.zeros) {
        Intersection hit;
        hit.uv = uv;
        hit.t = recover_t(surface, line, uv);
        const Vec3 on_line = add(line.p, scaled(line.d, hit.t));
        hit.point = on_line;
        hit.residual = dist_inf(surface.eval(uv), on_line);
        if (hit.residual <= 1e-8) out.intersections.push_back(hit);
    }
    std::sort(out.intersections.begin(), out.intersections.end(),
              [](const Intersection& x, const Intersection& y) { return x.t < y.t; });
    return out;
}

}  // namespace kts
