#pragma once

#include <vector>

#include "kts/bounding.hpp"
#include "kts/tensor_poly.hpp"
#include "kts/vec.hpp"

namespace kts {

enum class NewtonStatus { Converged, MaxIterations, SingularJacobian, Diverged };

struct NewtonOutcome {
    Vec2 zero{};
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    NewtonStatus status = NewtonStatus::MaxIterations;
    std::vector<Vec2> iterates;  // x^0, x^1, ...
};

// Plain undamped Newton iteration on a 2x2 system. Stops on step norm
// (affine invariant), not residual. The solver only launches this from
// Kantorovich-certified starting points.
inline NewtonOutcome newton_solve(const TensorPoly<2>& f, const Vec2& x0,
                                  double step_tol = 1e-12, int max_iter = 50) {
    NewtonOutcome out;
    const TensorPoly<2> fu = f.derivative(Axis::U);
    const TensorPoly<2> fv = f.derivative(Axis::V);
    const double escape = 10.0 * (1.0 + 2.0 * gamma_factor(theta(f)));

    Vec2 x = x0;
    out.iterates.push_back(x);
    for (int it = 1; it <= max_iter; ++it) {
        const Vec2 fx = f.eval(x);
        const Vec2 du = fu.eval(x);
        const Vec2 dv = fv.eval(x);
        const std::optional<Vec2> step = solve2(Mat2{du[0], dv[0], du[1], dv[1]}, fx);
        if (!step) {
            out.status = NewtonStatus::SingularJacobian;
            out.iterations = it - 1;
            out.zero = x;
            out.residual = norm_inf(fx);
            return out;
        }
        x = sub(x, *step);
        out.iterates.push_back(x);
        out.iterations = it;
        if (norm_inf(x) > escape) {
            out.status = NewtonStatus::Diverged;
            out.zero = x;
            out.residual = norm_inf(f.eval(x));
            return out;
        }
        if (norm_inf(*step) <= step_tol) {
            out.status = NewtonStatus::Converged;
            out.converged = true;
            break;
        }
    }
    out.zero = x;
    out.residual = norm_inf(f.eval(x));
    return out;
}

}  // namespace kts
