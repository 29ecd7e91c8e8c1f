#pragma once

#include <cmath>
#include <optional>

#include "kts/bounding.hpp"
#include "kts/tensor_poly.hpp"
#include "kts/vec.hpp"

namespace kts {

enum class KantoVerdict { Pass, FailH, FailDomain, SingularJacobian };

inline const char* verdict_name(KantoVerdict v) {
    switch (v) {
        case KantoVerdict::Pass: return "pass";
        case KantoVerdict::FailH: return "fail_h";
        case KantoVerdict::FailDomain: return "fail_domain";
        case KantoVerdict::SingularJacobian: return "singular_jacobian";
    }
    return "?";
}

// Outcome of the Kantorovich test at a patch center: eta = |f'(x0)^-1 f(x0)|,
// the Lipschitz over-estimate omega_hat, h = eta * omega_hat, and the
// existence/uniqueness radii when h <= 1/2.
struct KantorovichReport {
    double eta = 0.0;
    double omega_hat = 0.0;
    double h = 0.0;
    std::optional<double> rho_minus;
    std::optional<double> rho_plus;
    KantoVerdict verdict = KantoVerdict::SingularJacobian;

    bool pass() const { return verdict == KantoVerdict::Pass; }
};

// Ball around a confirmed zero inside which it is the unique zero;
// rho_star * omega_star = 2 up to binary-search tolerance.
struct SafeRegion {
    enum class Status { Ok, Unbounded, NoConvergence, SingularJacobian };

    Vec2 zero{};
    double rho_star = 0.0;
    double omega_star = 0.0;
    Status status = Status::Ok;

    bool usable() const { return status == Status::Ok || status == Status::Unbounded; }
};

namespace detail {

// 4 * max_{i,j,k} max_{x in region} |g''_ijk(x)| where g = a_inv * f, with the
// per-entry maxima over-estimated by bounding intervals of the reparametrized
// second partials.
inline double lipschitz_bound_with(const TensorPoly<2>& f, const Mat2& a_inv,
                                   const Box2& region) {
    const TensorPoly<2> g = linear_combine(f, a_inv);
    const TensorPoly<2> gu = g.derivative(Axis::U);
    const TensorPoly<2> guu = gu.derivative(Axis::U);
    const TensorPoly<2> guv = gu.derivative(Axis::V);
    const TensorPoly<2> gvv = g.derivative(Axis::V).derivative(Axis::V);

    double worst = 0.0;
    for (const TensorPoly<2>* q : {&guu, &guv, &gvv}) {
        for (std::size_t comp = 0; comp < 2; ++comp) {
            const TensorPoly<1> entry = q->component(comp).reparametrized(region);
            worst = std::max(worst, max_abs(scalar_range(entry)));
        }
    }
    return 4.0 * worst;
}

}  // namespace detail

// Computable Lipschitz bound for f'(x0)^-1 f' over the region. Guaranteed
// >= the true smallest Lipschitz constant there and <= 4 theta times it.
// nullopt when f'(x0) is numerically singular.
inline std::optional<double> lipschitz_bound(const TensorPoly<2>& f, const Vec2& x0,
                                             const Box2& region) {
    const std::optional<Mat2> inv = inverse(jacobian(f, x0));
    if (!inv) return std::nullopt;
    return detail::lipschitz_bound_with(f, *inv, region);
}

inline std::optional<double> lipschitz_bound(const TensorPoly<2>& f, const Vec2& x0,
                                             const Patch& region) {
    return lipschitz_bound(f, x0, Box2::of_patch(region));
}

// Kantorovich test on the patch: the theorem is applied at the patch center
// with domain B(x0, 2 gamma(theta) r) clipped to D' = [-gamma, 1+gamma]^2.
// Pass certifies the center as a fast starting point.
inline KantorovichReport kantorovich_test(const TensorPoly<2>& f, const Patch& patch,
                                          double theta_value) {
    KantorovichReport rep;
    const double g = gamma_factor(theta_value);
    const Vec2 x0 = patch.center;

    const Mat2 jac = jacobian(f, x0);
    const std::optional<Mat2> inv = inverse(jac);
    if (!inv) {
        rep.verdict = KantoVerdict::SingularJacobian;
        return rep;
    }

    rep.eta = norm_inf(inv->apply(f.eval(x0)));

    const Box2 dprime{{-g, -g}, {1.0 + g, 1.0 + g}};
    const double reach = 2.0 * g * patch.radius;
    const Box2 domain = intersect_box(
        Box2{{x0[0] - reach, x0[1] - reach}, {x0[0] + reach, x0[1] + reach}}, dprime);
    rep.omega_hat = detail::lipschitz_bound_with(f, *inv, domain);
    rep.h = rep.eta * rep.omega_hat;

    if (rep.h <= 0.5) {
        // 2 eta / (1 + sqrt(1-2h)) equals (1 - sqrt(1-2h))/omega_hat without
        // cancellation and extends continuously to omega_hat = 0.
        const double root = std::sqrt(1.0 - 2.0 * rep.h);
        rep.rho_minus = 2.0 * rep.eta / (1.0 + root);
        if (rep.omega_hat > 0.0) rep.rho_plus = (1.0 + root) / rep.omega_hat;
    }

    if (rep.h > 0.25) {
        rep.verdict = KantoVerdict::FailH;
    } else {
        const double rho = *rep.rho_minus;
        const bool fits = x0[0] - rho >= -g && x0[0] + rho <= 1.0 + g &&
                          x0[1] - rho >= -g && x0[1] + rho <= 1.0 + g;
        rep.verdict = fits ? KantoVerdict::Pass : KantoVerdict::FailDomain;
    }
    return rep;
}

inline KantorovichReport kantorovich_test(const TensorPoly<2>& f, const Patch& patch) {
    return kantorovich_test(f, patch, theta(f));
}

// Binary search for the (omega*, rho*) pair at a zero: rho* is the largest
// radius with rho * omega_hat(rho) <= 2, so the returned ball is never too
// large. Affine systems never reach the crossing and are capped at rho_max
// with the Unbounded flag.
inline SafeRegion safe_region(const TensorPoly<2>& f, const Vec2& x_star) {
    SafeRegion sr;
    sr.zero = x_star;

    const std::optional<Mat2> inv = inverse(jacobian(f, x_star));
    if (!inv) {
        sr.status = SafeRegion::Status::SingularJacobian;
        return sr;
    }

    const double g = gamma_factor(theta(f));
    const double rho_max = 4.0 * (1.0 + 2.0 * g);
    const auto omega_at = [&](double rho) {
        const Box2 ball{{x_star[0] - rho, x_star[1] - rho}, {x_star[0] + rho, x_star[1] + rho}};
        return detail::lipschitz_bound_with(f, *inv, ball);
    };

    if (rho_max * omega_at(rho_max) <= 2.0) {
        sr.rho_star = rho_max;
        sr.omega_star = 2.0 / rho_max;
        sr.status = SafeRegion::Status::Unbounded;
        return sr;
    }

    double lo = 1e-8;
    double hi = rho_max;
    if (lo * omega_at(lo) > 2.0) {
        sr.rho_star = lo;
        sr.omega_star = 2.0 / lo;
        sr.status = SafeRegion::Status::NoConvergence;
        return sr;
    }

    for (int iter = 0; iter < 200 && (hi - lo) > 1e-6 * std::max(1.0, lo); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid * omega_at(mid) > 2.0)
            hi = mid;
        else
            lo = mid;
    }

    sr.rho_star = lo;
    sr.omega_star = 2.0 / lo;
    sr.status = SafeRegion::Status::Ok;
    return sr;
}

}  // namespace kts
