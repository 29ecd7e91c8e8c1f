#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kts/tensor_poly.hpp"
#include "kts/vec.hpp"

namespace kts {

inline double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

// Counterclockwise convex polygon. One vertex is a point, two a segment;
// both are legal degenerate forms.
struct ConvexPolygon {
    std::vector<Vec2> vertices;

    bool degenerate() const { return vertices.size() < 3; }
};

// Closed interval; the 1-D bounding polygon.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

namespace detail {

inline ConvexPolygon convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return {pts};

    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross(sub(hull[k - 1], hull[k - 2]), sub(pts[i], hull[k - 2])) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
        while (k >= lower && cross(sub(hull[k - 1], hull[k - 2]), sub(pts[i], hull[k - 2])) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.empty()) hull.push_back(pts[0]);  // all points coincide
    return {hull};
}

// Zonogon with the given center: the Minkowski sum of segments
// [-g, g] over the generators, translated to the center. Generators are
// sign-canonicalized into the upper half-plane, exactly-parallel ones merged,
// then the boundary is walked in ascending angle order. 2K vertices for K
// distinct directions.
inline ConvexPolygon zonogon(const Vec2& center, std::vector<Vec2> gens) {
    std::vector<Vec2> g;
    g.reserve(gens.size());
    for (Vec2 v : gens) {
        if (v[0] == 0.0 && v[1] == 0.0) continue;
        if (v[1] < 0.0 || (v[1] == 0.0 && v[0] < 0.0)) v = scaled(v, -1.0);
        g.push_back(v);
    }
    if (g.empty()) return {{center}};

    std::sort(g.begin(), g.end(), [](const Vec2& a, const Vec2& b) { return cross(a, b) > 0.0; });
    std::vector<Vec2> merged;
    for (const Vec2& v : g) {
        if (!merged.empty() && cross(merged.back(), v) == 0.0)
            merged.back() = add(merged.back(), v);
        else
            merged.push_back(v);
    }

    Vec2 total{};
    for (const Vec2& v : merged) total = add(total, v);
    if (merged.size() == 1) return {{sub(center, total), add(center, total)}};

    std::vector<Vec2> verts;
    verts.reserve(2 * merged.size());
    Vec2 v = sub(center, total);
    for (const Vec2& gk : merged) {
        verts.push_back(v);
        v = add(v, scaled(gk, 2.0));
    }
    for (const Vec2& gk : merged) {
        verts.push_back(v);
        v = sub(v, scaled(gk, 2.0));
    }
    return {verts};
}

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = sub(b, a);
    const double len2 = ab[0] * ab[0] + ab[1] * ab[1];
    double t = 0.0;
    if (len2 > 0.0) {
        t = ((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len2;
        t = std::clamp(t, 0.0, 1.0);
    }
    const Vec2 q = add(a, scaled(ab, t));
    return std::hypot(p[0] - q[0], p[1] - q[1]);
}

}  // namespace detail

// Bounding polygon of {p(u,v) : (u,v) in [l,h]^2}: the control-point hull
// for Bernstein, the zonogon centered at c_00 with generators {c_ij : i+j>0}
// for power and Chebyshev.
inline ConvexPolygon bounding_polygon(const TensorPoly<2>& p) {
    if (p.basis() == Basis::Bernstein) {
        return detail::convex_hull(std::vector<Vec2>(p.coeffs().begin(), p.coeffs().end()));
    }
    std::vector<Vec2> gens;
    gens.reserve(p.coeffs().size() - 1);
    for (int i = 0; i <= p.deg_u(); ++i)
        for (int j = 0; j <= p.deg_v(); ++j)
            if (i + j > 0) gens.push_back(p.at(i, j));
    return detail::zonogon(p.at(0, 0), gens);
}

// Closed membership: the boundary counts as containing, so an exclusion
// decision is made only when the origin is strictly outside.
inline bool contains_origin(const ConvexPolygon& poly) {
    if (poly.vertices.empty()) return false;
    double scale = 1.0;
    for (const Vec2& v : poly.vertices) scale = std::max(scale, norm_inf(v));
    const double tol = 1e-12 * scale;
    const Vec2 origin{0.0, 0.0};

    if (poly.vertices.size() == 1) return norm_inf(poly.vertices[0]) <= tol;
    if (poly.vertices.size() == 2)
        return detail::point_segment_distance(origin, poly.vertices[0], poly.vertices[1]) <= tol;

    const double area_tol = 1e-12 * scale * scale;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly.vertices[i];
        const Vec2& b = poly.vertices[(i + 1) % n];
        if (cross(sub(b, a), sub(origin, a)) < -area_tol) return false;
    }
    return true;
}

// 1-D bounding interval of a scalar polynomial over [l,h]^2.
inline Interval scalar_range(const TensorPoly<1>& p) {
    if (p.basis() == Basis::Bernstein) {
        double lo = p.at(0, 0)[0], hi = lo;
        for (const Vec<1>& c : p.coeffs()) {
            lo = std::min(lo, c[0]);
            hi = std::max(hi, c[0]);
        }
        return {lo, hi};
    }
    const double c0 = p.at(0, 0)[0];
    double s = 0.0;
    for (int i = 0; i <= p.deg_u(); ++i)
        for (int j = 0; j <= p.deg_v(); ++j)
            if (i + j > 0) s += std::abs(p.at(i, j)[0]);
    return {c0 - s, c0 + s};
}

inline double max_abs(const Interval& iv) { return std::max(std::abs(iv.lo), std::abs(iv.hi)); }

// Basis-dependent looseness factor of the bounding polygon: every polygon
// vertex y satisfies |y| <= theta * max |p| over the natural domain.
inline double theta(Basis basis, int m, int n) {
    if (m < 0 || n < 0) throw std::invalid_argument("theta: negative degree");
    switch (basis) {
        case Basis::Chebyshev:
            return 2.0 * double(m + 1) * double(n + 1);
        case Basis::Power: {
            double pm = std::pow(3.0, m + 1) - 1.0;
            double pn = std::pow(3.0, n + 1) - 1.0;
            return double(m + 1) * double(n + 1) * pm * pn / 2.0;
        }
        case Basis::Bernstein: {
            auto factor = [](int d) {
                double sum = 0.0;
                for (int i = 0; i <= d; ++i) {
                    double prod = 1.0;
                    for (int i2 = 0; i2 <= d; ++i2) {
                        if (i2 == i) continue;
                        prod *= double(std::max(std::abs(d - i2), std::abs(i2))) /
                                double(std::abs(i - i2));
                    }
                    sum += prod;
                }
                return sum;
            };
            return factor(m) * factor(n);
        }
    }
    return 0.0;
}

inline double theta(const TensorPoly<2>& p) { return theta(p.basis(), p.deg_u(), p.deg_v()); }

// Domain-enlargement factor 1/(4 sqrt(theta(4 theta+1)) - 8 theta), written
// in a cancellation-free form. Decreasing in theta, with values in
// [1, (sqrt(5)+2)/4].
inline double gamma_factor(double theta_value) {
    if (theta_value < 1.0) throw std::invalid_argument("gamma_factor: theta must be >= 1");
    return (std::sqrt(theta_value * (4.0 * theta_value + 1.0)) + 2.0 * theta_value) /
           (4.0 * theta_value);
}

}  // namespace kts
