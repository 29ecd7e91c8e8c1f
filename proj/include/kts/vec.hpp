#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>

namespace kts {

template <std::size_t N>
using Vec = std::array<double, N>;

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

template <std::size_t N>
inline double norm_inf(const Vec<N>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

template <std::size_t N>
inline Vec<N> add(const Vec<N>& a, const Vec<N>& b) {
    Vec<N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
    return r;
}

template <std::size_t N>
inline Vec<N> sub(const Vec<N>& a, const Vec<N>& b) {
    Vec<N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
    return r;
}

template <std::size_t N>
inline Vec<N> scaled(const Vec<N>& a, double s) {
    Vec<N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] * s;
    return r;
}

template <std::size_t N>
inline double dist_inf(const Vec<N>& a, const Vec<N>& b) {
    return norm_inf(sub(a, b));
}

// Row-major 2x2 matrix.
struct Mat2 {
    double m00 = 0, m01 = 0, m10 = 0, m11 = 0;

    double det() const { return m00 * m11 - m01 * m10; }

    Vec2 apply(const Vec2& v) const {
        return {m00 * v[0] + m01 * v[1], m10 * v[0] + m11 * v[1]};
    }

    // Scale-invariant singularity test: |det| relative to the product of row
    // magnitudes.
    bool singular() const {
        double s = std::max(std::abs(m00), std::abs(m01)) *
                   std::max(std::abs(m10), std::abs(m11));
        return std::abs(det()) <= 1e-14 * s || s == 0.0;
    }
};

inline Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

// Induced infinity norm (max row sum).
inline double norm_inf(const Mat2& a) {
    return std::max(std::abs(a.m00) + std::abs(a.m01), std::abs(a.m10) + std::abs(a.m11));
}

inline std::optional<Mat2> inverse(const Mat2& a) {
    if (a.singular()) return std::nullopt;
    double d = a.det();
    return Mat2{a.m11 / d, -a.m01 / d, -a.m10 / d, a.m00 / d};
}

// Solves a * x = rhs; nullopt when a is numerically singular.
inline std::optional<Vec2> solve2(const Mat2& a, const Vec2& rhs) {
    if (a.singular()) return std::nullopt;
    double d = a.det();
    return Vec2{(rhs[0] * a.m11 - rhs[1] * a.m01) / d,
                (rhs[1] * a.m00 - rhs[0] * a.m10) / d};
}

}  // namespace kts
