#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "kts/basis.hpp"
#include "kts/vec.hpp"

namespace kts {

enum class Axis { U = 0, V = 1 };

// Closed square ball B(center, radius) in the infinity norm; the unit of
// subdivision.
struct Patch {
    Vec2 center{0.5, 0.5};
    double radius = 0.5;

    double width() const { return 2.0 * radius; }
};

// Axis-aligned rectangle. Patches are square; Lipschitz domains clipped
// against D' need not be.
struct Box2 {
    Vec2 lo{0.0, 0.0};
    Vec2 hi{1.0, 1.0};

    static Box2 of_patch(const Patch& p) {
        return {{p.center[0] - p.radius, p.center[1] - p.radius},
                {p.center[0] + p.radius, p.center[1] + p.radius}};
    }

    bool contains(const Vec2& x, double tol = 0.0) const {
        return x[0] >= lo[0] - tol && x[0] <= hi[0] + tol && x[1] >= lo[1] - tol &&
               x[1] <= hi[1] + tol;
    }
};

// Intersection of two boxes; requires a nonempty overlap.
inline Box2 intersect_box(const Box2& a, const Box2& b) {
    Box2 r{{std::max(a.lo[0], b.lo[0]), std::max(a.lo[1], b.lo[1])},
           {std::min(a.hi[0], b.hi[0]), std::min(a.hi[1], b.hi[1])}};
    assert(r.lo[0] <= r.hi[0] && r.lo[1] <= r.hi[1]);
    return r;
}

namespace detail {

// new[k] = sum_i M[k][i] old[i] for one coefficient line.
template <std::size_t D>
void apply_line_matrix(const std::vector<std::vector<double>>& m,
                       const Vec<D>* in, Vec<D>* out, int len) {
    for (int k = 0; k < len; ++k) {
        Vec<D> acc{};
        for (int i = 0; i < len; ++i) {
            const double w = m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            if (w != 0.0) acc = add(acc, scaled(in[i], w));
        }
        out[k] = acc;
    }
}

// Matrix of the substitution t = shift + scale * s applied to power
// coefficients: (shift + scale*s)^i = sum_k C(i,k) scale^k shift^(i-k) s^k.
inline std::vector<std::vector<double>> power_compose_matrix(int degree, double shift,
                                                             double scale) {
    const int len = degree + 1;
    std::vector<std::vector<double>> m(static_cast<std::size_t>(len),
                                       std::vector<double>(static_cast<std::size_t>(len), 0.0));
    for (int i = 0; i < len; ++i) {
        double sk = 1.0;  // scale^k
        for (int k = 0; k <= i; ++k) {
            double sh = 1.0;  // shift^(i-k)
            for (int p = 0; p < i - k; ++p) sh *= shift;
            m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                binomial(i, k) * sk * sh;
            sk = (k == i) ? sk : sk * scale;
        }
    }
    return m;
}

// Column k holds the power-basis coefficients of T_k.
inline std::vector<std::vector<double>> cheb_to_power_matrix(int degree) {
    const int len = degree + 1;
    std::vector<std::vector<double>> p(static_cast<std::size_t>(len),
                                       std::vector<double>(static_cast<std::size_t>(len), 0.0));
    p[0][0] = 1.0;
    if (degree >= 1) p[1][1] = 1.0;
    for (int k = 1; k < degree; ++k) {
        // T_{k+1} = 2 t T_k - T_{k-1}
        for (int i = 0; i <= k; ++i)
            p[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(k + 1)] +=
                2.0 * p[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        for (int i = 0; i <= k - 1; ++i)
            p[static_cast<std::size_t>(i)][static_cast<std::size_t>(k + 1)] -=
                p[static_cast<std::size_t>(i)][static_cast<std::size_t>(k - 1)];
    }
    return p;
}

template <std::size_t D>
void cheb_line_to_power(const std::vector<std::vector<double>>& p, Vec<D>* line, int len) {
    std::vector<Vec<D>> out(static_cast<std::size_t>(len), Vec<D>{});
    for (int i = 0; i < len; ++i) {
        Vec<D> acc{};
        for (int k = i; k < len; ++k) {
            const double w = p[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            if (w != 0.0) acc = add(acc, scaled(line[k], w));
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    std::copy(out.begin(), out.end(), line);
}

// Triangular solve of P a = b (P upper triangular with P[k][k] = 2^(k-1)).
template <std::size_t D>
void power_line_to_cheb(const std::vector<std::vector<double>>& p, Vec<D>* line, int len) {
    std::vector<Vec<D>> a(line, line + len);
    std::vector<Vec<D>> out(static_cast<std::size_t>(len), Vec<D>{});
    for (int k = len - 1; k >= 1; --k) {
        const double diag = p[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        const Vec<D> t = scaled(a[static_cast<std::size_t>(k)], 1.0 / diag);
        out[static_cast<std::size_t>(k)] = t;
        for (int i = 0; i <= k; ++i) {
            const double w = p[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            if (w != 0.0)
                a[static_cast<std::size_t>(i)] = sub(a[static_cast<std::size_t>(i)], scaled(t, w));
        }
    }
    out[0] = a[0];
    std::copy(out.begin(), out.end(), line);
}

// Bernstein restriction of one coefficient line to the interval [a,b] of the
// unit parameter: out[k] is the blossom at (a,...,a, b,...,b) with k copies
// of b. Exact for any real a, b.
template <std::size_t D>
void bernstein_restrict_line(Vec<D>* line, int len, double a, double b) {
    const int n = len - 1;
    std::vector<Vec<D>> out(static_cast<std::size_t>(len));
    std::vector<Vec<D>> tmp(static_cast<std::size_t>(len));
    for (int k = 0; k <= n; ++k) {
        std::copy(line, line + len, tmp.begin());
        int cur = len;
        for (int r = 0; r < k; ++r, --cur)
            for (int i = 0; i + 1 < cur; ++i)
                tmp[static_cast<std::size_t>(i)] =
                    add(scaled(tmp[static_cast<std::size_t>(i)], 1.0 - b),
                        scaled(tmp[static_cast<std::size_t>(i + 1)], b));
        for (int r = k; r < n; ++r, --cur)
            for (int i = 0; i + 1 < cur; ++i)
                tmp[static_cast<std::size_t>(i)] =
                    add(scaled(tmp[static_cast<std::size_t>(i)], 1.0 - a),
                        scaled(tmp[static_cast<std::size_t>(i + 1)], a));
        out[static_cast<std::size_t>(k)] = tmp[0];
    }
    std::copy(out.begin(), out.end(), line);
}

}  // namespace detail

// Bivariate tensor-product polynomial sum_{i,j} c_ij phi_i(u) phi_j(v) with
// d-dimensional coefficients, d in {1,2,3}. Values are immutable once built;
// all operations return new polynomials.
template <std::size_t D>
class TensorPoly {
  public:
    TensorPoly(Basis basis, int deg_u, int deg_v)
        : basis_(basis), m_(deg_u), n_(deg_v),
          c_(static_cast<std::size_t>((deg_u + 1) * (deg_v + 1)), Vec<D>{}) {
        if (deg_u < 0 || deg_v < 0) throw std::invalid_argument("negative degree");
    }

    static TensorPoly constant(Basis basis, int deg_u, int deg_v, const Vec<D>& value) {
        TensorPoly p(basis, deg_u, deg_v);
        if (basis == Basis::Bernstein) {
            for (auto& c : p.c_) c = value;
        } else {
            p.at(0, 0) = value;
        }
        return p;
    }

    Basis basis() const { return basis_; }
    int deg_u() const { return m_; }
    int deg_v() const { return n_; }

    Vec<D>& at(int i, int j) { return c_[idx(i, j)]; }
    const Vec<D>& at(int i, int j) const { return c_[idx(i, j)]; }

    const std::vector<Vec<D>>& coeffs() const { return c_; }

    Vec<D> eval(const Vec2& x) const {
        const double u = x[0], v = x[1];
        switch (basis_) {
            case Basis::Power: {
                Vec<D> acc{};
                for (int i = m_; i >= 0; --i) {
                    Vec<D> row = at(i, n_);
                    for (int j = n_ - 1; j >= 0; --j) row = add(scaled(row, v), at(i, j));
                    acc = add(scaled(acc, u), row);
                }
                return acc;
            }
            case Basis::Chebyshev: {
                std::vector<Vec<D>> rows(static_cast<std::size_t>(m_) + 1);
                for (int i = 0; i <= m_; ++i) rows[static_cast<std::size_t>(i)] = clenshaw_row(i, v);
                return clenshaw(rows.data(), m_, u);
            }
            case Basis::Bernstein: {
                std::vector<double> bu(static_cast<std::size_t>(m_) + 1);
                std::vector<double> bv(static_cast<std::size_t>(n_) + 1);
                basis_values(Basis::Bernstein, m_, u, bu.data());
                basis_values(Basis::Bernstein, n_, v, bv.data());
                Vec<D> acc{};
                for (int i = 0; i <= m_; ++i) {
                    Vec<D> row{};
                    for (int j = 0; j <= n_; ++j)
                        row = add(row, scaled(at(i, j), bv[static_cast<std::size_t>(j)]));
                    acc = add(acc, scaled(row, bu[static_cast<std::size_t>(i)]));
                }
                return acc;
            }
        }
        return Vec<D>{};
    }

    // d/du or d/dv in the same basis; the degree along the axis drops by one
    // (constants map to the zero polynomial of degree 0).
    TensorPoly derivative(Axis axis) const {
        const int deg = axis == Axis::U ? m_ : n_;
        if (deg == 0) {
            return TensorPoly(basis_, axis == Axis::U ? 0 : m_, axis == Axis::U ? n_ : 0);
        }
        TensorPoly out(basis_, axis == Axis::U ? m_ - 1 : m_, axis == Axis::U ? n_ : n_ - 1);
        const int other = axis == Axis::U ? n_ : m_;
        std::vector<Vec<D>> line(static_cast<std::size_t>(deg) + 1);
        std::vector<Vec<D>> dline(static_cast<std::size_t>(deg));
        for (int o = 0; o <= other; ++o) {
            for (int k = 0; k <= deg; ++k) line[static_cast<std::size_t>(k)] = get_line(axis, k, o);
            derive_line(line.data(), deg, dline.data());
            for (int k = 0; k < deg; ++k) out.set_line(axis, k, o, dline[static_cast<std::size_t>(k)]);
        }
        return out;
    }

    // Same-basis polynomial p_hat with p_hat(x_hat) = p(x) under the affine
    // map sending the natural domain [l,h]^2 onto the box. Exact in exact
    // arithmetic; valid for boxes outside the natural domain as well.
    TensorPoly reparametrized(const Box2& box) const {
        TensorPoly out = *this;
        out.reparam_axis(Axis::U, box.lo[0], box.hi[0]);
        out.reparam_axis(Axis::V, box.lo[1], box.hi[1]);
        return out;
    }

    TensorPoly reparametrized(const Patch& patch) const {
        return reparametrized(Box2::of_patch(patch));
    }

    TensorPoly<1> component(std::size_t k) const {
        TensorPoly<1> out(basis_, m_, n_);
        for (int i = 0; i <= m_; ++i)
            for (int j = 0; j <= n_; ++j) out.at(i, j) = Vec<1>{at(i, j)[k]};
        return out;
    }

  private:
    template <std::size_t>
    friend class TensorPoly;

    std::size_t idx(int i, int j) const {
        assert(i >= 0 && i <= m_ && j >= 0 && j <= n_);
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ + 1) +
               static_cast<std::size_t>(j);
    }

    Vec<D> get_line(Axis axis, int k, int o) const {
        return axis == Axis::U ? at(k, o) : at(o, k);
    }
    void set_line(Axis axis, int k, int o, const Vec<D>& v) {
        (axis == Axis::U ? at(k, o) : at(o, k)) = v;
    }

    static Vec<D> clenshaw(const Vec<D>* a, int n, double t) {
        Vec<D> b1{}, b2{};
        for (int k = n; k >= 1; --k) {
            Vec<D> b = add(a[k], sub(scaled(b1, 2.0 * t), b2));
            b2 = b1;
            b1 = b;
        }
        return add(a[0], sub(scaled(b1, t), b2));
    }

    Vec<D> clenshaw_row(int i, double v) const {
        std::vector<Vec<D>> a(static_cast<std::size_t>(n_) + 1);
        for (int j = 0; j <= n_; ++j) a[static_cast<std::size_t>(j)] = at(i, j);
        return clenshaw(a.data(), n_, v);
    }

    void derive_line(const Vec<D>* in, int deg, Vec<D>* out) const {
        switch (basis_) {
            case Basis::Power:
                for (int k = 0; k < deg; ++k) out[k] = scaled(in[k + 1], double(k + 1));
                break;
            case Basis::Bernstein:
                for (int k = 0; k < deg; ++k)
                    out[k] = scaled(sub(in[k + 1], in[k]), double(deg));
                break;
            case Basis::Chebyshev: {
                // b_k = b_{k+2} + 2(k+1) a_{k+1}, then halve b_0.
                Vec<D> bk1{}, bk2{};
                for (int k = deg - 1; k >= 0; --k) {
                    out[k] = add(bk2, scaled(in[k + 1], 2.0 * double(k + 1)));
                    bk2 = bk1;
                    bk1 = out[k];
                }
                out[0] = scaled(out[0], 0.5);
                break;
            }
        }
    }

    void reparam_axis(Axis axis, double a, double b) {
        const int deg = axis == Axis::U ? m_ : n_;
        const int other = axis == Axis::U ? n_ : m_;
        const int len = deg + 1;
        std::vector<Vec<D>> line(static_cast<std::size_t>(len));
        std::vector<Vec<D>> tmp(static_cast<std::size_t>(len));

        std::vector<std::vector<double>> compose, c2p;
        if (basis_ != Basis::Bernstein) {
            // Natural domain [-1,1] -> [a,b].
            compose = detail::power_compose_matrix(deg, 0.5 * (a + b), 0.5 * (b - a));
            if (basis_ == Basis::Chebyshev) c2p = detail::cheb_to_power_matrix(deg);
        }

        for (int o = 0; o <= other; ++o) {
            for (int k = 0; k < len; ++k) line[static_cast<std::size_t>(k)] = get_line(axis, k, o);
            switch (basis_) {
                case Basis::Bernstein:
                    detail::bernstein_restrict_line(line.data(), len, a, b);
                    break;
                case Basis::Power:
                    detail::apply_line_matrix(compose, line.data(), tmp.data(), len);
                    std::copy(tmp.begin(), tmp.end(), line.begin());
                    break;
                case Basis::Chebyshev:
                    detail::cheb_line_to_power(c2p, line.data(), len);
                    detail::apply_line_matrix(compose, line.data(), tmp.data(), len);
                    std::copy(tmp.begin(), tmp.end(), line.begin());
                    detail::power_line_to_cheb(c2p, line.data(), len);
                    break;
            }
            for (int k = 0; k < len; ++k) set_line(axis, k, o, line[static_cast<std::size_t>(k)]);
        }
    }

    Basis basis_;
    int m_, n_;
    std::vector<Vec<D>> c_;
};

// A * p + b with the offset folded into the basis's constant representation.
template <std::size_t DO, std::size_t DI>
TensorPoly<DO> linear_combine(const TensorPoly<DI>& p,
                              const std::array<std::array<double, DI>, DO>& a,
                              const Vec<DO>& b = Vec<DO>{}) {
    TensorPoly<DO> out(p.basis(), p.deg_u(), p.deg_v());
    for (int i = 0; i <= p.deg_u(); ++i) {
        for (int j = 0; j <= p.deg_v(); ++j) {
            Vec<DO> acc{};
            for (std::size_t r = 0; r < DO; ++r)
                for (std::size_t c = 0; c < DI; ++c) acc[r] += a[r][c] * p.at(i, j)[c];
            out.at(i, j) = acc;
        }
    }
    if (p.basis() == Basis::Bernstein) {
        for (int i = 0; i <= p.deg_u(); ++i)
            for (int j = 0; j <= p.deg_v(); ++j) out.at(i, j) = add(out.at(i, j), b);
    } else {
        out.at(0, 0) = add(out.at(0, 0), b);
    }
    return out;
}

inline TensorPoly<2> linear_combine(const TensorPoly<2>& p, const Mat2& a,
                                    const Vec2& b = Vec2{}) {
    return linear_combine<2, 2>(p, {{{a.m00, a.m01}, {a.m10, a.m11}}}, b);
}

// Stacks two scalar polynomials sharing basis and degrees into a system.
inline TensorPoly<2> make_system(const TensorPoly<1>& f1, const TensorPoly<1>& f2) {
    if (f1.basis() != f2.basis() || f1.deg_u() != f2.deg_u() || f1.deg_v() != f2.deg_v())
        throw std::invalid_argument("make_system: mismatched basis or degrees");
    TensorPoly<2> out(f1.basis(), f1.deg_u(), f1.deg_v());
    for (int i = 0; i <= f1.deg_u(); ++i)
        for (int j = 0; j <= f1.deg_v(); ++j)
            out.at(i, j) = {f1.at(i, j)[0], f2.at(i, j)[0]};
    return out;
}

// Jacobian [df_i/dx_j] of a 2-vector polynomial at a point.
inline Mat2 jacobian(const TensorPoly<2>& p, const Vec2& x) {
    const Vec2 du = p.derivative(Axis::U).eval(x);
    const Vec2 dv = p.derivative(Axis::V).eval(x);
    return Mat2{du[0], dv[0], du[1], dv[1]};
}

}  // namespace kts
