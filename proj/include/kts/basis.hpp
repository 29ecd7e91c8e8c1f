#pragma once

#include <cassert>
#include <stdexcept>
#include <string>
#include <vector>

namespace kts {

// Univariate polynomial bases the solver understands. Each basis carries a
// natural domain [l,h] on which its bounding-polygon construction is valid:
// [0,1] for Bernstein, [-1,1] for power and Chebyshev.
enum class Basis { Power, Bernstein, Chebyshev };

inline double domain_low(Basis b) { return b == Basis::Bernstein ? 0.0 : -1.0; }
inline double domain_high(Basis) { return 1.0; }

inline const char* basis_name(Basis b) {
    switch (b) {
        case Basis::Power: return "power";
        case Basis::Bernstein: return "bernstein";
        case Basis::Chebyshev: return "chebyshev";
    }
    return "?";
}

inline Basis basis_from_name(const std::string& s) {
    if (s == "power") return Basis::Power;
    if (s == "bernstein") return Basis::Bernstein;
    if (s == "chebyshev") return Basis::Chebyshev;
    throw std::invalid_argument("unknown basis: " + s);
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

// Fills out[0..degree] with phi_k(t). Valid for any real t; the basis
// functions are entire polynomials even outside the natural domain.
inline void basis_values(Basis b, int degree, double t, double* out) {
    assert(degree >= 0);
    switch (b) {
        case Basis::Power: {
            double p = 1.0;
            for (int k = 0; k <= degree; ++k) {
                out[k] = p;
                p *= t;
            }
            break;
        }
        case Basis::Bernstein: {
            // Z_{k,n}(t) = C(n,k) t^k (1-t)^(n-k) via two running powers.
            double p = 1.0;
            for (int k = 0; k <= degree; ++k) {
                out[k] = p * binomial(degree, k);
                p *= t;
            }
            p = 1.0;
            for (int k = degree; k >= 0; --k) {
                out[k] *= p;
                p *= 1.0 - t;
            }
            break;
        }
        case Basis::Chebyshev: {
            out[0] = 1.0;
            if (degree >= 1) out[1] = t;
            for (int k = 1; k < degree; ++k) out[k + 1] = 2.0 * t * out[k] - out[k - 1];
            break;
        }
    }
}

inline std::vector<double> basis_values(Basis b, int degree, double t) {
    std::vector<double> v(static_cast<std::size_t>(degree) + 1);
    basis_values(b, degree, t, v.data());
    return v;
}

}  // namespace kts
