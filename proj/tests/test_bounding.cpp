#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kts/bounding.hpp"
#include "kts/verify.hpp"
#include "test_helpers.hpp"

using namespace kts;

TEST_CASE("bernstein hull of a bilinear patch is the control square") {
    TensorPoly<2> f(Basis::Bernstein, 1, 1);
    f.at(0, 0) = {0.0, 0.0};
    f.at(1, 0) = {1.0, 0.0};
    f.at(0, 1) = {0.0, 1.0};
    f.at(1, 1) = {1.0, 1.0};
    const ConvexPolygon poly = bounding_polygon(f);
    REQUIRE(poly.vertices.size() == 4);
    CHECK_FALSE(poly.degenerate());
    CHECK(contains_origin(poly));  // corner (0,0) on the boundary
}

TEST_CASE("zonogon with no generators degenerates to the center") {
    TensorPoly<2> f(Basis::Power, 2, 2);
    f.at(0, 0) = {5.0, 5.0};
    const ConvexPolygon poly = bounding_polygon(f);
    REQUIRE(poly.vertices.size() == 1);
    CHECK(poly.degenerate());
    CHECK(poly.vertices[0][0] == 5.0);
    CHECK_FALSE(contains_origin(poly));
}

TEST_CASE("zonogon of (u, v) is the square [-1,1]^2") {
    TensorPoly<2> f(Basis::Power, 1, 1);
    f.at(1, 0) = {1.0, 0.0};
    f.at(0, 1) = {0.0, 1.0};
    const ConvexPolygon poly = bounding_polygon(f);
    REQUIRE(poly.vertices.size() == 4);
    for (const Vec2& v : poly.vertices) {
        CHECK(std::abs(std::abs(v[0]) - 1.0) <= 1e-15);
        CHECK(std::abs(std::abs(v[1]) - 1.0) <= 1e-15);
    }
    CHECK(contains_origin(poly));
}

TEST_CASE("origin membership is closed") {
    CHECK_FALSE(contains_origin({{{1, 1}, {2, 1}, {1, 2}}}));
    CHECK(contains_origin({{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}}));
    CHECK(contains_origin({{{-1, 0}, {1, 0}}}));  // on a degenerate segment
}

TEST_CASE("scalar ranges") {
    CHECK(scalar_range(TensorPoly<1>::constant(Basis::Power, 1, 1, {2.5})).lo == 2.5);
    CHECK(scalar_range(TensorPoly<1>::constant(Basis::Power, 1, 1, {2.5})).hi == 2.5);

    TensorPoly<1> t11(Basis::Chebyshev, 1, 1);
    t11.at(1, 1) = {1.0};
    const Interval iv = scalar_range(t11);
    CHECK(iv.lo == -1.0);
    CHECK(iv.hi == 1.0);

    for (Basis b : {Basis::Power, Basis::Bernstein, Basis::Chebyshev}) {
        for (int inst = 0; inst < 10; ++inst) {
            const TensorPoly<1> p = random_poly<1>(900 + inst, b, 2, 2);
            const Interval r = scalar_range(p);
            const double lo = domain_low(b), hi = domain_high(b);
            for (int a = 0; a <= 100; ++a) {
                for (int c = 0; c <= 100; ++c) {
                    const double u = lo + (hi - lo) * a / 100.0;
                    const double v = lo + (hi - lo) * c / 100.0;
                    const double val = p.eval({u, v})[0];
                    CHECK(val >= r.lo - 1e-12);
                    CHECK(val <= r.hi + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("theta matches the closed forms") {
    CHECK(theta(Basis::Chebyshev, 3, 3) == 32.0);
    CHECK(theta(Basis::Power, 1, 1) == 128.0);
    CHECK(theta(Basis::Bernstein, 1, 1) == Catch::Approx(4.0));
    CHECK(theta(Basis::Bernstein, 2, 2) == Catch::Approx(36.0));
}

TEST_CASE("gamma_factor range and monotonicity") {
    CHECK(gamma_factor(1.0) == Catch::Approx((std::sqrt(5.0) + 2.0) / 4.0).epsilon(1e-12));
    CHECK(gamma_factor(1.0) == Catch::Approx(1.059017).margin(1e-6));
    double prev = gamma_factor(1.0);
    for (double t = 2.0; t <= 1024.0; t *= 2.0) {
        const double g = gamma_factor(t);
        CHECK(g < prev);
        CHECK(g > 1.0);
        prev = g;
    }
    const double g32 = gamma_factor(32.0);
    CHECK(g32 > 1.0);
    CHECK(g32 < 1.0591);
    CHECK(1.0 - 1.0 / g32 >= 1.0 / (18.0 * 32.0));
    CHECK_THROWS_AS(gamma_factor(0.5), std::invalid_argument);
}

TEST_CASE("bounding polygons contain sampled values") {
    std::mt19937_64 rng(314);
    for (Basis b : {Basis::Power, Basis::Bernstein, Basis::Chebyshev}) {
        const double lo = domain_low(b), hi = domain_high(b);
        for (int inst = 0; inst < 50; ++inst) {
            const TensorPoly<2> f = random_system(7000 + inst, b, 2 + inst % 3, 2 + (inst / 3) % 3);
            const ConvexPolygon poly = bounding_polygon(f);
            CHECK(poly.vertices.size() <=
                  2 * static_cast<std::size_t>((f.deg_u() + 1) * (f.deg_v() + 1)));
            for (int s = 0; s < 200; ++s) {
                const Vec2 x = ktest::random_point(rng, {{lo, lo}, {hi, hi}});
                const Vec2 val = f.eval(x);
                // Shifting the polygon by -value must keep the origin inside.
                ConvexPolygon shifted = poly;
                for (Vec2& v : shifted.vertices) v = sub(v, val);
                CHECK(contains_origin(shifted));
            }
        }
    }
}

TEST_CASE("theta bounds every polygon vertex") {
    for (Basis b : {Basis::Power, Basis::Bernstein, Basis::Chebyshev}) {
        const double lo = domain_low(b), hi = domain_high(b);
        for (int inst = 0; inst < 10; ++inst) {
            const int m = 2 + inst % 2, n = 2 + (inst / 2) % 2;
            const TensorPoly<2> f = random_system(8100 + inst, b, m, n);
            double fmax = 0.0;
            for (int a = 0; a <= 200; ++a)
                for (int c = 0; c <= 200; ++c)
                    fmax = std::max(fmax, norm_inf(f.eval({lo + (hi - lo) * a / 200.0,
                                                           lo + (hi - lo) * c / 200.0})));
            const double bound = theta(b, m, n) * fmax + 1e-9;
            for (const Vec2& v : bounding_polygon(f).vertices) CHECK(norm_inf(v) <= bound);
        }
    }
}

TEST_CASE("bounding polygon is affinely invariant") {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (Basis b : {Basis::Power, Basis::Bernstein, Basis::Chebyshev}) {
        for (int inst = 0; inst < 5; ++inst) {
            const TensorPoly<2> f = random_system(500 + inst, b, 2, 2);
            Mat2 a{coeff(rng), coeff(rng), coeff(rng), coeff(rng)};
            if (std::abs(a.det()) < 0.1) a.m00 += 1.0;
            const Vec2 offset{coeff(rng), coeff(rng)};

            const ConvexPolygon direct = bounding_polygon(linear_combine(f, a, offset));
            ConvexPolygon mapped = bounding_polygon(f);
            for (Vec2& v : mapped.vertices) v = add(a.apply(v), offset);

            REQUIRE(direct.vertices.size() == mapped.vertices.size());
            for (const Vec2& v : mapped.vertices) {
                double best = 1e300;
                for (const Vec2& w : direct.vertices) best = std::min(best, dist_inf(v, w));
                CHECK(best <= 1e-10);
            }
        }
    }
}
