#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kts/intersect.hpp"
#include "kts/verify.hpp"
#include "test_helpers.hpp"

using namespace kts;

namespace {

// Planar patch f(u,v) = (u, v, 0) in the power basis.
TensorPoly<3> planar_patch() {
    TensorPoly<3> s(Basis::Power, 1, 1);
    s.at(1, 0) = {1.0, 0.0, 0.0};
    s.at(0, 1) = {0.0, 1.0, 0.0};
    return s;
}

}  // namespace

TEST_CASE("pivot axis picks the largest component, ties to the lowest index") {
    CHECK(pivot_axis({0.0, 0.0, 1.0}) == 2);
    CHECK(pivot_axis({2.0, -2.0, 1.0}) == 0);
    CHECK(pivot_axis({1.0, -2.0, 2.0}) == 1);
    CHECK_THROWS_AS(pivot_axis({0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("reduction of a planar patch against a vertical line") {
    const TensorPoly<3> s = planar_patch();
    const Line3 line{{0.3, 0.7, -1.0}, {0.0, 0.0, 1.0}};
    const TensorPoly<2> red = reduce(s, line);
    std::mt19937_64 rng(8);
    for (int k = 0; k < 10; ++k) {
        const Vec2 x = ktest::random_point(rng);
        const Vec2 v = red.eval(x);
        CHECK(v[0] == Catch::Approx(x[0] - 0.3).margin(1e-15));
        CHECK(v[1] == Catch::Approx(x[1] - 0.7).margin(1e-15));
    }

    const IntersectResult res = intersect(s, line);
    REQUIRE(res.intersections.size() == 1);
    CHECK(res.complete());
    const Intersection& hit = res.intersections[0];
    CHECK(dist_inf(hit.uv, {0.3, 0.7}) <= 1e-10);
    CHECK(hit.t == Catch::Approx(1.0).margin(1e-10));
    CHECK(norm_inf(sub(hit.point, Vec3{0.3, 0.7, 0.0})) <= 1e-10);
}

TEST_CASE("axis-aligned direction drops the pivot component") {
    const TensorPoly<3> s = random_surface(61, Basis::Power, 2, 2);
    const Line3 line{{0.1, -0.4, 0.2}, {1.0, 0.0, 0.0}};
    const TensorPoly<2> red = reduce(s, line);
    std::mt19937_64 rng(9);
    for (int k = 0; k < 10; ++k) {
        const Vec2 x = ktest::random_point(rng);
        const Vec3 sv = s.eval(x);
        const Vec2 rv = red.eval(x);
        CHECK(rv[0] == Catch::Approx(sv[1] - line.p[1]).margin(1e-12));
        CHECK(rv[1] == Catch::Approx(sv[2] - line.p[2]).margin(1e-12));
    }
}

TEST_CASE("recover_t solves the pivot row") {
    const TensorPoly<3> s = planar_patch();
    CHECK(recover_t(s, {{0.3, 0.7, -1.0}, {0.0, 0.0, 1.0}}, {0.3, 0.7}) ==
          Catch::Approx(1.0));
    TensorPoly<3> flat = planar_patch();
    flat.at(0, 0) = {4.0, 0.0, 0.0};  // f1 = u + 4
    CHECK(recover_t(flat, {{0.5, 0.0, 0.0}, {2.0, 0.0, 0.0}}, {0.5, 0.5}) ==
          Catch::Approx(2.0));
}

TEST_CASE("random reductions are consistent with the full 3d equation") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> dir(-1.0, 1.0);
    for (int inst = 0; inst < 5; ++inst) {
        const TensorPoly<3> s = random_surface(5000 + inst, Basis::Bernstein, 3, 3);
        const Line3 line{{dir(rng), dir(rng), dir(rng)}, {dir(rng), dir(rng), dir(rng)}};
        if (norm_inf(line.d) < 0.1) continue;
        const TensorPoly<2> red = reduce(s, line);
        const std::vector<Vec2> zeros = brute_zeros(red, 128);
        for (const Vec2& uv : zeros) {
            const double t = recover_t(s, line, uv);
            const Vec3 expected = add(line.p, scaled(line.d, t));
            CHECK(dist_inf(s.eval(uv), expected) <= 1e-8);
        }
    }
}

TEST_CASE("line missing the surface yields a certified empty result") {
    const TensorPoly<3> s = planar_patch();
    const Line3 line{{0.0, 0.0, 10.0}, {1.0, 0.0, 0.0}};  // parallel, offset in z
    const IntersectResult res = intersect(s, line);
    CHECK(res.intersections.empty());
    CHECK(res.complete());
}

TEST_CASE("tied directions produce the same intersections after role swap") {
    std::mt19937_64 rng(321);
    for (int inst = 0; inst < 3; ++inst) {
        const TensorPoly<3> s = random_surface(6200 + inst, Basis::Bernstein, 2, 2);
        const Line3 line{{0.2, -0.1, 0.3}, {0.9, 0.9, 0.4}};  // |d1| == |d2|

        // Swap the first two range axes of both surface and line; the pivot
        // then lands on the other member of the tie.
        TensorPoly<3> swapped(s.basis(), s.deg_u(), s.deg_v());
        for (int i = 0; i <= s.deg_u(); ++i)
            for (int j = 0; j <= s.deg_v(); ++j) {
                const Vec3 c = s.at(i, j);
                swapped.at(i, j) = {c[1], c[0], c[2]};
            }
        const Line3 swapped_line{{line.p[1], line.p[0], line.p[2]},
                                 {line.d[1], line.d[0], line.d[2]}};

        const IntersectResult a = intersect(s, line);
        const IntersectResult b = intersect(swapped, swapped_line);
        if (!a.complete() || !b.complete()) continue;
        REQUIRE(a.intersections.size() == b.intersections.size());
        for (std::size_t i = 0; i < a.intersections.size(); ++i) {
            CHECK(dist_inf(a.intersections[i].uv, b.intersections[i].uv) <= 1e-6);
            CHECK(a.intersections[i].t == Catch::Approx(b.intersections[i].t).margin(1e-6));
        }
    }
}

TEST_CASE("surface whose reduction is the reference instance intersects twice") {
    const TensorPoly<2> ref = ktest::reference_instance();
    TensorPoly<3> s(Basis::Bernstein, 2, 2);
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j) {
            const Vec2 c = ref.at(i, j);
            s.at(i, j) = {double(i) / 2.0, c[0], c[1]};  // f1 = u
        }
    const Line3 line{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
    const IntersectResult res = intersect(s, line);
    REQUIRE(res.complete());
    REQUIRE(res.intersections.size() == 2);
    for (const Intersection& hit : res.intersections) {
        CHECK(hit.residual <= 1e-8);
        CHECK(hit.t == Catch::Approx(hit.uv[0]).margin(1e-9));
    }
}
