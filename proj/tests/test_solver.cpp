#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kts/solver.hpp"
#include "kts/verify.hpp"
#include "test_helpers.hpp"

using namespace kts;

TEST_CASE("exclusion test basics") {
    TensorPoly<2> far(Basis::Power, 1, 1);
    far.at(0, 0) = {-10.0, -10.0};
    far.at(1, 0) = {1.0, 0.0};
    far.at(0, 1) = {0.0, 1.0};
    CHECK(exclusion_test(far, Patch{{0.5, 0.5}, 0.5}));
    CHECK(exclusion_test(far, Patch{{0.25, 0.75}, 0.125}));

    // A patch containing a zero can never be excluded.
    const TensorPoly<2> f = ktest::border_zero_system();
    CHECK_FALSE(exclusion_test(f, Patch{{0.5, 0.8}, 0.1}));
    CHECK_FALSE(exclusion_test(f, Patch{{0.5, 0.5}, 0.5}));
}

TEST_CASE("ill-conditioned fixture defeats exclusion at large radius") {
    // Radius .4 exceeds the analytic threshold ((v0)^2+2 eps v0+2 eps^2)/(2(v0+eps))
    // = .0625, so the bounding polygon still straddles the origin.
    const TensorPoly<2> f = fixture_illconditioned(0.5, 0.05, 0.05);
    CHECK_FALSE(exclusion_test(f, Patch{{0.5, 0.05}, 0.4}));
}

TEST_CASE("strictly positive system is excluded at the root") {
    TensorPoly<2> f(Basis::Power, 1, 1);
    f.at(0, 0) = {2.0, 2.0};
    f.at(1, 0) = {1.0, 0.0};
    f.at(0, 1) = {0.0, 1.0};
    const SolveResult res = solve(f);
    CHECK(res.zeros.empty());
    CHECK(res.complete());
    CHECK(res.stats.patches_examined == 1);
    CHECK(res.trace[0].outcome == PatchOutcome::Excluded);
}

TEST_CASE("system with its only zero far outside terminates in a few patches") {
    // (u+1, v+1): over the root patch the reparametrized range is [1,2]^2,
    // so the root is excluded even though the raw coefficient zonogon
    // touches the origin.
    TensorPoly<2> f(Basis::Power, 1, 1);
    f.at(0, 0) = {1.0, 1.0};
    f.at(1, 0) = {1.0, 0.0};
    f.at(0, 1) = {0.0, 1.0};
    const SolveResult res = solve(f);
    CHECK(res.zeros.empty());
    CHECK(res.complete());
    CHECK(res.stats.patches_examined == 1);
    CHECK(res.trace[0].outcome == PatchOutcome::Excluded);
}

TEST_CASE("border zero is found without a min-width bailout") {
    const TensorPoly<2> f = ktest::border_zero_system();
    const SolveResult res = solve(f);
    REQUIRE(res.zeros.size() == 1);
    CHECK(dist_inf(res.zeros[0], {0.5, 0.8}) <= 1e-10);
    CHECK(res.complete());
    CHECK(norm_inf(f.eval(res.zeros[0])) <= 1e-10);
    CHECK(res.stats.smallest_width > 1e-4);  // nowhere near the 1e-6 guard
}

TEST_CASE("reference instance: two zeros at the documented separation") {
    const TensorPoly<2> f = ktest::reference_instance();
    const SolveResult res = solve(f);
    REQUIRE(res.zeros.size() == 2);
    CHECK(res.complete());
    CHECK(dist_inf(res.zeros[0], res.zeros[1]) == Catch::Approx(0.4196).margin(1e-3));
    for (const Vec2& z : res.zeros) CHECK(norm_inf(f.eval(z)) <= 1e-10);
    CHECK(res.stats.patches_examined <= 116);  // 4x the benchmark count
    CHECK(res.stats.smallest_width <= 0.25);
    // The benchmark run needs 3 Newton iterations; allow arithmetic slack.
    CHECK(res.stats.max_newton_iterations <= 6);
    for (const PassEvent& ev : res.pass_events)
        if (ev.newton.converged) CHECK(ev.newton.iterations <= 6);
}

TEST_CASE("solver matches the brute-force oracle on random instances") {
    for (Basis b : {Basis::Power, Basis::Bernstein, Basis::Chebyshev}) {
        for (int inst = 0; inst < 6; ++inst) {
            const int m = 2 + inst % 3, n = 2 + (inst / 2) % 3;
            const TensorPoly<2> f = random_system(30000 + 7 * inst, b, m, n);
            const SolveResult res = solve(f);
            if (!res.complete()) continue;
            const std::vector<Vec2> oracle = brute_zeros(f, 256);
            INFO("basis " << basis_name(b) << " instance " << inst);
            CHECK(ktest::same_zero_set(res.zeros, oracle, 1e-6));
        }
    }
}

TEST_CASE("patch widths are processed in non-increasing order") {
    const SolveResult res = solve(ktest::reference_instance());
    double prev = 2.0;
    for (const PatchTrace& t : res.trace) {
        CHECK(2.0 * t.radius <= prev + 1e-15);
        prev = 2.0 * t.radius;
    }
}

TEST_CASE("patch budget yields an honest partial result") {
    const SolveConfig config{.max_patches = 5};
    const SolveResult res = solve(ktest::reference_instance(), config);
    CHECK(res.budget_exhausted);
    CHECK_FALSE(res.complete());
    CHECK(res.stats.patches_examined <= 5);
    CHECK_FALSE(res.unresolved.empty());
}

TEST_CASE("reported zeros are pairwise separated") {
    const SolveConfig config;
    const SolveResult res = solve(ktest::cubic_cross_system(), config);
    REQUIRE(res.complete());
    REQUIRE(res.zeros.size() == 6);  // {.5,.7,1} x {.2,.5}
    for (std::size_t i = 0; i < res.zeros.size(); ++i)
        for (std::size_t j = i + 1; j < res.zeros.size(); ++j)
            CHECK(dist_inf(res.zeros[i], res.zeros[j]) > config.duplicate_tol);
}

TEST_CASE("double zero hits the min-width guard and is reported unresolved") {
    TensorPoly<2> f(Basis::Power, 2, 1);  // ((u-.5)^2, v-.5)
    f.at(2, 0) = {1.0, 0.0};
    f.at(1, 0) = {-1.0, 0.0};
    f.at(0, 0) = {0.25, -0.5};
    f.at(0, 1) = {0.0, 1.0};
    const SolveConfig config{.min_patch_width = 1e-3};
    const SolveResult res = solve(f, config);
    CHECK_FALSE(res.complete());
    CHECK_FALSE(res.budget_exhausted);
    for (const Vec2& z : res.zeros) CHECK(norm_inf(f.eval(z)) <= config.zero_residual_tol);
    for (const Patch& p : res.unresolved) CHECK(p.width() < 1e-3);
}

TEST_CASE("ill-conditioned fixture forces subdivision to the eps scale") {
    const double eps = 0.01;
    const TensorPoly<2> f = fixture_illconditioned(0.5, 0.05, eps);
    const SolveResult res = solve(f);
    CHECK(res.zeros.empty());  // both real zeros sit at v = -eps
    CHECK(res.complete());
    CHECK(res.stats.smallest_width <= 4.0 * eps);
}

TEST_CASE("left-multiplying by a nonsingular matrix preserves the trace") {
    const TensorPoly<2> f = ktest::reference_instance();
    const SolveResult base = solve(f);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int rep = 0; rep < 3; ++rep) {
        Mat2 a{coeff(rng), coeff(rng), coeff(rng), coeff(rng)};
        if (std::abs(a.det()) < 0.1) a.m00 += 2.0;
        const SolveResult scaled_run = solve(linear_combine(f, a));
        REQUIRE(scaled_run.trace.size() == base.trace.size());
        for (std::size_t i = 0; i < base.trace.size(); ++i) {
            CHECK(scaled_run.trace[i].center == base.trace[i].center);
            CHECK(scaled_run.trace[i].radius == base.trace[i].radius);
            CHECK(scaled_run.trace[i].outcome == base.trace[i].outcome);
        }
        REQUIRE(scaled_run.zeros.size() == base.zeros.size());
        for (std::size_t i = 0; i < base.zeros.size(); ++i)
            CHECK(dist_inf(scaled_run.zeros[i], base.zeros[i]) <= 1e-9);
    }
}
