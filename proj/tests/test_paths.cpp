#include <catch2/catch_amalgamated.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "symindex/random_paths.hpp"
#include "symindex/symplectic_path.hpp"

using namespace symindex;

TEST_CASE("coefficient path basics") {
    CoefficientPath B = CoefficientPath::constant(Mat::Identity(2, 2), 1.0);
    REQUIRE(B.n() == 1);
    REQUIRE(B.tau() == 1.0);
    REQUIRE((B.value(0.37) - Mat::Identity(2, 2)).norm() == 0.0);
    REQUIRE(B.satisfies_b1());

    Mat asym(2, 2);
    asym << 0, 1, 0, 0;
    REQUIRE_THROWS_AS(CoefficientPath::constant(asym, 1.0), ValidationError);

    Mat offdiag(2, 2);
    offdiag << 0, 1, 1, 0;
    CoefficientPath C = CoefficientPath::constant(offdiag, 1.0);
    REQUIRE_FALSE(C.satisfies_b1());
}

TEST_CASE("fundamental solution against closed forms") {
    // B = I: gamma(t) = exp(t J) is a rotation
    CoefficientPath B = CoefficientPath::constant(Mat::Identity(2, 2), 2.0 * M_PI);
    SymplecticPath g = fundamental_solution(B, 2048);
    double err = 0.0;
    for (std::size_t i = 0; i < g.grid().size(); ++i)
        err = std::max(err, (g.samples()[i] - rotation_J(1, g.grid()[i])).norm());
    REQUIRE(err < 1e-8);

    // B = 0: gamma stays at the identity
    CoefficientPath Z = CoefficientPath::constant(Mat::Zero(2, 2), 1.0);
    SymplecticPath gz = fundamental_solution(Z, 128);
    for (const Mat& s : gz.samples()) REQUIRE((s - Mat::Identity(2, 2)).norm() < 1e-14);

    // constant B: endpoint matches the dense matrix exponential oracle
    Mat Bc(2, 2);
    Bc << 1, 0, 0, 0;
    CoefficientPath Bp = CoefficientPath::constant(Bc, 1.0);
    SymplecticPath gb = fundamental_solution(Bp, 2048);
    Mat oracle = (standard_J(1) * Bc).exp();
    REQUIRE((gb.endpoint() - oracle).norm() < 1e-10);

    // drift invariant: every sample stays on the group
    Rng rng(11);
    CoefficientPath Br = random_b1_path(rng, 2);
    SymplecticPath gr = fundamental_solution(Br);
    const Mat J = standard_J(2);
    for (const Mat& s : gr.samples()) REQUIRE(symplecticity_defect(s, J) < 1e-7);
}

TEST_CASE("fundamental solution flow property") {
    Rng rng(13);
    CoefficientPath B = random_b1_path(rng, 1);
    SymplecticPath g = fundamental_solution(B, 4096);
    // restart the integration at an interior sample
    const std::size_t mid = g.grid().size() / 2;
    Mat restart = g.samples()[mid];
    const Mat J = standard_J(1);
    Mat acc = restart;
    const auto& grid = g.grid();
    for (std::size_t i = mid; i + 1 < grid.size(); ++i)
        acc = detail::rk4_step(J, B, acc, grid[i], grid[i + 1] - grid[i]);
    REQUIRE((acc - g.endpoint()).norm() < 1e-8);
}

TEST_CASE("step preconditions") {
    CoefficientPath B = CoefficientPath::constant(Mat::Identity(2, 2), 1.0);
    REQUIRE_THROWS_AS(fundamental_solution(B, 32), ValidationError);
}

TEST_CASE("reversible extension") {
    // constant path: N I N = I
    CoefficientPath B = CoefficientPath::constant(Mat::Identity(2, 2), 1.0);
    CoefficientPath E = reversible_extend(B, ExtendMode::Half);
    REQUIRE(E.tau() == Catch::Approx(2.0));
    REQUIRE((E.value(1.7) - Mat::Identity(2, 2)).norm() < 1e-14);

    // diagonal path: reflection formula checked pointwise
    CoefficientPath D = CoefficientPath::sampled(1.0, 65, [](double t) {
        Mat m = Mat::Zero(2, 2);
        m(0, 0) = t;
        m(1, 1) = 1.0 - t;
        return m;
    });
    CoefficientPath De = reversible_extend(D, ExtendMode::Half);
    Mat expected = Mat::Zero(2, 2);
    expected(0, 0) = 0.5;
    expected(1, 1) = 0.5;
    REQUIRE((De.value(1.5) - expected).norm() < 1e-12);
    // restriction to the original interval is exact
    for (double t : {0.0, 0.25, 0.5, 1.0}) REQUIRE((De.value(t) - D.value(t)).norm() == 0.0);

    // full mode appends one periodic copy
    CoefficientPath Df = reversible_extend(D, ExtendMode::Full);
    REQUIRE(Df.tau() == Catch::Approx(4.0));
    REQUIRE((Df.value(2.3) - Df.value(0.3)).norm() < 1e-12);

    // violated boundary condition is rejected
    Mat offdiag(2, 2);
    offdiag << 0, 1, 1, 0;
    CoefficientPath bad = CoefficientPath::constant(offdiag, 1.0);
    REQUIRE_THROWS_AS(reversible_extend(bad, ExtendMode::Half), ValidationError);
}

TEST_CASE("doubled path endpoint identity") {
    // gamma_B(2s) = N gamma_B(s)^{-1} N gamma_B(s) for the extended coefficients
    Rng rng(29);
    for (int trial = 0; trial < 4; ++trial) {
        const int n = 1 + trial % 2;
        CoefficientPath B = random_b1_path(rng, n);
        CoefficientPath Bext = reversible_extend(B, ExtendMode::Half);
        SymplecticPath g = fundamental_solution(Bext);
        const Mat N = standard_N(n);
        Mat gs = g.value(B.tau());
        Mat expected = N * gs.inverse() * N * gs;
        REQUIRE((g.endpoint() - expected).norm() < 1e-7);
    }
}

TEST_CASE("refine_near") {
    CoefficientPath B = CoefficientPath::constant(Mat::Identity(2, 2), 2.0 * M_PI);
    SymplecticPath g = fundamental_solution(B, 2048);

    SECTION("zero radius leaves the path unchanged") {
        SymplecticPath r = refine_near(g, M_PI, 0.0);
        REQUIRE(r.grid().size() == g.grid().size());
    }
    SECTION("grid doubles inside the window, endpoints untouched") {
        SymplecticPath r = refine_near(g, M_PI, 0.1);
        REQUIRE(r.grid().size() > g.grid().size());
        REQUIRE((r.endpoint() - g.endpoint()).norm() == 0.0);
    }
    SECTION("bisection on the upper-right block locates the boundary crossing") {
        // nu_{L0}(R(t)) jumps at t = pi: bisect det of the upper-right entry
        double lo = 3.0, hi = 3.3;
        auto f = [&](double t) { return g.value(t)(0, 1); };  // -sin t
        double flo = f(lo);
        while (hi - lo > 1e-12) {
            double mid = 0.5 * (lo + hi);
            double fm = f(mid);
            if ((fm < 0) == (flo < 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        REQUIRE(std::abs(0.5 * (lo + hi) - M_PI) < 1e-10);
    }
    SECTION("out of range t* is rejected") {
        REQUIRE_THROWS_AS(refine_near(g, 100.0, 0.1), ValidationError);
    }
}

TEST_CASE("sample-only path value interpolation stays symplectic") {
    CoefficientPath B = CoefficientPath::constant(Mat::Identity(2, 2), M_PI);
    SymplecticPath g = fundamental_solution(B, 1024);
    SymplecticPath bare(g.grid(), g.samples());  // drop the source
    const Mat J = standard_J(1);
    for (double t : {0.1234, 1.057, 2.9}) {
        REQUIRE(symplecticity_defect(bare.value(t), J) < 1e-9);
        REQUIRE((bare.value(t) - rotation_J(1, t)).norm() < 1e-6);
    }
}
