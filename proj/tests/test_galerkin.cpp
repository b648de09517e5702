#include <catch2/catch_amalgamated.hpp>

#include "symindex/galerkin.hpp"
#include "symindex/iteration.hpp"
#include "symindex/random_paths.hpp"

using namespace symindex;

TEST_CASE("truncation dimensions") {
    REQUIRE(FourierTruncation(TruncationSpace::E, 2.0, 4, 3).dimension() == 9 * 3);
    REQUIRE(FourierTruncation(TruncationSpace::Hat, 2.0, 4, 3).dimension() == 8 * 3);
    REQUIRE(FourierTruncation(TruncationSpace::Check, 2.0, 5, 2).dimension() == 11 * 2);
}

TEST_CASE("A assembly") {
    FourierTruncation tr(TruncationSpace::E, 2.0, 3, 1);
    Mat A = assemble_A(tr);
    // the constant block is the kernel
    REQUIRE(A.topLeftCorner(1, 1).norm() == 0.0);
    // mode-j eigenvalues come in +- pairs scaled by frequency over the weight
    for (int k = 0; k < tr.dimension(); ++k) {
        const auto& b = tr.basis[k];
        const double expect = b.sign * 2.0 * b.j * M_PI / ((1.0 + b.j) * tr.tau);
        REQUIRE(A(k, k) == Catch::Approx(expect));
    }
    // on the antisymmetric space the form is invertible
    Mat Ah = assemble_A(TruncationSpace::Hat, 2.0, 3, 1);
    REQUIRE(Ah.diagonal().cwiseAbs().minCoeff() > 0.1);
}

TEST_CASE("B assembly against quadrature") {
    const double tau = 2.0;
    Rng rng(31);
    CoefficientPath B = random_b1_path(rng, 1, {.tau = tau, .amplitude = 2.0,
                                                .harmonics = 2, .grid_points = 65});
    FourierTruncation tr(TruncationSpace::E, tau, 3, 1);
    Mat assembled = assemble_B(B, tr);

    // independent oracle: refined trapezoid quadrature of the same form
    auto basis_value = [&](const FourierTruncation::BasisFunction& b, double t) {
        Vec v = Vec::Zero(2);
        v(1) = 1.0;  // L0 coordinate
        Vec u = rotation_J(1, b.sign * 2.0 * b.j * M_PI * t / tau) * v;
        return Vec(u * tr.weight(b.j));
    };
    const int quad = 8192;
    Mat oracle = Mat::Zero(tr.dimension(), tr.dimension());
    for (int q = 0; q <= quad; ++q) {
        const double t = tau * q / quad;
        const double w = (q == 0 || q == quad) ? 0.5 : 1.0;
        Mat Bt = B.value(t);
        std::vector<Vec> vals;
        for (const auto& b : tr.basis) vals.push_back(basis_value(b, t));
        for (int i = 0; i < tr.dimension(); ++i)
            for (int j = 0; j <= i; ++j) {
                const double c = w * (tau / quad) * vals[i].dot(Bt * vals[j]);
                oracle(i, j) += c;
                if (i != j) oracle(j, i) += c;
            }
    }
    REQUIRE((assembled - oracle).norm() < 1e-6 * std::max(1.0, oracle.norm()));
}

TEST_CASE("B assembly closed-form cases") {
    const double tau = 2.0;
    SECTION("zero coefficients give the zero matrix") {
        CoefficientPath Z = CoefficientPath::constant(Mat::Zero(2, 2), tau);
        REQUIRE(assemble_B(Z, TruncationSpace::E, tau, 4).norm() == 0.0);
    }
    SECTION("identity coefficients give the weighted metric") {
        CoefficientPath I = CoefficientPath::constant(Mat::Identity(2, 2), tau);
        FourierTruncation tr(TruncationSpace::E, tau, 4, 1);
        Mat BI = assemble_B(I, tr);
        for (int k = 0; k < tr.dimension(); ++k)
            for (int l = 0; l < tr.dimension(); ++l) {
                const double expect =
                    (k == l) ? 1.0 / (1.0 + tr.basis[k].j) : 0.0;
                REQUIRE(BI(k, l) == Catch::Approx(expect).margin(1e-12));
            }
        // the basis Gram in the plain L2 metric is therefore diagonal with
        // full rank, which pins the truncation dimension constructively
        REQUIRE(rank_svd(BI) == tr.dimension());
    }
}

TEST_CASE("band counts") {
    const double tau = 2.0;
    SECTION("zero coefficients on the antisymmetric space") {
        CoefficientPath Z = CoefficientPath::constant(Mat::Zero(2, 2), tau);
        for (int m : {2, 5}) {
            FourierTruncation tr(TruncationSpace::Hat, tau, m, 1);
            BandCount bc = band_counts(assemble_A(tr), assemble_B(Z, tr), 0.05);
            REQUIRE(bc.plus == m);
            REQUIRE(bc.minus == m);
            REQUIRE(bc.zero == 0);
            REQUIRE(bc.total() == tr.dimension());
        }
    }
    SECTION("zero coefficients on the full space keep the constant kernel") {
        CoefficientPath Z = CoefficientPath::constant(Mat::Zero(4, 4), tau);
        FourierTruncation tr(TruncationSpace::E, tau, 3, 2);
        BandCount bc = band_counts(assemble_A(tr), assemble_B(Z, tr), 0.05);
        REQUIRE(bc.zero == 2);
        REQUIRE(bc.total() == tr.dimension());
    }
    SECTION("d = 0 allowed for constant coefficients") {
        CoefficientPath C = CoefficientPath::constant(0.3 * Mat::Identity(2, 2), tau);
        FourierTruncation tr(TruncationSpace::Hat, tau, 4, 1);
        BandCount bc = band_counts(assemble_A(tr), assemble_B(C, tr), 0.0);
        REQUIRE(bc.total() == tr.dimension());
    }
}

TEST_CASE("orthogonal splitting of the even and odd mode blocks") {
    // tau/2-periodic coefficients do not couple odd and even modes
    const double sigma = 0.5;
    Rng rng(37);
    CoefficientPath B = random_b1_path(rng, 1, {.tau = sigma, .amplitude = 2.0});
    CoefficientPath Bext = reversible_extend(B, ExtendMode::Full);  // [0, 4 sigma]
    const double tau = Bext.tau();
    const int m = 3;
    FourierTruncation tr(TruncationSpace::E, tau, 2 * m, 1);
    Mat full = assemble_A(tr) - assemble_B(Bext, tr);
    for (int k = 0; k < tr.dimension(); ++k)
        for (int l = 0; l < tr.dimension(); ++l)
            if (tr.basis[k].j % 2 != tr.basis[l].j % 2)
                REQUIRE(std::abs(full(k, l)) < 1e-10);
}

TEST_CASE("galerkin index anchors") {
    SECTION("zero path") {
        for (int n : {1, 2}) {
            CoefficientPath Z = CoefficientPath::constant(Mat::Zero(2 * n, 2 * n), 1.0);
            GalerkinResult l0 = index_from_galerkin(Z, IndexFamily::L0);
            REQUIRE(l0.record.index == -n);
            REQUIRE(l0.record.nullity == n);
            GalerkinResult l1 = index_from_galerkin(Z, IndexFamily::L1);
            REQUIRE(l1.record.index == -n);
            REQUIRE(l1.record.nullity == n);
            GalerkinResult sq = index_from_galerkin(Z, IndexFamily::OmegaL0);
            REQUIRE(sq.record.index == 0);
            REQUIRE(sq.record.nullity == 0);
        }
    }
    SECTION("identity coefficients cross-checked against the path engine") {
        // gamma_B covers R(t) up to t = pi/2 on [0, pi/2]
        CoefficientPath B = CoefficientPath::constant(Mat::Identity(2, 2), M_PI / 2.0);
        SymplecticPath g = fundamental_solution(B);
        GalerkinResult l0 = index_from_galerkin(B, IndexFamily::L0);
        IndexRecord p0 = i_L(g, 0);
        REQUIRE(l0.record.index == p0.index);
        REQUIRE(l0.record.nullity == p0.nullity);
        GalerkinResult sq = index_from_galerkin(B, IndexFamily::OmegaL0);
        IndexRecord ps = i_omega_L0(g, M_PI / 2.0);
        REQUIRE(sq.record.index == ps.index);
        REQUIRE(sq.record.nullity == ps.nullity);
    }
    SECTION("precondition: off-diagonal blocks must vanish at the ends") {
        Mat off(2, 2);
        off << 0, 1, 1, 0;
        CoefficientPath bad = CoefficientPath::constant(off, 1.0);
        REQUIRE_THROWS_AS(index_from_galerkin(bad, IndexFamily::L0), ValidationError);
    }
}

TEST_CASE("oracle equality on random coefficient paths") {
    Rng rng(41);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 1 + trial % 2;
        RandomPathOptions opt;
        opt.amplitude = rng.uniform(1.0, 3.0);
        CoefficientPath B = random_b1_path(rng, n, opt);
        SymplecticPath g = fundamental_solution(B);
        INFO("trial " << trial << " n " << n);
        GalerkinResult l0 = index_from_galerkin(B, IndexFamily::L0);
        IndexRecord p0 = i_L(g, 0);
        REQUIRE(l0.record.index == p0.index);
        REQUIRE(l0.record.nullity == p0.nullity);
        GalerkinResult l1 = index_from_galerkin(B, IndexFamily::L1);
        IndexRecord p1 = i_L(g, 1);
        REQUIRE(l1.record.index == p1.index);
        REQUIRE(l1.record.nullity == p1.nullity);
        GalerkinResult sq = index_from_galerkin(B, IndexFamily::OmegaL0);
        IndexRecord ps = i_omega_L0(g, M_PI / 2.0);
        REQUIRE(sq.record.index == ps.index);
        REQUIRE(sq.record.nullity == ps.nullity);
    }
}

TEST_CASE("index relation between the doubled and single path") {
    // the rotated-family index equals the increment of the boundary index
    // under one brake doubling
    Rng rng(43);
    for (int trial = 0; trial < 4; ++trial) {
        CoefficientPath B = random_b1_path(rng, 1 + trial % 2);
        SymplecticPath g = fundamental_solution(B);
        SymplecticPath g2 = iterate_brake(g, 2);
        GalerkinResult sq = index_from_galerkin(B, IndexFamily::OmegaL0);
        REQUIRE(sq.record.index == i_L(g2, 0).index - i_L(g, 0).index);
        REQUIRE(sq.record.nullity == i_L(g2, 0).nullity - i_L(g, 0).nullity);
    }
}

TEST_CASE("monotonicity suite") {
    SECTION("equal paths give equalities") {
        CoefficientPath B = CoefficientPath::constant(0.5 * Mat::Identity(2, 2), 1.0);
        MonotonicitySuiteReport rep = monotonicity_suite(B, B);
        REQUIRE(rep.pass);
        REQUIRE_FALSE(rep.strict_case);
        for (const auto& line : rep.lines) REQUIRE(line.i1 == line.i2);
    }
    SECTION("identity versus zero is strict") {
        CoefficientPath I = CoefficientPath::constant(Mat::Identity(2, 2), 1.0);
        CoefficientPath Z = CoefficientPath::constant(Mat::Zero(2, 2), 1.0);
        MonotonicitySuiteReport rep = monotonicity_suite(I, Z);
        REQUIRE(rep.strict_case);
        REQUIRE(rep.pass);
        // the rotated family of a semipositive path is nonnegative
        REQUIRE(rep.lines[0].i1 >= 0);
    }
    SECTION("randomized ordered pairs") {
        Rng rng(47);
        for (int trial = 0; trial < 4; ++trial) {
            auto [B1, B2] = random_ordered_pair(rng, 1 + trial % 2);
            REQUIRE(monotonicity_suite(B1, B2).pass);
        }
    }
    SECTION("violated ordering is rejected") {
        CoefficientPath I = CoefficientPath::constant(Mat::Identity(2, 2), 1.0);
        CoefficientPath Z = CoefficientPath::constant(Mat::Zero(2, 2), 1.0);
        REQUIRE_THROWS_AS(monotonicity_suite(Z, I), ValidationError);
    }
}

TEST_CASE("block positivity") {
    SECTION("lower block positive forces the L0 index up") {
        Mat B22 = Mat::Zero(2, 2);
        B22(1, 1) = 1.0;
        CoefficientPath B = CoefficientPath::constant(B22, 1.0);
        BlockPositivityReport rep = block_positivity(B);
        REQUIRE(rep.b22_positive);
        REQUIRE_FALSE(rep.b11_positive);
        REQUIRE(rep.pass);
        REQUIRE(rep.i_L0 >= 0);
        // cross-check by the path engine
        REQUIRE(i_L(fundamental_solution(B), 0).index == rep.i_L0);
    }
    SECTION("upper block positive forces the L1 index up") {
        Mat B11 = Mat::Zero(2, 2);
        B11(0, 0) = 1.0;
        CoefficientPath B = CoefficientPath::constant(B11, 1.0);
        BlockPositivityReport rep = block_positivity(B);
        REQUIRE(rep.b11_positive);
        REQUIRE(rep.pass);
        REQUIRE(rep.i_L1 >= 0);
        REQUIRE(i_L(fundamental_solution(B), 1).index == rep.i_L1);
    }
    SECTION("zero coefficients report the vacuous case") {
        CoefficientPath Z = CoefficientPath::constant(Mat::Zero(2, 2), 1.0);
        REQUIRE(block_positivity(Z).vacuous);
    }
}

TEST_CASE("semipositive corollaries") {
    Rng rng(53);
    for (int trial = 0; trial < 4; ++trial) {
        RandomPathOptions opt;
        opt.positive = true;
        opt.amplitude = rng.uniform(0.5, 2.0);
        const int n = 1 + trial % 2;
        CoefficientPath B = random_b1_path(rng, n, opt);
        GalerkinResult sq = index_from_galerkin(B, IndexFamily::OmegaL0);
        REQUIRE(sq.record.index >= 0);
        for (IndexFamily fam : {IndexFamily::L0, IndexFamily::L1}) {
            GalerkinResult r = index_from_galerkin(B, fam);
            REQUIRE(r.record.index + r.record.nullity >= 0);
            REQUIRE(r.record.index >= -n);
        }
    }
}
