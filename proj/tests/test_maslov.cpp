#include <catch2/catch_amalgamated.hpp>

#include "symindex/maslov.hpp"
#include "symindex/random_paths.hpp"

using namespace symindex;

namespace {

SymplecticPath rotation_path(double span, int n = 1) {
    CoefficientPath B = CoefficientPath::constant(Mat::Identity(2 * n, 2 * n), span);
    return fundamental_solution(B);
}

SymplecticPath constant_identity_path(int n) {
    std::vector<double> g{0.0, 0.5, 1.0};
    std::vector<Mat> s(3, Mat::Identity(2 * n, 2 * n));
    return SymplecticPath(g, s);
}

FramePath constant_frame_path(Mat frame, int n, double a = 0.0, double b = 1.0) {
    FramePath p;
    p.form = product_form(n);
    p.a = a;
    p.b = b;
    for (int i = 0; i <= 16; ++i) p.scan_grid.push_back(a + (b - a) * i / 16.0);
    p.frame = [frame](double) { return frame; };
    return p;
}

}  // namespace

TEST_CASE("graph frames are Lagrangian") {
    REQUIRE_NOTHROW(graph_frame(Mat::Identity(4, 4)));
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 3);
        Mat M = random_symplectic(rng, n);
        REQUIRE_NOTHROW(graph_frame(M));  // isotropy asserted in the constructor
    }
    // the boundary product frames are Lagrangian too
    REQUIRE_NOTHROW(LagrangianFrame(v1_frame(2), product_form(2)));
    REQUIRE_NOTHROW(LagrangianFrame(v2_frame(2), product_form(2)));
    REQUIRE_NOTHROW(LagrangianFrame(v_omega_frame(2, 1.1), product_form(2)));
}

TEST_CASE("mu_clm on canonical pairs") {
    // constant transversal pair: no crossings
    LagrangianFrame V1(v1_frame(1), product_form(1));
    FramePath diag = constant_frame_path(graph_frame(rotation2(M_PI / 2.0)).columns, 1);
    REQUIRE(mu_clm(V1, diag).index == 0);

    // moving graph of a full rotation: two positive units
    SymplecticPath rot = rotation_path(2.0 * M_PI);
    FramePath graph;
    graph.form = product_form(1);
    graph.a = 0.0;
    graph.b = rot.tau();
    graph.scan_grid = rot.grid();
    graph.frame = [&rot](double t) {
        Mat cols(4, 2);
        cols.topRows(2) = Mat::Identity(2, 2);
        cols.bottomRows(2) = rot.value(t);
        return cols;
    };
    MaslovCount count = mu_clm(V1, graph);
    REQUIRE(count.index == 2);
    REQUIRE(count.events.size() == 3);
    REQUIRE(count.events.front().location == CrossingLocation::LeftEndpoint);
    REQUIRE(count.events.back().location == CrossingLocation::RightEndpoint);
    REQUIRE(count.events[1].m_plus == 1);

    // degenerate constant-intersection pair raises the typed error
    FramePath const_graph = constant_frame_path(graph_frame(Mat::Identity(2, 2)).columns, 1);
    REQUIRE_THROWS_AS(mu_clm(V1, const_graph), DegenerateCrossingError);
}

TEST_CASE("boundary index anchors") {
    for (int n : {1, 2, 3}) {
        SymplecticPath z = constant_identity_path(n);
        for (int j : {0, 1}) {
            IndexRecord rec = i_L(z, j);
            REQUIRE(rec.index == -n);
            REQUIRE(rec.nullity == n);
        }
    }
    SymplecticPath rot = rotation_path(2.0 * M_PI);
    IndexRecord r0 = i_L(rot, 0);
    REQUIRE(r0.index == 1);
    REQUIRE(r0.nullity == 1);
    IndexRecord r1 = i_L(rot, 1);
    REQUIRE(r1.index == 1);
    REQUIRE(r1.nullity == 1);
}

TEST_CASE("rotated index anchors") {
    for (int n : {1, 2}) {
        SymplecticPath z = constant_identity_path(n);
        IndexRecord rec = i_omega_L0(z, M_PI / 2.0);
        REQUIRE(rec.index == 0);
        REQUIRE(rec.nullity == 0);
    }
    // quarter-period path of the doubly-covered circular solution
    IndexRecord quarter = i_omega_L0(rotation_path(1.5 * M_PI), M_PI / 2.0);
    REQUIRE(quarter.index == 1);
    REQUIRE(quarter.nullity == 1);
    // the half-period path accumulates one unit per half-turn of the line
    REQUIRE(i_omega_L0(rotation_path(3.0 * M_PI), M_PI / 2.0).index == 3);

    REQUIRE_THROWS_AS(i_omega_L0(rotation_path(M_PI), 0.0), ValidationError);
    REQUIRE_THROWS_AS(i_omega_L0(rotation_path(M_PI), M_PI), ValidationError);
}

TEST_CASE("positive generators count boundary degeneracies") {
    // for B > 0 the index equals the number of interior times where the
    // rotated line meets the reference line
    SymplecticPath rot = rotation_path(3.0 * M_PI);
    IndexRecord rec = i_L(rot, 0);
    // nu_{L0}(R(t)) > 0 at t = pi, 2pi inside (0, 3pi)
    REQUIRE(rec.index == 2);
    REQUIRE(i_omega_L0(rot, M_PI / 2.0).index == 3);  // t = pi/2, 3pi/2, 5pi/2
}

TEST_CASE("squeeze between the boundary and rotated families") {
    Rng rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 2);
        CoefficientPath B = random_b1_path(rng, n);
        SymplecticPath g = fundamental_solution(B);
        const long l0 = i_L(g, 0).index;
        const double theta = rng.uniform(0.2, M_PI - 0.2);
        const long rotated = i_omega_L0(g, theta).index;
        REQUIRE(l0 <= rotated);
        REQUIRE(rotated <= l0 + n);
    }
}

TEST_CASE("difference bounds and orthogonal endpoints") {
    Rng rng(23);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 2);
        CoefficientPath B = random_b1_path(rng, n);
        SymplecticPath g = fundamental_solution(B);
        IndexRecord r0 = i_L(g, 0), r1 = i_L(g, 1);
        REQUIRE(std::abs(r0.index - r1.index) <= n);
        REQUIRE(std::abs(r0.index + r0.nullity - r1.index - r1.nullity) <= n);
    }
    // orthogonal endpoint forces equality of the two boundary indices
    SymplecticPath rot = rotation_path(2.3, 1);
    REQUIRE(i_L(rot, 0).index == i_L(rot, 1).index);
}

TEST_CASE("path additivity of the crossing count") {
    CoefficientPath B = CoefficientPath::constant(Mat::Identity(2, 2), 2.0 * M_PI);
    SymplecticPath g = fundamental_solution(B, 2048);
    LagrangianFrame V1(v1_frame(1), product_form(1));
    const double eps = 1e-3;

    auto rotated_on = [&](double a, double b) {
        FramePath p = detail::rotated_graph_path(g, eps);
        p.a = a;
        p.b = b;
        std::vector<double> grid;
        for (double t : g.grid())
            if (t >= a && t <= b) grid.push_back(t);
        if (grid.empty() || grid.front() != a) grid.insert(grid.begin(), a);
        if (grid.back() != b) grid.push_back(b);
        p.scan_grid = grid;
        return p;
    };
    const long whole = detail::interior_count(V1, rotated_on(0.0, 2.0 * M_PI), 1e-7, 1e-6);
    for (double split : {1.0, 2.5, 4.4}) {
        const long left = detail::interior_count(V1, rotated_on(0.0, split), 1e-7, 1e-6);
        const long right = detail::interior_count(V1, rotated_on(split, 2.0 * M_PI), 1e-7, 1e-6);
        REQUIRE(left + right == whole);
    }
}

TEST_CASE("symplectic invariance of the crossing count") {
    Rng rng(31);
    CoefficientPath B = random_b1_path(rng, 1);
    SymplecticPath g = fundamental_solution(B);
    LagrangianFrame V1(v1_frame(1), product_form(1));
    const long base = stabilized_count(
        V1, [&](double eps) { return detail::rotated_graph_path(g, eps); });

    // conjugate both frames by a fixed product-space symplectic map
    Mat Psi1 = random_symplectic(rng, 1), Psi2 = random_symplectic(rng, 1);
    Mat Phi = Mat::Zero(4, 4);
    Phi.topLeftCorner(2, 2) = Psi1;
    Phi.bottomRightCorner(2, 2) = Psi2;
    LagrangianFrame V1t(Phi * v1_frame(1), product_form(1));
    const long moved = stabilized_count(V1t, [&](double eps) {
        FramePath p = detail::rotated_graph_path(g, eps);
        auto inner = p.frame;
        p.frame = [inner, Phi](double t) { return Mat(Phi * inner(t)); };
        return p;
    });
    REQUIRE(base == moved);
}

TEST_CASE("reparametrization and fixed-endpoint homotopy invariance") {
    CoefficientPath B = CoefficientPath::constant(Mat::Identity(2, 2), 2.0 * M_PI);
    SymplecticPath g = fundamental_solution(B, 2048);
    const long base = i_L(g, 0).index;

    // quadratic time reparametrization of the same geometric path
    const int steps = 2048;
    std::vector<double> grid;
    std::vector<Mat> samples;
    for (int i = 0; i <= steps; ++i) {
        const double s = 2.0 * M_PI * i / steps;
        grid.push_back(s);
        const double t = s * s / (2.0 * M_PI);  // monotone, fixed endpoints
        samples.push_back(rotation_J(1, t));
    }
    SymplecticPath reparam(grid, samples);
    REQUIRE(i_L(reparam, 0).index == base);
}
