#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "symindex/maslov.hpp"

namespace symindex {

namespace detail {

/// Form carried by the realified complexification of the product space:
/// the real part of the Hermitian pairing, block-diagonal over (Re, Im).
inline Mat realified_product_form(int n) {
    Mat F = Mat::Zero(8 * n, 8 * n);
    F.topLeftCorner(4 * n, 4 * n) = product_form(n);
    F.bottomRightCorner(4 * n, 4 * n) = product_form(n);
    return F;
}

/// Realified frame of the complex graph {(z, g z) : z in C^{2n}} for real g.
/// Coordinates ordered (Re x, Re y, Im x, Im y).
inline Mat realified_graph_cols(const Mat& g) {
    const int d = static_cast<int>(g.rows());
    Mat F = Mat::Zero(4 * d, 2 * d);
    F.block(0, 0, d, d) = Mat::Identity(d, d);
    F.block(d, 0, d, d) = g;
    F.block(2 * d, d, d, d) = Mat::Identity(d, d);
    F.block(3 * d, d, d, d) = g;
    return F;
}

/// Realified frame of the omega-twisted diagonal {(z, omega z)}.
inline Mat omega_diagonal_cols(int n, double theta) {
    const int d = 2 * n;
    const double c = std::cos(theta), s = std::sin(theta);
    Mat I = Mat::Identity(d, d);
    Mat F = Mat::Zero(4 * d, 2 * d);
    F.block(0, 0, d, d) = I;
    F.block(d, 0, d, d) = c * I;
    F.block(3 * d, 0, d, d) = s * I;
    F.block(d, d, d, d) = -s * I;
    F.block(2 * d, d, d, d) = I;
    F.block(3 * d, d, d, d) = c * I;
    return F;
}

inline FramePath rotated_complex_graph_path(const SymplecticPath& gamma, double eps) {
    const int n = gamma.n();
    const Mat rot = rotation_J(n, -eps);
    FramePath p;
    p.form = realified_product_form(n);
    p.a = 0.0;
    p.b = gamma.tau();
    p.scan_grid = gamma.grid();
    p.frame = [&gamma, rot](double t) {
        return realified_graph_cols(rot * gamma.value(t) * rot);
    };
    return p;
}

/// Periodic-family index at omega = exp(i theta): half the realified crossing
/// count, shifted by -n exactly at omega = 1.
inline long periodic_index_at(const SymplecticPath& gamma, double theta, bool omega_is_one) {
    const int n = gamma.n();
    LagrangianFrame fixed(omega_diagonal_cols(n, theta), realified_product_form(n));
    long c = stabilized_count(
        fixed, [&](double eps) { return rotated_complex_graph_path(gamma, eps); },
        /*require_even=*/true);
    if (c % 2 != 0) throw ConsistencyError("periodic_index_at: odd realified count");
    return c / 2 - (omega_is_one ? n : 0);
}

}  // namespace detail

/// Periodic Maslov-type index and nullity at a unit-circle parameter.
inline IndexRecord i_nu_omega(const SymplecticPath& gamma, const Angle& omega) {
    IndexRecord rec;
    rec.family = IndexFamily::Periodic;
    rec.theta = omega.radians();
    rec.index = detail::periodic_index_at(gamma, omega.radians(), omega.is_one());
    rec.nullity = nu_omega(gamma.endpoint(), omega.radians());
    return rec;
}

struct SplittingPair {
    Angle omega;
    int s_plus = 0;
    int s_minus = 0;
};

namespace detail {

/// Limit of the index at angles theta +- delta, stabilized over halvings.
inline long stabilized_nearby_index(const SymplecticPath& gamma, double theta, int side) {
    std::optional<long> prev;
    double delta = 1e-3;
    for (int i = 0; i < 24; ++i, delta *= 0.5) {
        long c;
        try {
            c = periodic_index_at(gamma, theta + side * delta, /*omega_is_one=*/false);
        } catch (const Error&) {
            prev.reset();
            continue;
        }
        if (prev && *prev == c) return c;
        prev = c;
    }
    throw NonConvergenceError("splitting_numbers: nearby index did not stabilize");
}

struct TableEntry {
    bool known = false;
    int s_plus = 0, s_minus = 0;
};

/// N2 triviality test straight from its definition: rotate each 2-plane by a
/// small negative angle and look for unit eigenvalues along the deformation.
inline bool n2_is_trivial(const Mat& M) {
    const double alpha = 1e-2;
    const int n = static_cast<int>(M.rows()) / 2;
    for (int k = 1; k <= 16; ++k) {
        const double t = (k - 0.5) / 16.0;
        Mat R = Mat::Zero(2 * n, 2 * n);
        Mat r2 = rotation2((t - 1.0) * alpha);
        // R((t-1)alpha)^{diamond n}
        R.topLeftCorner(n, n).diagonal().setConstant(r2(0, 0));
        R.topRightCorner(n, n).diagonal().setConstant(r2(0, 1));
        R.bottomLeftCorner(n, n).diagonal().setConstant(r2(1, 0));
        R.bottomRightCorner(n, n).diagonal().setConstant(r2(1, 1));
        if (!unit_spectrum(M * R).entries.empty()) return false;
    }
    return true;
}

/// Closed-form splitting numbers for recognized endpoints. Conservative: any
/// matrix that does not match a basic form (or a diamond product of them)
/// within 1e-9 stays unrecognized and falls back to the limit computation.
inline TableEntry splitting_table(const Mat& M, double theta) {
    const int dim = static_cast<int>(M.rows());
    const double tol = 1e-9;
    auto angles_equal = [](double a, double b) {
        double d = std::remainder(a - b, 2.0 * M_PI);
        return std::abs(d) < 1e-9;
    };
    if (unit_spectrum(M).entries.empty()) return {true, 0, 0};
    if (dim == 2) {
        // N1(lambda, b) with lambda = +-1
        if (std::abs(M(1, 0)) < tol && std::abs(M(0, 0) - M(1, 1)) < tol &&
            std::abs(std::abs(M(0, 0)) - 1.0) < tol) {
            const double lambda = M(0, 0) > 0 ? 1.0 : -1.0;
            const double b = M(0, 1);
            const bool at_eigenvalue = angles_equal(theta, lambda > 0 ? 0.0 : M_PI);
            if (!at_eigenvalue) return {true, 0, 0};
            if (lambda > 0) return b >= 0 ? TableEntry{true, 1, 1} : TableEntry{true, 0, 0};
            return b <= 0 ? TableEntry{true, 1, 1} : TableEntry{true, 0, 0};
        }
        // R(phi)
        if (std::abs(M(0, 0) - M(1, 1)) < tol && std::abs(M(0, 1) + M(1, 0)) < tol &&
            std::abs(M(0, 0) * M(0, 0) + M(0, 1) * M(0, 1) - 1.0) < tol) {
            const double phi = std::atan2(M(1, 0), M(0, 0));
            if (angles_equal(theta, phi) && !angles_equal(theta, -phi)) return {true, 0, 1};
            if (angles_equal(theta, -phi) && !angles_equal(theta, phi)) return {true, 1, 0};
            if (angles_equal(theta, phi) && angles_equal(theta, -phi)) return {true, 1, 1};
            return {true, 0, 0};
        }
        return {};
    }
    if (dim == 4) {
        // N2(omega, b) = [[R(phi), b],[0, R(phi)]]
        Mat R = M.topLeftCorner(2, 2);
        if ((M.bottomLeftCorner(2, 2)).norm() < tol &&
            (M.bottomRightCorner(2, 2) - R).norm() < tol &&
            std::abs(R(0, 0) - R(1, 1)) < tol && std::abs(R(0, 1) + R(1, 0)) < tol &&
            std::abs(R.determinant() - 1.0) < tol && std::abs(R(0, 1)) > tol &&
            std::abs(M(0, 3) - M(1, 2)) > tol) {
            const double phi = std::atan2(R(1, 0), R(0, 0));
            if (!angles_equal(theta, phi) && !angles_equal(theta, -phi)) return {true, 0, 0};
            if (n2_is_trivial(M)) return {true, 0, 0};
            return {true, 1, 1};
        }
    }
    // try to split as a diamond product
    const int n = dim / 2;
    for (int n1 = 1; n1 < n; ++n1) {
        const int n2 = n - n1;
        auto zero = [&](int r0, int c0, int rows, int cols) {
            return M.block(r0, c0, rows, cols).norm() < tol;
        };
        if (zero(0, n1, n1, n2) && zero(0, n + n1, n1, n2) && zero(n1, 0, n2, n1) &&
            zero(n1, n, n2, n1) && zero(n, n1, n1, n2) && zero(n, n + n1, n1, n2) &&
            zero(n + n1, 0, n2, n1) && zero(n + n1, n, n2, n1)) {
            Mat M1(2 * n1, 2 * n1), M2(2 * n2, 2 * n2);
            M1 << M.block(0, 0, n1, n1), M.block(0, n, n1, n1), M.block(n, 0, n1, n1),
                M.block(n, n, n1, n1);
            M2 << M.block(n1, n1, n2, n2), M.block(n1, n + n1, n2, n2),
                M.block(n + n1, n1, n2, n2), M.block(n + n1, n + n1, n2, n2);
            TableEntry a = splitting_table(M1, theta);
            TableEntry b = splitting_table(M2, theta);
            if (a.known && b.known)
                return {true, a.s_plus + b.s_plus, a.s_minus + b.s_minus};
        }
    }
    return {};
}

}  // namespace detail

/// Splitting numbers of M at omega, as one-sided limits of the periodic index
/// along a path ending at M; cross-checked against the closed-form table when
/// the endpoint is a recognized normal form.
inline SplittingPair splitting_numbers(const Mat& M, const Angle& omega,
                                       const SymplecticPath& path) {
    if ((path.endpoint() - M).norm() > 1e-8 * std::max(1.0, M.norm()))
        throw ValidationError("splitting_numbers: path must end at M");
    const double theta = omega.radians();
    const long base = detail::periodic_index_at(path, theta, omega.is_one());
    SplittingPair out;
    out.omega = omega;
    out.s_plus = static_cast<int>(detail::stabilized_nearby_index(path, theta, +1) - base);
    out.s_minus = static_cast<int>(detail::stabilized_nearby_index(path, theta, -1) - base);
    const int nu = nu_omega(M, theta);
    if (out.s_plus < 0 || out.s_plus > nu || out.s_minus < 0 || out.s_minus > nu)
        throw ConsistencyError("splitting_numbers: value outside [0, nu_omega]");
    detail::TableEntry table = detail::splitting_table(M, theta);
    if (table.known && (table.s_plus != out.s_plus || table.s_minus != out.s_minus))
        throw ConsistencyError("splitting_numbers: limit disagrees with the normal-form table");
    return out;
}

/// Piecewise-constant map theta -> index at exp(i theta) over [0, 2pi).
struct OmegaProfile {
    std::vector<double> crossing_thetas;            // sorted, where nu_omega > 0
    std::vector<std::pair<int, int>> crossing_splits;  // (S+, S-) at each crossing
    std::vector<double> cell_breaks;                // 0 = b_0 < b_1 < ... < 2pi
    std::vector<long> cell_values;                  // value on (b_k, b_{k+1})
    long value_at(double theta) const {
        theta = std::fmod(theta, 2.0 * M_PI);
        if (theta < 0) theta += 2.0 * M_PI;
        for (std::size_t k = 0; k + 1 < cell_breaks.size(); ++k)
            if (theta > cell_breaks[k] && theta < cell_breaks[k + 1]) return cell_values[k];
        throw ValidationError("OmegaProfile::value_at: theta lies on a crossing");
    }
};

/// Builds the rotation profile twice: directly on a crossing-avoiding theta
/// grid and by splitting-number reconstruction from omega = 1; the two must
/// agree cell by cell.
inline OmegaProfile omega_profile(const SymplecticPath& gamma, int resolution = 360) {
    if (resolution < 8) throw ValidationError("omega_profile: resolution >= 8");
    const Mat M = gamma.endpoint();
    OmegaProfile prof;
    for (const auto& e : unit_spectrum(M).entries) prof.crossing_thetas.push_back(e.theta);
    std::sort(prof.crossing_thetas.begin(), prof.crossing_thetas.end());

    // splitting numbers at the crossings
    for (double th : prof.crossing_thetas) {
        const long base = detail::periodic_index_at(gamma, th, std::abs(th) < 1e-12);
        const int sp = static_cast<int>(detail::stabilized_nearby_index(gamma, th, +1) - base);
        const int sm = static_cast<int>(detail::stabilized_nearby_index(gamma, th, -1) - base);
        prof.crossing_splits.emplace_back(sp, sm);
    }

    // reconstruction from omega = 1 via the jump identity
    const bool one_crosses =
        !prof.crossing_thetas.empty() && prof.crossing_thetas.front() < 1e-12;
    long i_one = detail::periodic_index_at(gamma, 0.0, true);
    prof.cell_breaks.push_back(0.0);
    for (double th : prof.crossing_thetas)
        if (th > 1e-12) prof.cell_breaks.push_back(th);
    prof.cell_breaks.push_back(2.0 * M_PI);

    long v = i_one;
    if (one_crosses) v += prof.crossing_splits.front().first;
    std::size_t split_idx = one_crosses ? 1 : 0;
    prof.cell_values.push_back(v);
    for (std::size_t k = 1; k + 1 < prof.cell_breaks.size(); ++k, ++split_idx) {
        const auto& sp = prof.crossing_splits[split_idx];
        v = v - sp.second + sp.first;
        prof.cell_values.push_back(v);
    }

    // direct evaluation on a crossing-avoiding grid must reproduce every cell
    for (int g = 0; g < resolution; ++g) {
        const double th = 2.0 * M_PI * (g + 0.5) / resolution;
        bool near_crossing = false;
        for (double c : prof.crossing_thetas)
            if (std::abs(std::remainder(th - c, 2.0 * M_PI)) < 2.0 * M_PI / (8.0 * resolution))
                near_crossing = true;
        if (near_crossing) continue;
        const long direct = detail::periodic_index_at(gamma, th, false);
        if (direct != prof.value_at(th))
            throw ConsistencyError("omega_profile: direct value disagrees with reconstruction");
    }
    return prof;
}

struct Thm62Report {
    long i_one = 0;
    int nu_one = 0;
    long i_omega = 0;
    int nu_omega_val = 0;
    long lower = 0, upper = 0;
    bool pass = false;
};

/// i_1 + nu_1 - n <= i_omega <= i_1 + n - nu_omega for omega != 1.
inline Thm62Report check_thm62_inequality(const SymplecticPath& gamma, const Angle& omega) {
    if (omega.is_one()) throw ValidationError("check_thm62_inequality: omega must differ from 1");
    Thm62Report r;
    const int n = gamma.n();
    IndexRecord one = i_nu_omega(gamma, Angle::of_pi(0, 1));
    IndexRecord om = i_nu_omega(gamma, omega);
    r.i_one = one.index;
    r.nu_one = one.nullity;
    r.i_omega = om.index;
    r.nu_omega_val = om.nullity;
    r.lower = r.i_one + r.nu_one - n;
    r.upper = r.i_one + n - r.nu_omega_val;
    r.pass = (r.lower <= r.i_omega) && (r.i_omega <= r.upper);
    return r;
}

}  // namespace symindex
