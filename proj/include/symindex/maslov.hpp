#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symindex/symplectic_path.hpp"

namespace symindex {

/// Frame of a Lagrangian subspace of a symplectic vector space: D x D/2
/// columns of full rank on which the form vanishes.
struct LagrangianFrame {
    Mat columns;

    LagrangianFrame(Mat cols, const Mat& form, double iso_tol = 1e-10)
        : columns(std::move(cols)) {
        const int D = static_cast<int>(form.rows());
        if (columns.rows() != D || 2 * columns.cols() != D)
            throw ValidationError("LagrangianFrame: frame must be D x D/2");
        if (rank_svd(columns) != columns.cols())
            throw ValidationError("LagrangianFrame: columns must have full rank");
        if ((columns.transpose() * form * columns).norm() >
            iso_tol * std::max(1.0, columns.squaredNorm()))
            throw ValidationError("LagrangianFrame: frame is not isotropic");
    }
};

/// The product form (-J) (+) J on R^{4n} carried by graph pairs.
inline Mat product_form(int n) {
    Mat F = Mat::Zero(4 * n, 4 * n);
    F.topLeftCorner(2 * n, 2 * n) = -standard_J(n);
    F.bottomRightCorner(2 * n, 2 * n) = standard_J(n);
    return F;
}

/// Frame of the graph {(x, Mx)} in the product space.
inline LagrangianFrame graph_frame(const Mat& M) {
    const int d = static_cast<int>(M.rows());
    Mat cols(2 * d, d);
    cols.topRows(d) = Mat::Identity(d, d);
    cols.bottomRows(d) = M;
    return LagrangianFrame(std::move(cols), product_form(d / 2));
}

inline LagrangianFrame graph_frame(const SymplecticMatrix& M) { return graph_frame(M.matrix()); }

/// Frame of L0 x L0 = {0} x R^n x {0} x R^n in R^{4n}.
inline Mat v1_frame(int n) {
    Mat V = Mat::Zero(4 * n, 2 * n);
    V.block(n, 0, n, n) = Mat::Identity(n, n);
    V.block(3 * n, n, n, n) = Mat::Identity(n, n);
    return V;
}

/// Frame of L1 x L1 = R^n x {0} x R^n x {0} in R^{4n}.
inline Mat v2_frame(int n) {
    Mat V = Mat::Zero(4 * n, 2 * n);
    V.block(0, 0, n, n) = Mat::Identity(n, n);
    V.block(2 * n, n, n, n) = Mat::Identity(n, n);
    return V;
}

/// Frame of L0 x (exp(theta J) L0) in R^{4n}.
inline Mat v_omega_frame(int n, double theta) {
    Mat V = Mat::Zero(4 * n, 2 * n);
    V.block(n, 0, n, n) = Mat::Identity(n, n);
    Mat rotated = rotation_J(n, theta).rightCols(n);  // exp(theta J) applied to L0 basis
    V.block(2 * n, n, 2 * n, n) = rotated;
    return V;
}

enum class CrossingLocation { Interior, LeftEndpoint, RightEndpoint };

struct CrossingEvent {
    double t = 0.0;
    int dimension = 0;
    int m_plus = 0, m_zero = 0, m_minus = 0;
    CrossingLocation location = CrossingLocation::Interior;
};

/// A continuous path of Lagrangian frames over [a, b] together with the scan
/// grid used for crossing detection.
struct FramePath {
    Mat form;                              // antisymmetric form on R^D
    std::function<Mat(double)> frame;      // t -> D x D/2, smooth in t
    double a = 0.0, b = 1.0;
    std::vector<double> scan_grid;         // includes a and b
};

namespace detail {

struct PairScan {
    Mat fixed_orth;        // D x D/2, orthonormal
    Mat pairing;           // fixed_orth^T * form, D/2 x D
    const FramePath* path;

    // raw moving frame: smooth in t, so sign changes of det are genuine
    double det(double t) const { return (pairing * path->frame(t)).determinant(); }
    // orthonormalized moving frame: scale-free magnitude for rank decisions
    Mat overlap(double t) const { return pairing * orthonormalized(path->frame(t)); }
    double sigma_min(double t) const { return smallest_singular_value(overlap(t)); }
};

inline double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                              double tol) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

inline double bisect_sign_change(const std::function<double(double)>& f, double lo, double hi,
                                 double flo, double tol) {
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Candidate crossing times: sign changes of det plus local minima of |det|.
inline std::vector<double> crossing_candidates(const PairScan& scan, double rank_tol) {
    const auto& g = scan.path->scan_grid;
    const std::size_t m = g.size();
    std::vector<double> dets(m);
    for (std::size_t i = 0; i < m; ++i) dets[i] = scan.det(g[i]);

    const double span = scan.path->b - scan.path->a;
    const double loc_tol = std::max(1e-12, 1e-10 * span);
    std::vector<double> cands;
    auto push = [&](double t) {
        for (double c : cands)
            if (std::abs(c - t) < 64.0 * loc_tol) return;
        cands.push_back(t);
    };

    for (std::size_t i = 0; i + 1 < m; ++i) {
        if ((dets[i] < 0.0) != (dets[i + 1] < 0.0)) {
            double t = bisect_sign_change([&](double s) { return scan.det(s); }, g[i], g[i + 1],
                                          dets[i], loc_tol);
            push(t);
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double di = std::abs(dets[i]);
        const bool left_ok = (i == 0) || std::abs(dets[i - 1]) >= di;
        const bool right_ok = (i + 1 == m) || std::abs(dets[i + 1]) > di;
        if (!(left_ok && right_ok)) continue;
        const double lo = (i == 0) ? g[0] : g[i - 1];
        const double hi = (i + 1 == m) ? g[m - 1] : g[i + 1];
        double t = golden_minimize([&](double s) { return std::abs(scan.det(s)); }, lo, hi,
                                   loc_tol);
        // keep only candidates that actually drop the rank
        Mat G = scan.overlap(t);
        Eigen::JacobiSVD<Mat> svd(G);
        const auto& s = svd.singularValues();
        if (s.size() > 0 && s(s.size() - 1) < rank_tol) push(t);
    }
    std::sort(cands.begin(), cands.end());
    return cands;
}

/// Crossing form of the moving Lagrangian against the fixed one at time t*,
/// realized by central differences of the raw frame path.
inline CrossingEvent crossing_event(const FramePath& path, const Mat& fixed_orth, double t_star,
                                    double rank_tol, double form_zero_tol) {
    const double span = path.b - path.a;
    Mat W = path.frame(t_star);
    Mat Worth = orthonormalized(W);
    // intersection via the kernel of [fixed, W]
    Mat UV(fixed_orth.rows(), fixed_orth.cols() + Worth.cols());
    UV << fixed_orth, Worth;
    Eigen::JacobiSVD<Mat> svd(UV, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int k = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) < rank_tol * std::max(1.0, sv(0))) ++k;
    CrossingEvent ev;
    ev.t = t_star;
    ev.dimension = k;
    if (k == 0) return ev;

    // intersection vectors expressed through the moving frame part of the kernel
    Mat beta = svd.matrixV().rightCols(k).bottomRows(Worth.cols());
    Mat V = orthonormalized(Worth * beta);  // k columns spanning the intersection

    // express through the raw frame so the finite difference sees a smooth curve
    Eigen::ColPivHouseholderQR<Mat> qr(W);
    Mat C = qr.solve(V);
    const double h = std::max(1e-9, 1e-6 * span);
    double tp = std::min(t_star + h, path.b);
    double tm = std::max(t_star - h, path.a);
    Mat Wdot = (path.frame(tp) - path.frame(tm)) / (tp - tm);
    Mat Vdot = Wdot * C;

    Mat gamma = V.transpose() * path.form.transpose() * Vdot;  // {v_i, vdot_j}
    Mat Gamma = 0.5 * (gamma + gamma.transpose());
    Inertia in = inertia_of(Gamma, form_zero_tol);
    ev.m_plus = in.plus;
    ev.m_zero = in.zero;
    ev.m_minus = in.minus;
    return ev;
}

}  // namespace detail

struct MaslovCount {
    long index = 0;
    std::vector<CrossingEvent> events;
};

/// Intersection count of a fixed Lagrangian against a moving one with the
/// endpoint convention: m+ of the crossing form at the left endpoint, signed
/// interior crossings, minus m- at the right endpoint. Degenerate crossing
/// forms raise DegenerateCrossingError.
inline MaslovCount mu_clm(const LagrangianFrame& fixed, const FramePath& path,
                          double rank_tol = 1e-7, double form_zero_tol = 1e-6) {
    detail::PairScan scan;
    scan.fixed_orth = orthonormalized(fixed.columns);
    scan.pairing = scan.fixed_orth.transpose() * path.form;
    scan.path = &path;

    const double span = path.b - path.a;
    const double end_tol = std::max(1e-11, 1e-9 * span);
    MaslovCount out;
    for (double t : detail::crossing_candidates(scan, rank_tol)) {
        CrossingEvent ev =
            detail::crossing_event(path, scan.fixed_orth, t, rank_tol, form_zero_tol);
        if (ev.dimension == 0) continue;
        if (t - path.a < end_tol)
            ev.location = CrossingLocation::LeftEndpoint;
        else if (path.b - t < end_tol)
            ev.location = CrossingLocation::RightEndpoint;
        if (ev.m_zero > 0)
            throw DegenerateCrossingError("mu_clm: degenerate crossing form", ev.t, ev.dimension);
        switch (ev.location) {
            case CrossingLocation::LeftEndpoint: out.index += ev.m_plus; break;
            case CrossingLocation::Interior: out.index += ev.m_plus - ev.m_minus; break;
            case CrossingLocation::RightEndpoint: out.index -= ev.m_minus; break;
        }
        out.events.push_back(ev);
    }
    return out;
}

namespace detail {

/// Interior-only signed crossing count; endpoint intersections or degenerate
/// interior forms are rejected so the caller can shrink the rotation.
inline long interior_count(const LagrangianFrame& fixed, const FramePath& path, double rank_tol,
                           double form_zero_tol, bool require_even = false) {
    PairScan scan;
    scan.fixed_orth = orthonormalized(fixed.columns);
    scan.pairing = scan.fixed_orth.transpose() * path.form;
    scan.path = &path;
    const double span = path.b - path.a;
    const double end_tol = std::max(1e-11, 1e-9 * span);

    if (scan.sigma_min(path.a) < rank_tol || scan.sigma_min(path.b) < rank_tol)
        throw DegenerateCrossingError("interior_count: endpoint intersection", path.a, 0);

    long total = 0;
    for (double t : crossing_candidates(scan, rank_tol)) {
        CrossingEvent ev = crossing_event(path, scan.fixed_orth, t, rank_tol, form_zero_tol);
        if (ev.dimension == 0) continue;
        if (t - path.a < end_tol || path.b - t < end_tol)
            throw DegenerateCrossingError("interior_count: crossing at interval end", t,
                                          ev.dimension);
        if (ev.m_zero > 0)
            throw DegenerateCrossingError("interior_count: degenerate crossing form", t,
                                          ev.dimension);
        if (require_even && ((ev.m_plus - ev.m_minus) % 2 != 0 || ev.dimension % 2 != 0))
            throw DegenerateCrossingError("interior_count: odd realified contribution", t,
                                          ev.dimension);
        total += ev.m_plus - ev.m_minus;
    }
    return total;
}

}  // namespace detail

/// Signed crossing count stabilized over the shrinking rotation e^{-eps Jcal}
/// applied to the moving frame: eps is halved until two consecutive counts
/// agree. Realizes the endpoint convention of mu_clm on paths with degenerate
/// or boundary crossings.
inline long stabilized_count(const LagrangianFrame& fixed,
                             const std::function<FramePath(double)>& rotated_path,
                             bool require_even = false, double eps0 = 1e-3,
                             int max_halvings = 20, double rank_tol = 1e-7,
                             double form_zero_tol = 1e-6) {
    std::optional<long> prev;
    double eps = eps0;
    for (int i = 0; i <= max_halvings; ++i, eps *= 0.5) {
        long c;
        try {
            c = detail::interior_count(fixed, rotated_path(eps), rank_tol, form_zero_tol,
                                       require_even);
        } catch (const DegenerateCrossingError&) {
            prev.reset();
            continue;
        }
        if (prev && *prev == c) return c;
        prev = c;
    }
    throw NonConvergenceError("stabilized_count: no two consecutive epsilon counts agreed");
}

enum class IndexFamily { L0, L1, OmegaL0, Periodic };

struct IndexRecord {
    IndexFamily family = IndexFamily::L0;
    double theta = 0.0;  // omega = exp(i theta) when applicable
    long index = 0;
    int nullity = 0;
};

namespace detail {

/// Frame path t -> Gr(e^{-eps J} gamma(t) e^{-eps J}) over [0, tau].
inline FramePath rotated_graph_path(const SymplecticPath& gamma, double eps) {
    const int n = gamma.n();
    const Mat rot = rotation_J(n, -eps);
    FramePath p;
    p.form = product_form(n);
    p.a = 0.0;
    p.b = gamma.tau();
    p.scan_grid = gamma.grid();
    p.frame = [&gamma, rot, n](double t) {
        Mat g = rot * gamma.value(t) * rot;
        Mat cols(4 * n, 2 * n);
        cols.topRows(2 * n) = Mat::Identity(2 * n, 2 * n);
        cols.bottomRows(2 * n) = g;
        return cols;
    };
    return p;
}

inline LagrangianFrame fixed_frame_for(IndexFamily family, int n, double theta) {
    switch (family) {
        case IndexFamily::L0: return LagrangianFrame(v1_frame(n), product_form(n));
        case IndexFamily::L1: return LagrangianFrame(v2_frame(n), product_form(n));
        case IndexFamily::OmegaL0: return LagrangianFrame(v_omega_frame(n, theta), product_form(n));
        default: throw ValidationError("fixed_frame_for: periodic family handled elsewhere");
    }
}

}  // namespace detail

/// Maslov-type index relative to the boundary Lagrangian L_j: the crossing
/// count against L_j x L_j shifted by -n, paired with the endpoint nullity.
inline IndexRecord i_L(const SymplecticPath& gamma, int j) {
    if (j != 0 && j != 1) throw ValidationError("i_L: j must be 0 or 1");
    const int n = gamma.n();
    LagrangianFrame fixed = detail::fixed_frame_for(j == 0 ? IndexFamily::L0 : IndexFamily::L1,
                                                    n, 0.0);
    long count = stabilized_count(
        fixed, [&](double eps) { return detail::rotated_graph_path(gamma, eps); });
    IndexRecord rec;
    rec.family = j == 0 ? IndexFamily::L0 : IndexFamily::L1;
    rec.index = count - n;
    rec.nullity = nu_lagrangian(gamma.endpoint(), j);
    return rec;
}

/// Nullity of the rotated family: dim(M L0 intersect exp(theta J) L0).
inline int nu_omega_L0(const Mat& M, double theta) {
    const int n = static_cast<int>(M.rows()) / 2;
    Mat L0 = Mat::Zero(2 * n, n);
    L0.bottomRows(n) = Mat::Identity(n, n);
    return intersection_dim(M * L0, rotation_J(n, theta) * L0);
}

/// Rotated brake index: crossing count against L0 x (exp(theta J) L0) with no
/// additive shift, theta strictly inside (0, pi).
inline IndexRecord i_omega_L0(const SymplecticPath& gamma, double theta) {
    if (!(theta > 0.0 && theta < M_PI))
        throw ValidationError("i_omega_L0: theta must lie in (0, pi)");
    const int n = gamma.n();
    LagrangianFrame fixed = detail::fixed_frame_for(IndexFamily::OmegaL0, n, theta);
    long count = stabilized_count(
        fixed, [&](double eps) { return detail::rotated_graph_path(gamma, eps); });
    IndexRecord rec;
    rec.family = IndexFamily::OmegaL0;
    rec.theta = theta;
    rec.index = count;
    rec.nullity = nu_omega_L0(gamma.endpoint(), theta);
    return rec;
}

inline IndexRecord i_omega_L0(const SymplecticPath& gamma, const Angle& omega) {
    return i_omega_L0(gamma, omega.radians());
}

/// Build-time convention check: the two anchors that pin the crossing-sum
/// convention. Any change that breaks either one must not ship.
inline void self_check_convention() {
    // constant identity path: i_{L0} = -n
    const int n = 2;
    std::vector<double> g{0.0, 0.5, 1.0};
    std::vector<Mat> s{Mat::Identity(2 * n, 2 * n), Mat::Identity(2 * n, 2 * n),
                       Mat::Identity(2 * n, 2 * n)};
    SymplecticPath idpath(g, s);
    if (i_L(idpath, 0).index != -n)
        throw ConsistencyError("convention self-test: constant path index != -n");
    // rotation path over a full turn: i_{L0} = 1
    CoefficientPath B = CoefficientPath::constant(Mat::Identity(2, 2), 2.0 * M_PI);
    SymplecticPath rot = fundamental_solution(B, 2048);
    if (i_L(rot, 0).index != 1)
        throw ConsistencyError("convention self-test: full rotation index != 1");
}

}  // namespace symindex
