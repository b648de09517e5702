#pragma once

#include <array>
#include <optional>
#include <vector>

#include "symindex/coefficient_path.hpp"
#include "symindex/maslov.hpp"

namespace symindex {

enum class TruncationSpace { E, Hat, Check };

/// Fourier truncation of the brake-symmetric function spaces: E collects the
/// rotating modes exp(+-2 j pi t / tau J) a with a in L0 for j = 0..m, Hat the
/// odd modes 2j-1 (the half-period antisymmetric part), Check the L1 variant.
struct FourierTruncation {
    TruncationSpace space;
    double tau;
    int m;
    int n;

    struct BasisFunction {
        int j;       // mode index (frequency 2 j pi / tau)
        int sign;    // +1 or -1 rotation direction; j = 0 has sign +1 only
        int coord;   // coordinate in L0 (or L1) basis
    };
    std::vector<BasisFunction> basis;

    FourierTruncation(TruncationSpace space, double tau, int m, int n)
        : space(space), tau(tau), m(m), n(n) {
        if (m < 0 || n < 1 || tau <= 0.0)
            throw ValidationError("FourierTruncation: bad parameters");
        auto add_mode = [&](int j) {
            for (int i = 0; i < n; ++i) basis.push_back({j, +1, i});
            if (j > 0)
                for (int i = 0; i < n; ++i) basis.push_back({j, -1, i});
        };
        if (space == TruncationSpace::Hat) {
            for (int j = 1; j <= m; ++j) add_mode(2 * j - 1);
        } else {
            for (int j = 0; j <= m; ++j) add_mode(j);
        }
    }

    int dimension() const { return static_cast<int>(basis.size()); }
    double weight(int j) const { return 1.0 / std::sqrt((1.0 + j) * tau); }
    int max_mode() const { return space == TruncationSpace::Hat ? 2 * m - 1 : m; }
};

namespace detail {

/// Integrals of a piecewise-linear scalar against cos/sin(w t), cell by cell,
/// with a series branch for small phases.
struct TrigCell {
    double c0, s0, c1, s1;  // local moments over [0, h]
    double cw0, sw0;        // cos/sin at the left node

    TrigCell(double t0, double h, double w) {
        cw0 = std::cos(w * t0);
        sw0 = std::sin(w * t0);
        const double x = w * h;
        if (std::abs(x) < 1e-4) {
            const double x2 = x * x;
            c0 = h * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
            s0 = w * h * h * (0.5 - x2 / 24.0 + x2 * x2 / 720.0);
            c1 = h * h * (0.5 - x2 / 8.0 + x2 * x2 / 144.0);
            s1 = w * h * h * h * (1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0);
        } else {
            const double sx = std::sin(x), cx = std::cos(x);
            c0 = sx / w;
            s0 = (1.0 - cx) / w;
            c1 = h * sx / w + (cx - 1.0) / (w * w);
            s1 = -h * cx / w + sx / (w * w);
        }
    }

    // integral over the cell of (f0 + slope u) {cos, sin}(w (t0 + u))
    double cosine(double f0, double slope) const {
        return cw0 * (f0 * c0 + slope * c1) - sw0 * (f0 * s0 + slope * s1);
    }
    double sine(double f0, double slope) const {
        return sw0 * (f0 * c0 + slope * c1) + cw0 * (f0 * s0 + slope * s1);
    }
};

/// Per-frequency moment tables of the four scalar block families of B(t)
/// against cos and sin: entry [kappa] is an n x n matrix.
struct MomentTables {
    std::vector<std::array<Mat, 4>> mc, ms;  // 0: BB, 1: BJ, 2: JB, 3: JBJ

    const Mat& cosine(int fam, int kappa) const { return mc[std::abs(kappa)][fam]; }
    Mat sine(int fam, int kappa) const {
        return kappa >= 0 ? ms[kappa][fam] : Mat(-ms[-kappa][fam]);
    }
};

inline MomentTables build_moments(const CoefficientPath& B, TruncationSpace space, double tau,
                                  int kappa_max) {
    const int n = B.n();
    const auto& g = B.grid();
    const auto& v = B.values();
    const std::size_t cells = g.size() - 1;

    // scalar block families sampled at the grid nodes
    std::vector<std::array<Mat, 4>> f(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) {
        const Mat& Bt = v[p];
        Mat B11 = Bt.topLeftCorner(n, n), B12 = Bt.topRightCorner(n, n);
        Mat B21 = Bt.bottomLeftCorner(n, n), B22 = Bt.bottomRightCorner(n, n);
        if (space == TruncationSpace::Check) {
            f[p] = {B11, B12, -B21, -B22};
        } else {
            f[p] = {B22, -B21, B12, -B11};
        }
    }

    MomentTables tab;
    tab.mc.assign(kappa_max + 1, {Mat::Zero(n, n), Mat::Zero(n, n), Mat::Zero(n, n),
                                  Mat::Zero(n, n)});
    tab.ms = tab.mc;
    const double w0 = 2.0 * M_PI / tau;
    for (int kappa = 0; kappa <= kappa_max; ++kappa) {
        const double w = kappa * w0;
        for (std::size_t c = 0; c < cells; ++c) {
            const double h = g[c + 1] - g[c];
            TrigCell cell(g[c], h, w);
            for (int fam = 0; fam < 4; ++fam) {
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        const double f0 = f[c][fam](a, b);
                        const double slope = (f[c + 1][fam](a, b) - f0) / h;
                        tab.mc[kappa][fam](a, b) += cell.cosine(f0, slope);
                        tab.ms[kappa][fam](a, b) += cell.sine(f0, slope);
                    }
            }
        }
    }
    return tab;
}

}  // namespace detail

/// Gram matrix of the quadratic form int -J x' . y dt on the truncation:
/// diagonal, with the j = 0 block identically zero.
inline Mat assemble_A(const FourierTruncation& trunc) {
    const int K = trunc.dimension();
    Mat A = Mat::Zero(K, K);
    for (int k = 0; k < K; ++k) {
        const auto& b = trunc.basis[k];
        A(k, k) = b.sign * 2.0 * b.j * M_PI / ((1.0 + b.j) * trunc.tau);
    }
    return A;
}

inline Mat assemble_A(TruncationSpace space, double tau, int m, int n) {
    return assemble_A(FourierTruncation(space, tau, m, n));
}

/// Gram matrix of int B(t) x . y dt on the truncation, via exact cell-wise
/// integration of the piecewise-linear coefficients against the mode pairs.
inline Mat assemble_B(const CoefficientPath& B, const FourierTruncation& trunc) {
    if (std::abs(B.tau() - trunc.tau) > 1e-12 * trunc.tau)
        throw ValidationError("assemble_B: coefficient path must span the function period");
    if (B.n() != trunc.n) throw ValidationError("assemble_B: dimension mismatch");
    const detail::MomentTables tab =
        detail::build_moments(B, trunc.space, trunc.tau, 2 * trunc.max_mode());

    const int K = trunc.dimension();
    Mat out = Mat::Zero(K, K);
    for (int k = 0; k < K; ++k) {
        const auto& bk = trunc.basis[k];
        const double wk = trunc.weight(bk.j);
        for (int l = 0; l <= k; ++l) {
            const auto& bl = trunc.basis[l];
            const double wl = trunc.weight(bl.j);
            const int kd = bk.sign * bk.j - bl.sign * bl.j;
            const int ks = bk.sign * bk.j + bl.sign * bl.j;
            const int i = bk.coord, ip = bl.coord;
            double val = tab.cosine(0, kd)(i, ip) + tab.cosine(0, ks)(i, ip);
            val += tab.sine(1, ks)(i, ip) - tab.sine(1, kd)(i, ip);
            val -= tab.sine(2, ks)(i, ip) + tab.sine(2, kd)(i, ip);
            val += tab.cosine(3, ks)(i, ip) - tab.cosine(3, kd)(i, ip);
            val *= 0.5 * wk * wl;
            out(k, l) = val;
            out(l, k) = val;
        }
    }
    return out;
}

inline Mat assemble_B(const CoefficientPath& B, TruncationSpace space, double tau, int m) {
    return assemble_B(B, FourierTruncation(space, tau, m, B.n()));
}

struct BandCount {
    double d = 0.0;
    int plus = 0, zero = 0, minus = 0;
    bool boundary_warning = false;  // some eigenvalue within 1e-12 of a band edge
    int total() const { return plus + zero + minus; }
};

/// Eigenvalue counts of A - B in the bands [d, inf), (-d, d), (-inf, -d].
inline BandCount band_counts(const Mat& Amat, const Mat& Bmat, double d) {
    if (Amat.rows() != Bmat.rows()) throw ValidationError("band_counts: dimension mismatch");
    if (d < 0.0) throw ValidationError("band_counts: d must be nonnegative");
    Eigen::SelfAdjointEigenSolver<Mat> es(Amat - Bmat, Eigen::EigenvaluesOnly);
    BandCount out;
    out.d = d;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (std::abs(std::abs(lam) - d) < 1e-12) out.boundary_warning = true;
        if (lam >= d)
            ++out.plus;
        else if (lam <= -d)
            ++out.minus;
        else
            ++out.zero;
    }
    return out;
}

struct GalerkinSweepEntry {
    int m = 0;
    BandCount counts;
    long adjusted_index = 0;
    int nullity = 0;
};

struct GalerkinResult {
    IndexRecord record;
    int m_star = 0;
    double d = 0.0;
    std::vector<GalerkinSweepEntry> sweep;
};

namespace detail {

/// Spectral gap estimate: eigenvalues that keep shrinking between two
/// truncation levels belong to the kernel; the smallest surviving magnitude
/// is the gap.
inline double estimate_gap(const CoefficientPath& Bext, TruncationSpace space, double tau,
                           int n, int m_cal) {
    auto small_eigs = [&](int m) {
        FourierTruncation tr(space, tau, m, n);
        Eigen::SelfAdjointEigenSolver<Mat> es(assemble_A(tr) - assemble_B(Bext, tr),
                                              Eigen::EigenvaluesOnly);
        std::vector<double> mags(es.eigenvalues().size());
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            mags[i] = std::abs(es.eigenvalues()(i));
        std::sort(mags.begin(), mags.end());
        mags.resize(std::min<std::size_t>(mags.size(), 4 * n + 1));
        return mags;
    };
    const auto coarse = small_eigs(m_cal);
    const auto fine = small_eigs(2 * m_cal);
    for (std::size_t i = 0; i < fine.size(); ++i) {
        const bool shrinking = fine[i] < 0.35 * coarse[i] || fine[i] < 1e-11;
        if (!shrinking) return fine[i];
    }
    throw NonConvergenceError("estimate_gap: no stable nonzero eigenvalue found");
}

}  // namespace detail

/// Stabilized index and nullity of a coefficient path on [0, sigma] with the
/// vanishing-off-diagonal boundary property, read off from the eigenvalue
/// counts of the truncated forms. Independent of the crossing engine.
inline GalerkinResult index_from_galerkin(const CoefficientPath& B, IndexFamily family,
                                          int m_max = 512) {
    if (!B.satisfies_b1())
        throw ValidationError("index_from_galerkin: off-diagonal blocks must vanish at ends");
    const int n = B.n();
    const double sigma = B.tau();

    TruncationSpace space;
    CoefficientPath Bext = [&] {
        switch (family) {
            case IndexFamily::L0:
                space = TruncationSpace::E;
                return reversible_extend(B, ExtendMode::Half);
            case IndexFamily::L1:
                space = TruncationSpace::Check;
                return reversible_extend(B, ExtendMode::Half);
            case IndexFamily::OmegaL0:
                space = TruncationSpace::Hat;
                return reversible_extend(B, ExtendMode::Full);
            default:
                throw ValidationError("index_from_galerkin: unsupported family");
        }
    }();
    const double tau = Bext.tau();
    const bool hat = (space == TruncationSpace::Hat);
    if (hat && std::abs(tau - 4.0 * sigma) > 1e-12)
        throw ConsistencyError("index_from_galerkin: bad extension span");

    const double gap = detail::estimate_gap(Bext, space, tau, n, 24);
    const double d = 0.25 * gap;

    GalerkinResult out;
    out.d = d;
    const std::vector<int> sweep_m = {8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512};
    int consecutive = 0;
    for (int m : sweep_m) {
        if (m > m_max) break;
        FourierTruncation tr(space, tau, m, n);
        BandCount bc = band_counts(assemble_A(tr), assemble_B(Bext, tr), d);
        GalerkinSweepEntry e;
        e.m = m;
        e.counts = bc;
        e.adjusted_index = bc.minus - static_cast<long>(m) * n - (hat ? 0 : n);
        e.nullity = bc.zero;
        if (!out.sweep.empty() && out.sweep.back().adjusted_index == e.adjusted_index &&
            out.sweep.back().nullity == e.nullity)
            ++consecutive;
        else
            consecutive = 1;
        out.sweep.push_back(e);
        if (consecutive >= 3) {
            out.m_star = m;
            out.record.family = family;
            out.record.theta = (family == IndexFamily::OmegaL0) ? M_PI / 2.0 : 0.0;
            out.record.index = e.adjusted_index;
            out.record.nullity = e.nullity;
            return out;
        }
    }
    throw NonConvergenceError("index_from_galerkin: counts did not stabilize by m_max");
}

struct MonotonicitySuiteReport {
    bool strict_case = false;  // integral of B1 - B2 positive definite
    struct FamilyLine {
        IndexFamily family;
        long i1 = 0, i2 = 0;
        int nu1 = 0, nu2 = 0;
        bool index_ok = false, sum_ok = false, strict_ok = true;
    };
    std::vector<FamilyLine> lines;
    bool pass = true;
};

/// Pointwise-ordered coefficient paths give ordered indices; a positive
/// definite integral difference upgrades the bound by the smaller nullity.
inline MonotonicitySuiteReport monotonicity_suite(const CoefficientPath& B1,
                                                  const CoefficientPath& B2) {
    if (B1.grid().size() != B2.grid().size() || std::abs(B1.tau() - B2.tau()) > 1e-12)
        throw ValidationError("monotonicity_suite: paths must share a domain");
    Mat integral = Mat::Zero(2 * B1.n(), 2 * B1.n());
    for (std::size_t i = 0; i + 1 < B1.grid().size(); ++i) {
        const double h = B1.grid()[i + 1] - B1.grid()[i];
        Mat d0 = B1.values()[i] - B2.values()[i];
        Mat d1 = B1.values()[i + 1] - B2.values()[i + 1];
        Eigen::SelfAdjointEigenSolver<Mat> es0(d0, Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<Mat> es1(d1, Eigen::EigenvaluesOnly);
        if (es0.eigenvalues().minCoeff() < -1e-10 || es1.eigenvalues().minCoeff() < -1e-10)
            throw ValidationError("monotonicity_suite: B1 >= B2 violated on the grid");
        integral += 0.5 * h * (d0 + d1);
    }
    MonotonicitySuiteReport rep;
    Eigen::SelfAdjointEigenSolver<Mat> esI(integral, Eigen::EigenvaluesOnly);
    rep.strict_case = esI.eigenvalues().minCoeff() > 1e-10;

    for (IndexFamily fam : {IndexFamily::OmegaL0, IndexFamily::L0, IndexFamily::L1}) {
        GalerkinResult r1 = index_from_galerkin(B1, fam);
        GalerkinResult r2 = index_from_galerkin(B2, fam);
        MonotonicitySuiteReport::FamilyLine line;
        line.family = fam;
        line.i1 = r1.record.index;
        line.i2 = r2.record.index;
        line.nu1 = r1.record.nullity;
        line.nu2 = r2.record.nullity;
        line.index_ok = line.i1 >= line.i2;
        line.sum_ok = line.i1 + line.nu1 >= line.i2 + line.nu2;
        if (rep.strict_case) line.strict_ok = line.i1 >= line.i2 + line.nu2;
        rep.pass = rep.pass && line.index_ok && line.sum_ok && line.strict_ok;
        rep.lines.push_back(line);
    }
    return rep;
}

struct BlockPositivityReport {
    bool b22_positive = false;
    bool b11_positive = false;
    long i_L0 = 0, i_L1 = 0;
    bool pass = true;
    bool vacuous = false;
};

/// For semipositive B: a positive integral of the lower (upper) diagonal
/// block forces the L0 (L1) index to be nonnegative.
inline BlockPositivityReport block_positivity(const CoefficientPath& B) {
    const int n = B.n();
    for (const Mat& v : B.values()) {
        Eigen::SelfAdjointEigenSolver<Mat> es(v, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw ValidationError("block_positivity: B must be positive semidefinite");
    }
    Mat i22 = Mat::Zero(n, n), i11 = Mat::Zero(n, n);
    for (std::size_t i = 0; i + 1 < B.grid().size(); ++i) {
        const double h = B.grid()[i + 1] - B.grid()[i];
        i22 += 0.5 * h *
               (B.values()[i].bottomRightCorner(n, n) + B.values()[i + 1].bottomRightCorner(n, n));
        i11 += 0.5 * h *
               (B.values()[i].topLeftCorner(n, n) + B.values()[i + 1].topLeftCorner(n, n));
    }
    BlockPositivityReport rep;
    rep.b22_positive = Eigen::SelfAdjointEigenSolver<Mat>(i22, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .minCoeff() > 1e-10;
    rep.b11_positive = Eigen::SelfAdjointEigenSolver<Mat>(i11, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .minCoeff() > 1e-10;
    if (!rep.b22_positive && !rep.b11_positive) {
        rep.vacuous = true;
        return rep;
    }
    if (rep.b22_positive) {
        rep.i_L0 = index_from_galerkin(B, IndexFamily::L0).record.index;
        rep.pass = rep.pass && rep.i_L0 >= 0;
    }
    if (rep.b11_positive) {
        rep.i_L1 = index_from_galerkin(B, IndexFamily::L1).record.index;
        rep.pass = rep.pass && rep.i_L1 >= 0;
    }
    return rep;
}

}  // namespace symindex
