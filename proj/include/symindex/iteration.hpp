#pragma once

#include <vector>

#include "symindex/omega_index.hpp"

namespace symindex {

namespace detail {

/// Coefficient path of the iterated path: even legs replay B, odd brake legs
/// replay N B(tau - t) N. A thin ramp layer keeps the samples a valid
/// continuous path when the junction limits differ (periodic sense only).
inline std::optional<CoefficientPath> iterate_source(const SymplecticPath& gamma, int k,
                                                     bool brake) {
    if (!gamma.source()) return std::nullopt;
    const CoefficientPath& B = *gamma.source();
    if (brake && !B.satisfies_b1()) return std::nullopt;
    const Mat N = standard_N(B.n());
    const double tau = B.tau();
    const auto& g = B.grid();
    const std::size_t m = g.size();
    const double layer = 1e-9 * tau;
    std::vector<double> bg;
    std::vector<Mat> bv;
    for (int leg = 0; leg < k; ++leg) {
        const bool reversed = brake && (leg % 2 == 1);
        auto local_t = [&](std::size_t i) { return reversed ? tau - g[m - 1 - i] : g[i]; };
        auto local_v = [&](std::size_t i) {
            return reversed ? Mat(N * B.values()[m - 1 - i] * N) : B.values()[i];
        };
        std::size_t start = 0;
        if (leg > 0) {
            Mat next0 = local_v(0);
            if ((bv.back() - next0).norm() > 1e-12 * std::max(1.0, next0.norm())) {
                bg.push_back(leg * tau + layer);
                bv.push_back(std::move(next0));
            }
            start = 1;
        }
        for (std::size_t i = start; i < m; ++i) {
            bg.push_back(leg * tau + local_t(i));
            bv.push_back(local_v(i));
        }
    }
    return CoefficientPath(std::move(bg), std::move(bv));
}

}  // namespace detail

/// k-fold iteration in the brake boundary sense: even legs replay gamma
/// composed with powers of P = N gamma(tau)^{-1} N gamma(tau), odd legs replay
/// the N-reflected reversal.
inline SymplecticPath iterate_brake(const SymplecticPath& gamma, int k) {
    if (k < 1) throw ValidationError("iterate_brake: k >= 1 required");
    const int n = gamma.n();
    const double tau = gamma.tau();
    const Mat N = standard_N(n);
    const Mat g_tau = gamma.endpoint();
    const Mat P = N * g_tau.inverse() * N * g_tau;

    const auto& g = gamma.grid();
    const std::size_t m = g.size();
    std::vector<double> grid;
    std::vector<Mat> samples;
    grid.reserve(k * m);
    samples.reserve(k * m);

    Mat Ppow = Mat::Identity(2 * n, 2 * n);  // P^{leg/2}, advanced after each odd leg
    for (int leg = 0; leg < k; ++leg) {
        const double offset = leg * tau;
        const bool even = (leg % 2 == 0);
        for (std::size_t i = (leg == 0 ? 0 : 1); i < m; ++i) {
            double t_local = even ? g[i] : tau - g[m - 1 - i];
            const Mat& base = even ? gamma.samples()[i] : gamma.samples()[m - 1 - i];
            Mat value = even ? Mat(base * Ppow) : Mat(N * base * N * (P * Ppow));
            grid.push_back(offset + t_local);
            samples.push_back(std::move(value));
        }
        if (!even) Ppow = P * Ppow;
        // junction continuity
        if (leg + 1 < k) {
            const Mat end = samples.back();
            const Mat next_start = (leg + 1) % 2 == 0 ? Mat(Mat::Identity(2 * n, 2 * n) * Ppow)
                                                      : Mat(N * g_tau * N * (P * Ppow));
            if ((end - next_start).norm() > 1e-8 * std::max(1.0, end.norm()))
                throw ConsistencyError("iterate_brake: junction mismatch above tolerance");
        }
    }

    return SymplecticPath(std::move(grid), std::move(samples),
                          detail::iterate_source(gamma, k, /*brake=*/true));
}

/// m-fold iteration in the periodic boundary sense: gamma(t - j tau) gamma(tau)^j.
inline SymplecticPath iterate_periodic(const SymplecticPath& gamma, int m_times) {
    if (m_times < 1) throw ValidationError("iterate_periodic: m >= 1 required");
    const int n = gamma.n();
    const double tau = gamma.tau();
    const Mat g_tau = gamma.endpoint();
    const auto& g = gamma.grid();
    const std::size_t m = g.size();

    std::vector<double> grid;
    std::vector<Mat> samples;
    Mat Ppow = Mat::Identity(2 * n, 2 * n);
    for (int leg = 0; leg < m_times; ++leg) {
        for (std::size_t i = (leg == 0 ? 0 : 1); i < m; ++i) {
            grid.push_back(leg * tau + g[i]);
            samples.push_back(gamma.samples()[i] * Ppow);
        }
        Ppow = g_tau * Ppow;
    }

    return SymplecticPath(std::move(grid), std::move(samples),
                          detail::iterate_source(gamma, m_times, /*brake=*/false));
}

struct IterationReport {
    int k = 1;
    IndexRecord direct;
    IndexRecord formula;
    bool agree = false;

    static IterationReport make(int k, IndexRecord d, IndexRecord f) {
        IterationReport r;
        r.k = k;
        r.direct = d;
        r.formula = f;
        r.agree = (d.index == f.index) && (d.nullity == f.nullity);
        return r;
    }
};

/// Iteration identity for the L0 boundary family: the direct index of the
/// brake iterate against the closed-form sum over even roots of unity.
inline IterationReport bott_L0(const SymplecticPath& gamma, int k) {
    IndexRecord direct = i_L(iterate_brake(gamma, k), 0);
    SymplecticPath g2 = iterate_brake(gamma, 2);
    IndexRecord f;
    f.family = IndexFamily::L0;
    IndexRecord base = i_L(gamma, 0);
    long idx = base.index;
    long nul = base.nullity;
    if (k % 2 == 0) {
        IndexRecord s = i_omega_L0(gamma, M_PI / 2.0);
        idx += s.index;
        nul += s.nullity;
    }
    const int terms = (k % 2 == 1) ? (k - 1) / 2 : k / 2 - 1;
    for (int i = 1; i <= terms; ++i) {
        IndexRecord w = i_nu_omega(g2, Angle::of_pi(2 * i, k));
        idx += w.index;
        nul += w.nullity;
    }
    f.index = idx;
    f.nullity = static_cast<int>(nul);
    return IterationReport::make(k, direct, f);
}

/// Iteration identity for the rotated family at omega = i: odd-exponent roots.
inline IterationReport bott_sqrt(const SymplecticPath& gamma, int k) {
    IndexRecord direct = i_omega_L0(iterate_brake(gamma, k), M_PI / 2.0);
    SymplecticPath g2 = iterate_brake(gamma, 2);
    IndexRecord f;
    f.family = IndexFamily::OmegaL0;
    f.theta = M_PI / 2.0;
    long idx = 0, nul = 0;
    if (k % 2 == 1) {
        IndexRecord base = i_omega_L0(gamma, M_PI / 2.0);
        idx = base.index;
        nul = base.nullity;
        for (int i = 1; i <= (k - 1) / 2; ++i) {
            IndexRecord w = i_nu_omega(g2, Angle::of_pi(2 * i - 1, k));
            idx += w.index;
            nul += w.nullity;
        }
    } else {
        for (int i = 1; i <= k / 2; ++i) {
            IndexRecord w = i_nu_omega(g2, Angle::of_pi(2 * i - 1, k));
            idx += w.index;
            nul += w.nullity;
        }
    }
    f.index = idx;
    f.nullity = static_cast<int>(nul);
    return IterationReport::make(k, direct, f);
}

/// Periodic-family iteration identity: the index of the m-fold periodic
/// iterate at z equals the sum of the indices over the m-th roots of z.
inline IterationReport bott_periodic(const SymplecticPath& gamma, const Angle& z, int m_times) {
    IndexRecord direct = i_nu_omega(iterate_periodic(gamma, m_times), z);
    IndexRecord f;
    f.family = IndexFamily::Periodic;
    f.theta = z.radians();
    long idx = 0, nul = 0;
    for (int j = 0; j < m_times; ++j) {
        Angle root = Angle::of_pi(z.num + 2 * j * z.den, z.den * m_times);
        IndexRecord w = i_nu_omega(gamma, root);
        idx += w.index;
        nul += w.nullity;
    }
    f.index = idx;
    f.nullity = static_cast<int>(nul);
    return IterationReport::make(m_times, direct, f);
}

struct MonotonicityReport {
    int p = 0, q = 0;
    long index_p = 0, index_q = 0;
    bool pass = false;
};

/// For semipositive coefficient paths the iterated indices are monotone in
/// the iteration count (strictly ordered pairs for the rotated family).
inline MonotonicityReport monotonicity_check(const CoefficientPath& B, int p, int q,
                                             IndexFamily family) {
    if (!B.satisfies_b1())
        throw ValidationError("monotonicity_check: coefficient path must satisfy (B1)");
    for (std::size_t i = 0; i < B.grid().size(); ++i) {
        Eigen::SelfAdjointEigenSolver<Mat> es(B.values()[i], Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw ValidationError("monotonicity_check: B must be positive semidefinite");
    }
    const bool sqrt_family = (family == IndexFamily::OmegaL0);
    if (sqrt_family ? !(p > q) : !(p >= q))
        throw ValidationError("monotonicity_check: need p > q (rotated) or p >= q (boundary)");
    SymplecticPath gamma = fundamental_solution(B);
    SymplecticPath gp = iterate_brake(gamma, p);
    SymplecticPath gq = iterate_brake(gamma, q);
    MonotonicityReport r;
    r.p = p;
    r.q = q;
    if (sqrt_family) {
        r.index_p = i_omega_L0(gp, M_PI / 2.0).index;
        r.index_q = i_omega_L0(gq, M_PI / 2.0).index;
    } else {
        const int j = (family == IndexFamily::L1) ? 1 : 0;
        r.index_p = i_L(gp, j).index;
        r.index_q = i_L(gq, j).index;
    }
    r.pass = r.index_p >= r.index_q;
    return r;
}

}  // namespace symindex
