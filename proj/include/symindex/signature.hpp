#pragma once

#include <optional>
#include <vector>

#include "symindex/maslov.hpp"

namespace symindex {

/// M_eps(P) = P^T K_-(eps) P + K_+(eps) with the sin/cos block matrices
/// K_-+ = [[sin(2e) I, -+cos(2e) I], [-+cos(2e) I, -sin(2e) I]].
inline Mat m_eps(const Mat& P, double eps) {
    const int n = static_cast<int>(P.rows()) / 2;
    if (!is_symplectic(P, 1e-7)) throw ValidationError("m_eps: P must be symplectic");
    const Mat I = Mat::Identity(n, n);
    const double s = std::sin(2.0 * eps), c = std::cos(2.0 * eps);
    Mat Km(2 * n, 2 * n), Kp(2 * n, 2 * n);
    Km << s * I, -c * I, -c * I, -s * I;
    Kp << s * I, c * I, c * I, -s * I;
    Mat M = P.transpose() * Km * P + Kp;
    return 0.5 * (M + M.transpose());
}

enum class EpsSide { Plus, Minus };

struct EpsSignature {
    EpsSide side = EpsSide::Plus;
    double eps_used = 0.0;
    int signature = 0;
    Inertia inertia;
};

/// Signature of M_eps(P) stabilized along eps -> 0 from the requested side:
/// halve eps until two consecutive invertible inertias agree.
inline EpsSignature sgn_m_eps(const Mat& P, EpsSide side, double eps0 = 1e-3) {
    const double sign = (side == EpsSide::Plus) ? 1.0 : -1.0;
    std::optional<Inertia> prev;
    double prev_eps = 0.0;
    double eps = eps0;
    for (int i = 0; i < 24; ++i, eps *= 0.5) {
        Inertia in = inertia_of(m_eps(P, sign * eps), 1e-10);
        if (in.zero > 0) {
            prev.reset();
            continue;
        }
        if (prev && prev->plus == in.plus && prev->minus == in.minus) {
            EpsSignature out;
            out.side = side;
            out.eps_used = sign * prev_eps;
            out.signature = in.signature();
            out.inertia = in;
            return out;
        }
        prev = in;
        prev_eps = eps;
    }
    throw NonConvergenceError("sgn_m_eps: inertia did not stabilize after 24 halvings");
}

inline EpsSignature sgn_m_eps(const SymplecticMatrix& P, EpsSide side, double eps0 = 1e-3) {
    return sgn_m_eps(P.matrix(), side, eps0);
}

enum class DifferenceVariant { Bare, PlusNullity };

/// Half the stabilized endpoint signature: the bare variant recovers the
/// difference of the two boundary indices, the plus-nullity variant the
/// difference of index + nullity sums.
inline long index_difference(const SymplecticPath& gamma, DifferenceVariant variant) {
    const EpsSide side = (variant == DifferenceVariant::Bare) ? EpsSide::Plus : EpsSide::Minus;
    const EpsSignature s = sgn_m_eps(gamma.endpoint(), side);
    if (s.signature % 2 != 0)
        throw ConsistencyError("index_difference: odd signature");
    return s.signature / 2;
}

/// If both boundary nullities stay constant along a matrix path, the
/// stabilized signature cannot change between its two ends.
inline bool constancy_check(const std::vector<Mat>& path_samples, int j) {
    if (path_samples.size() < 2)
        throw ValidationError("constancy_check: need at least two samples");
    const int nu0 = nu_lagrangian(path_samples.front(), j);
    for (const Mat& P : path_samples)
        if (nu_lagrangian(P, j) != nu0)
            throw ValidationError("constancy_check: nullity not constant on the sample grid");
    const EpsSignature a = sgn_m_eps(path_samples.front(), EpsSide::Plus);
    const EpsSignature b = sgn_m_eps(path_samples.back(), EpsSide::Plus);
    return a.signature == b.signature;
}

}  // namespace symindex
