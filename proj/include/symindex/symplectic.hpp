#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "symindex/linalg.hpp"

namespace symindex {

inline constexpr double kSymplecticTol = 1e-9;
inline constexpr double kRankTol = 1e-8;

/// True iff ||M^T J M - J||_F <= tol after normalization by ||M||_F^2.
inline bool is_symplectic(const Mat& M, double tol = kSymplecticTol) {
    if (M.rows() != M.cols() || M.rows() % 2 != 0)
        throw ValidationError("is_symplectic: matrix must be 2n x 2n");
    const int n = static_cast<int>(M.rows()) / 2;
    return symplecticity_defect(M, standard_J(n)) <= tol;
}

/// 2n x 2n real matrix validated against M^T J M = J and det M = 1.
class SymplecticMatrix {
  public:
    SymplecticMatrix(int n, Mat entries, double tol = kSymplecticTol)
        : n_(n), m_(std::move(entries)) {
        if (n_ < 1) throw ValidationError("SymplecticMatrix: n must be positive");
        if (m_.rows() != 2 * n_ || m_.cols() != 2 * n_)
            throw ValidationError("SymplecticMatrix: entries must be 2n x 2n");
        if (!is_symplectic(m_, tol))
            throw ValidationError("SymplecticMatrix: M^T J M != J within tolerance");
        if (std::abs(m_.determinant() - 1.0) > 1e-6)
            throw ValidationError("SymplecticMatrix: det != 1 within 1e-6");
    }

    explicit SymplecticMatrix(Mat entries, double tol = kSymplecticTol)
        : SymplecticMatrix(static_cast<int>(entries.rows()) / 2, std::move(entries), tol) {}

    int n() const { return n_; }
    const Mat& matrix() const { return m_; }

  private:
    int n_;
    Mat m_;
};

/// Standard pair (J, N) of the 2n-dimensional phase space.
inline std::pair<Mat, Mat> make_structures(int n) {
    if (n < 1) throw ValidationError("make_structures: n >= 1 required");
    return {standard_J(n), standard_N(n)};
}

/// Interleaved block direct sum of two 2m x 2m square-block matrices; used
/// for symplectic matrices and for the symmetric matrices paired with them.
inline Mat diamond_blocks(const Mat& A, const Mat& B) {
    const int n1 = static_cast<int>(A.rows()) / 2;
    const int n2 = static_cast<int>(B.rows()) / 2;
    const int n = n1 + n2;
    Mat out = Mat::Zero(2 * n, 2 * n);
    out.block(0, 0, n1, n1) = A.block(0, 0, n1, n1);
    out.block(n1, n1, n2, n2) = B.block(0, 0, n2, n2);
    out.block(0, n, n1, n1) = A.block(0, n1, n1, n1);
    out.block(n1, n + n1, n2, n2) = B.block(0, n2, n2, n2);
    out.block(n, 0, n1, n1) = A.block(n1, 0, n1, n1);
    out.block(n + n1, n1, n2, n2) = B.block(n2, 0, n2, n2);
    out.block(n, n, n1, n1) = A.block(n1, n1, n1, n1);
    out.block(n + n1, n + n1, n2, n2) = B.block(n2, n2, n2, n2);
    return out;
}

inline SymplecticMatrix diamond(const SymplecticMatrix& M1, const SymplecticMatrix& M2) {
    return SymplecticMatrix(M1.n() + M2.n(), diamond_blocks(M1.matrix(), M2.matrix()));
}

/// Plain-matrix diamond for callers that hold raw blocks.
inline Mat diamond(const Mat& A, const Mat& B) {
    return diamond(SymplecticMatrix(A), SymplecticMatrix(B)).matrix();
}

enum class NormalFormKind { D, N1, R, N2 };

/// One of the four basic 2x2 / 4x4 normal forms.
struct NormalFormSpec {
    NormalFormKind kind;
    double lambda = 0.0;   // D: +-2, N1: +-1
    double b = 0.0;        // N1 scalar
    double theta = 0.0;    // R, N2
    Mat b_block;           // N2: 2x2 with b12 != b21
};

inline Mat rotation2(double theta) {
    Mat R(2, 2);
    R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return R;
}

inline SymplecticMatrix normal_form(const NormalFormSpec& spec) {
    auto theta_in_range = [](double th) {
        return (th > 0.0 && th < M_PI) || (th > M_PI && th < 2.0 * M_PI);
    };
    switch (spec.kind) {
        case NormalFormKind::D: {
            if (spec.lambda != 2.0 && spec.lambda != -2.0)
                throw ValidationError("normal_form: D requires lambda = +-2");
            Mat M(2, 2);
            M << spec.lambda, 0.0, 0.0, 1.0 / spec.lambda;
            return SymplecticMatrix(1, std::move(M));
        }
        case NormalFormKind::N1: {
            if (spec.lambda != 1.0 && spec.lambda != -1.0)
                throw ValidationError("normal_form: N1 requires lambda = +-1");
            if (spec.b != 1.0 && spec.b != -1.0 && spec.b != 0.0)
                throw ValidationError("normal_form: N1 requires b in {-1, 0, 1}");
            Mat M(2, 2);
            M << spec.lambda, spec.b, 0.0, spec.lambda;
            return SymplecticMatrix(1, std::move(M));
        }
        case NormalFormKind::R: {
            if (!theta_in_range(spec.theta))
                throw ValidationError("normal_form: R requires theta in (0,pi) u (pi,2pi)");
            return SymplecticMatrix(1, rotation2(spec.theta));
        }
        case NormalFormKind::N2: {
            if (!theta_in_range(spec.theta))
                throw ValidationError("normal_form: N2 requires theta in (0,pi) u (pi,2pi)");
            if (spec.b_block.rows() != 2 || spec.b_block.cols() != 2)
                throw ValidationError("normal_form: N2 requires a 2x2 b block");
            if (spec.b_block(0, 1) == spec.b_block(1, 0))
                throw ValidationError("normal_form: N2 requires b2 != b3");
            // N2 = [[R(theta), b],[0, R(theta)]] is symplectic iff R(theta)^T b is
            // symmetric; reject blocks violating it rather than silently fixing them.
            Mat R = rotation2(spec.theta);
            Mat S = R.transpose() * spec.b_block;
            if (std::abs(S(0, 1) - S(1, 0)) > 1e-12)
                throw ValidationError("normal_form: N2 block must make R^T b symmetric");
            Mat M = Mat::Zero(4, 4);
            M.topLeftCorner(2, 2) = R;
            M.bottomRightCorner(2, 2) = R;
            M.topRightCorner(2, 2) = spec.b_block;
            return SymplecticMatrix(2, std::move(M));
        }
    }
    throw ValidationError("normal_form: unknown kind");
}

/// Builds an N2 block from a symmetric parameter matrix: b = R(theta) s.
inline Mat n2_block_from_symmetric(double theta, const Mat& s) {
    return rotation2(theta) * s;
}

/// Unit complex number represented as an exact rational multiple of pi,
/// theta = (num / den) * pi, normalized into [0, 2).
struct Angle {
    long long num = 0;
    long long den = 1;

    static Angle of_pi(long long num, long long den) {
        if (den == 0) throw ValidationError("Angle: zero denominator");
        if (den < 0) {
            den = -den;
            num = -num;
        }
        long long two_den = 2 * den;
        long long r = num % two_den;
        if (r < 0) r += two_den;
        long long g = gcd_ll(r == 0 ? 1 : r, den);
        return Angle{r / g, den / g};
    }

    double radians() const { return static_cast<double>(num) * M_PI / static_cast<double>(den); }
    bool is_one() const { return num == 0; }
    bool is_minus_one() const { return num == den; }
    bool is_real() const { return is_one() || is_minus_one(); }
    Angle conjugate() const { return of_pi(2 * den - num, den); }

    friend bool operator==(const Angle& a, const Angle& b) {
        return a.num * b.den == b.num * a.den;
    }

  private:
    static long long gcd_ll(long long a, long long b) {
        while (b != 0) {
            long long t = a % b;
            a = b;
            b = t;
        }
        return a < 0 ? -a : a;
    }
};

/// Geometric kernel dimension of M - omega I over C, computed on the
/// realified 4n x 4n representation and halved.
inline int nu_omega(const Mat& M, double theta, double tol = kRankTol) {
    const int d = static_cast<int>(M.rows());
    const double c = std::cos(theta), s = std::sin(theta);
    Mat R = realify(M - c * Mat::Identity(d, d), -s * Mat::Identity(d, d));
    KernelBasis k = kernel_svd(R, tol, 1.0 + M.norm());
    if (k.dim % 2 != 0)
        throw ConsistencyError("nu_omega: realified kernel dimension must be even");
    return k.dim / 2;
}

inline int nu_omega(const SymplecticMatrix& M, const Angle& omega, double tol = kRankTol) {
    return nu_omega(M.matrix(), omega.radians(), tol);
}

/// nu_{L_j}(M) = dim(M L_j intersect L_j) from the rank of one n x n block.
inline int nu_lagrangian(const Mat& M, int j, double tol = kRankTol) {
    const int n = static_cast<int>(M.rows()) / 2;
    if (j != 0 && j != 1) throw ValidationError("nu_lagrangian: j must be 0 or 1");
    const Mat block = (j == 0) ? M.topRightCorner(n, n) : M.bottomLeftCorner(n, n);
    return n - rank_svd(block, tol, M.norm());
}

inline int nu_lagrangian(const SymplecticMatrix& M, int j, double tol = kRankTol) {
    return nu_lagrangian(M.matrix(), j, tol);
}

struct UnitEigenvalue {
    double theta = 0.0;      // eigenvalue exp(i theta), theta in [0, 2pi)
    int multiplicity = 0;    // algebraic, counted over C
    int nullity = 0;         // geometric nullity nu_omega
};

struct UnitSpectrum {
    std::vector<UnitEigenvalue> entries;  // sorted by theta, conjugate-closed
    int total_multiplicity = 0;           // over the whole spectrum, unit or not
};

/// Unit-circle eigenvalues grouped with algebraic multiplicities and nullities.
inline UnitSpectrum unit_spectrum(const Mat& M, double tol = 1e-8) {
    Eigen::EigenSolver<Mat> es(M);
    const auto& ev = es.eigenvalues();
    UnitSpectrum out;
    out.total_multiplicity = static_cast<int>(ev.size());
    std::vector<double> thetas;
    for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(std::abs(ev(i)) - 1.0) > tol) continue;
        double th = std::atan2(ev(i).imag(), ev(i).real());
        if (th < 0) th += 2.0 * M_PI;
        thetas.push_back(th);
    }
    std::sort(thetas.begin(), thetas.end());
    const double cluster_tol = 1e-6;
    for (std::size_t i = 0; i < thetas.size();) {
        std::size_t j = i + 1;
        double sum = thetas[i];
        while (j < thetas.size() && thetas[j] - thetas[j - 1] < cluster_tol) {
            sum += thetas[j];
            ++j;
        }
        double th = sum / static_cast<double>(j - i);
        // snap numerically real eigenvalues exactly onto the axis
        if (th < cluster_tol || 2.0 * M_PI - th < cluster_tol) th = 0.0;
        if (std::abs(th - M_PI) < cluster_tol) th = M_PI;
        UnitEigenvalue e;
        e.theta = th;
        e.multiplicity = static_cast<int>(j - i);
        e.nullity = nu_omega(M, th, tol);
        out.entries.push_back(e);
        i = j;
    }
    return out;
}

inline UnitSpectrum unit_spectrum(const SymplecticMatrix& M, double tol = 1e-8) {
    return unit_spectrum(M.matrix(), tol);
}

}  // namespace symindex
