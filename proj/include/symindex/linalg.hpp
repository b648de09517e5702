#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "symindex/errors.hpp"

namespace symindex {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// J = [[0, -I],[I, 0]], the standard symplectic structure on R^{2n}.
inline Mat standard_J(int n) {
    Mat J = Mat::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = -Mat::Identity(n, n);
    J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    return J;
}

/// N = [[-I, 0],[0, I]], the brake-symmetry reflection on R^{2n}.
inline Mat standard_N(int n) {
    Mat N = Mat::Identity(2 * n, 2 * n);
    N.topLeftCorner(n, n) = -Mat::Identity(n, n);
    return N;
}

/// exp(theta J) on R^{2n} = cos(theta) I + sin(theta) J.
inline Mat rotation_J(int n, double theta) {
    return std::cos(theta) * Mat::Identity(2 * n, 2 * n) + std::sin(theta) * standard_J(n);
}

/// Rank by singular-value thresholding at tol * max(sigma_max, scale); pass a
/// scale when A is a sub-block whose own largest singular value may vanish.
inline int rank_svd(const Mat& A, double tol = 1e-8, double scale = 0.0) {
    if (A.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(A);
    const auto& s = svd.singularValues();
    const double cut = tol * std::max(s.size() > 0 ? s(0) : 0.0, scale);
    if (cut == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return r;
}

struct KernelBasis {
    int dim = 0;
    Mat basis;  // columns span the kernel
};

/// Kernel by singular-value thresholding at tol * max(sigma_max, scale).
inline KernelBasis kernel_svd(const Mat& A, double tol = 1e-8, double scale = 0.0) {
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cut = tol * std::max(s.size() > 0 ? s(0) : 0.0, scale);
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (cut > 0.0 && s(i) > cut) ++r;
    KernelBasis k;
    k.dim = static_cast<int>(A.cols()) - r;
    k.basis = svd.matrixV().rightCols(k.dim);
    return k;
}

inline double smallest_singular_value(const Mat& A) {
    Eigen::JacobiSVD<Mat> svd(A);
    const auto& s = svd.singularValues();
    return s.size() > 0 ? s(s.size() - 1) : 0.0;
}

/// dim(span U intersect span V) for full-column-rank U, V with the same row space.
inline int intersection_dim(const Mat& U, const Mat& V, double tol = 1e-8) {
    Mat UV(U.rows(), U.cols() + V.cols());
    UV << U, V;
    return static_cast<int>(U.cols() + V.cols()) - rank_svd(UV, tol);
}

/// Thin orthonormal basis of the column span.
inline Mat orthonormalized(const Mat& F) {
    Eigen::HouseholderQR<Mat> qr(F);
    Mat Q = qr.householderQ() * Mat::Identity(F.rows(), F.cols());
    return Q;
}

/// Realification of the complex matrix X + iY as [[X, -Y],[Y, X]].
inline Mat realify(const Mat& X, const Mat& Y) {
    Mat R(2 * X.rows(), 2 * X.cols());
    R << X, -Y, Y, X;
    return R;
}

/// Inertia (m+, m0, m-) of a symmetric matrix, zero threshold relative to the
/// largest eigenvalue magnitude.
struct Inertia {
    int plus = 0, zero = 0, minus = 0;
    int signature() const { return plus - minus; }
    int dim() const { return plus + zero + minus; }
};

inline Inertia inertia_of(const Mat& S, double rel_zero_tol = 1e-8) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    const Vec& ev = es.eigenvalues();
    double scale = 0.0;
    for (int i = 0; i < ev.size(); ++i) scale = std::max(scale, std::abs(ev(i)));
    const double cut = rel_zero_tol * std::max(scale, 1e-300);
    Inertia in;
    for (int i = 0; i < ev.size(); ++i) {
        if (ev(i) > cut)
            ++in.plus;
        else if (ev(i) < -cut)
            ++in.minus;
        else
            ++in.zero;
    }
    return in;
}

/// One Newton correction toward Sp(2n): M <- M (I + 1/2 J E), E = M^T J M - J.
/// Applied twice this restores symplecticity to machine precision for small drift.
inline void symplectic_project(Mat& M, const Mat& J) {
    for (int pass = 0; pass < 2; ++pass) {
        Mat E = M.transpose() * J * M - J;
        M = M + 0.5 * M * J * E;
    }
}

inline double symplecticity_defect(const Mat& M, const Mat& J) {
    const double nf = M.squaredNorm();
    return (M.transpose() * J * M - J).norm() / std::max(1.0, nf);
}

}  // namespace symindex
