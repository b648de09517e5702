#pragma once

#include <cstdint>
#include <vector>

#include "symindex/coefficient_path.hpp"

namespace symindex {

/// Deterministic xorshift-family generator (xoshiro256**) seeded through
/// splitmix64. No library distributions: identical streams on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        auto splitmix = [&s]() {
            s += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        };
        for (auto& w : state_) w = splitmix();
    }

    std::uint64_t next_u64() {
        auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (no cached spare).
    double gauss() {
        double u1 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    int integer(int lo, int hi) {  // inclusive range
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

  private:
    std::uint64_t state_[4];
};

inline Mat random_gaussian_matrix(Rng& rng, int rows, int cols) {
    Mat M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = rng.gauss();
    return M;
}

inline Mat random_orthogonal(Rng& rng, int d) {
    Mat G = random_gaussian_matrix(rng, d, d);
    Eigen::HouseholderQR<Mat> qr(G);
    Mat Q = qr.householderQ() * Mat::Identity(d, d);
    Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i)
        if (R(i, i) < 0) Q.col(i) = -Q.col(i);
    return Q;
}

/// Random symplectic matrix as the time-one flow of a random constant form.
inline Mat random_symplectic(Rng& rng, int n, double scale = 1.0) {
    Mat S = random_gaussian_matrix(rng, 2 * n, 2 * n);
    S = 0.5 * (S + S.transpose());
    CoefficientPath B = CoefficientPath::constant(scale * S, 1.0);
    return fundamental_solution(B, 256).endpoint();
}

struct RandomPathOptions {
    double tau = 1.0;
    double amplitude = 3.0;   // scale of the spline eigenvalue curves
    int harmonics = 3;
    int grid_points = 129;
    bool positive = false;    // positive semidefinite B(t)
};

/// Random coefficient path with the vanishing-off-diagonal boundary property
/// enforced exactly: B = w S + (1 - w) blockdiag(S) with S = Q^T diag(f_i) Q
/// for smooth scalar curves f_i and a bump w vanishing at both ends.
inline CoefficientPath random_b1_path(Rng& rng, int n, const RandomPathOptions& opt = {}) {
    const int d = 2 * n;
    const Mat Q = random_orthogonal(rng, d);

    struct Curve {
        double c0;
        std::vector<double> a, b;
    };
    std::vector<Curve> curves(d);
    for (int i = 0; i < d; ++i) {
        Curve c;
        if (opt.positive) {
            c.c0 = opt.amplitude * (0.55 + 0.45 * rng.uniform());
        } else {
            c.c0 = opt.amplitude * rng.uniform(-1.0, 1.0);
        }
        for (int h = 1; h <= opt.harmonics; ++h) {
            // positive case: harmonic amplitudes summing below c0 keep every
            // eigenvalue curve nonnegative
            const double cap = (opt.positive ? 0.3 * c.c0 : 0.6 * opt.amplitude) / (h * h);
            c.a.push_back(cap * rng.uniform(-1.0, 1.0));
            c.b.push_back(cap * rng.uniform(-1.0, 1.0));
        }
        curves[i] = std::move(c);
    }
    auto eval_curve = [&](const Curve& c, double t) {
        double v = c.c0;
        for (std::size_t h = 0; h < c.a.size(); ++h) {
            const double w = 2.0 * M_PI * (h + 1) * t / opt.tau;
            v += c.a[h] * std::cos(w) + c.b[h] * std::sin(w);
        }
        return v;
    };

    std::vector<double> grid;
    std::vector<Mat> values;
    for (int p = 0; p < opt.grid_points; ++p) {
        const double t = opt.tau * p / (opt.grid_points - 1);
        Vec diag(d);
        for (int i = 0; i < d; ++i) diag(i) = eval_curve(curves[i], t);
        Mat S = Q.transpose() * diag.asDiagonal() * Q;
        S = 0.5 * (S + S.transpose());
        const double w = std::pow(std::sin(M_PI * t / opt.tau), 2);
        Mat Bt = S;
        Bt.topRightCorner(n, n) *= w;
        Bt.bottomLeftCorner(n, n) *= w;
        grid.push_back(t);
        values.push_back(Bt);
    }
    return CoefficientPath(std::move(grid), std::move(values));
}

/// Ordered pair B1 >= B2 of (B1)-paths, both positive semidefinite.
inline std::pair<CoefficientPath, CoefficientPath> random_ordered_pair(
    Rng& rng, int n, const RandomPathOptions& opt_base = {}) {
    RandomPathOptions opt = opt_base;
    opt.positive = true;
    CoefficientPath B2 = random_b1_path(rng, n, opt);
    RandomPathOptions opt_extra = opt;
    opt_extra.amplitude = 0.5 * opt.amplitude;
    CoefficientPath extra = random_b1_path(rng, n, opt_extra);
    std::vector<Mat> sum;
    for (std::size_t i = 0; i < B2.values().size(); ++i)
        sum.push_back(B2.values()[i] + extra.values()[i]);
    return {CoefficientPath(B2.grid(), std::move(sum)), std::move(B2)};
}

}  // namespace symindex
