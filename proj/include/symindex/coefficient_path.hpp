#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "symindex/symplectic.hpp"

namespace symindex {

/// Continuous symmetric-matrix path B(t) on [0, tau], stored as samples on a
/// strictly increasing grid with piecewise-linear interpolation.
class CoefficientPath {
  public:
    CoefficientPath(std::vector<double> grid, std::vector<Mat> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (grid_.size() < 2 || grid_.size() != values_.size())
            throw ValidationError("CoefficientPath: need matching grid/values, >= 2 samples");
        if (grid_.front() != 0.0)
            throw ValidationError("CoefficientPath: grid must start at 0");
        for (std::size_t i = 1; i < grid_.size(); ++i)
            if (grid_[i] <= grid_[i - 1])
                throw ValidationError("CoefficientPath: grid must be strictly increasing");
        const auto rows = values_.front().rows();
        if (rows % 2 != 0) throw ValidationError("CoefficientPath: samples must be 2n x 2n");
        for (const Mat& v : values_) {
            if (v.rows() != rows || v.cols() != rows)
                throw ValidationError("CoefficientPath: inconsistent sample dimensions");
            if ((v - v.transpose()).norm() > 1e-12 * std::max(1.0, v.norm()))
                throw ValidationError("CoefficientPath: sample not symmetric within 1e-12");
        }
        n_ = static_cast<int>(rows) / 2;
    }

    /// Constant path B(t) = B0 on [0, tau].
    static CoefficientPath constant(const Mat& B0, double tau, int samples = 2) {
        std::vector<double> g;
        std::vector<Mat> v;
        for (int i = 0; i < samples; ++i) {
            g.push_back(tau * static_cast<double>(i) / (samples - 1));
            v.push_back(B0);
        }
        return CoefficientPath(std::move(g), std::move(v));
    }

    static CoefficientPath sampled(double tau, int samples, const std::function<Mat(double)>& f) {
        std::vector<double> g;
        std::vector<Mat> v;
        for (int i = 0; i < samples; ++i) {
            double t = tau * static_cast<double>(i) / (samples - 1);
            g.push_back(t);
            v.push_back(f(t));
        }
        return CoefficientPath(std::move(g), std::move(v));
    }

    int n() const { return n_; }
    double tau() const { return grid_.back(); }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<Mat>& values() const { return values_; }

    Mat value(double t) const {
        if (t <= grid_.front()) return values_.front();
        if (t >= grid_.back()) return values_.back();
        auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
        std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
        std::size_t lo = hi - 1;
        double w = (t - grid_[lo]) / (grid_[hi] - grid_[lo]);
        return (1.0 - w) * values_[lo] + w * values_[hi];
    }

    /// The off-diagonal n x n blocks vanish at both endpoints within tol.
    bool satisfies_b1(double tol = 1e-10) const {
        const int n = n_;
        auto off = [&](const Mat& B) {
            return std::max(B.topRightCorner(n, n).norm(), B.bottomLeftCorner(n, n).norm());
        };
        return off(values_.front()) <= tol && off(values_.back()) <= tol;
    }

  private:
    std::vector<double> grid_;
    std::vector<Mat> values_;
    int n_;
};

enum class ExtendMode { Half, Full };

/// N-reflected extension of a coefficient path with the vanishing-off-diagonal
/// boundary property: half doubles [0,s] to [0,2s] via B(s+t) = N B(s-t) N,
/// full additionally appends one 2s-periodic copy, giving [0,4s].
inline CoefficientPath reversible_extend(const CoefficientPath& B, ExtendMode mode) {
    if (!B.satisfies_b1())
        throw ValidationError(
            "reversible_extend: off-diagonal blocks must vanish at the endpoints");
    const double s = B.tau();
    const Mat N = standard_N(B.n());
    std::vector<double> grid = B.grid();
    std::vector<Mat> values = B.values();
    const std::size_t m = B.grid().size();
    // reflect about t = s
    for (std::size_t i = m - 1; i-- > 0;) {
        grid.push_back(2.0 * s - B.grid()[i]);
        values.push_back(N * B.values()[i] * N);
    }
    if (mode == ExtendMode::Full) {
        const std::size_t m2 = grid.size();
        for (std::size_t i = 1; i < m2; ++i) {
            grid.push_back(2.0 * s + grid[i]);
            values.push_back(values[i]);
        }
    }
    return CoefficientPath(std::move(grid), std::move(values));
}

}  // namespace symindex
