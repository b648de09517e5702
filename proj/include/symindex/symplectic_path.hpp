#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "symindex/coefficient_path.hpp"

namespace symindex {

namespace detail {

/// One classical RK4 step of gamma' = J B(t) gamma followed by reprojection
/// onto the symplectic group.
inline Mat rk4_step(const Mat& J, const CoefficientPath& B, const Mat& g, double t, double h) {
    auto f = [&](double s, const Mat& y) -> Mat { return J * (B.value(s) * y); };
    Mat k1 = f(t, g);
    Mat k2 = f(t + 0.5 * h, g + 0.5 * h * k1);
    Mat k3 = f(t + 0.5 * h, g + 0.5 * h * k2);
    Mat k4 = f(t + h, g + h * k3);
    Mat out = g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    symplectic_project(out, J);
    return out;
}

}  // namespace detail

/// A continuous path gamma: [0, tau] -> Sp(2n) with gamma(0) = I, stored as
/// samples on a grid, optionally carrying the coefficient path it solves.
class SymplecticPath {
  public:
    SymplecticPath(std::vector<double> grid, std::vector<Mat> samples,
                   std::optional<CoefficientPath> source = std::nullopt)
        : grid_(std::move(grid)), samples_(std::move(samples)), source_(std::move(source)) {
        if (grid_.size() < 2 || grid_.size() != samples_.size())
            throw ValidationError("SymplecticPath: need matching grid/samples");
        if (grid_.front() != 0.0) throw ValidationError("SymplecticPath: grid must start at 0");
        n_ = static_cast<int>(samples_.front().rows()) / 2;
        const Mat I = Mat::Identity(2 * n_, 2 * n_);
        if ((samples_.front() - I).norm() != 0.0) {
            if ((samples_.front() - I).norm() > 1e-12)
                throw ValidationError("SymplecticPath: gamma(0) must be the identity");
            samples_.front() = I;
        }
        const Mat J = standard_J(n_);
        for (const Mat& s : samples_)
            if (symplecticity_defect(s, J) > 1e-7)
                throw ValidationError("SymplecticPath: sample off Sp(2n) beyond 1e-7");
    }

    int n() const { return n_; }
    double tau() const { return grid_.back(); }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<Mat>& samples() const { return samples_; }
    const Mat& endpoint() const { return samples_.back(); }
    const std::optional<CoefficientPath>& source() const { return source_; }

    /// Value at an arbitrary time; re-integrates from the nearest earlier
    /// sample when a coefficient source exists, interpolates otherwise.
    Mat value(double t) const {
        if (t <= 0.0) return samples_.front();
        if (t >= tau()) return samples_.back();
        auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
        std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
        std::size_t lo = hi - 1;
        if (t == grid_[lo]) return samples_[lo];
        const Mat J = standard_J(n_);
        if (source_) {
            Mat g = samples_[lo];
            const double span = t - grid_[lo];
            const int sub = 4;
            const double h = span / sub;
            for (int i = 0; i < sub; ++i)
                g = detail::rk4_step(J, *source_, g, grid_[lo] + i * h, h);
            return g;
        }
        double w = (t - grid_[lo]) / (grid_[hi] - grid_[lo]);
        Mat g = (1.0 - w) * samples_[lo] + w * samples_[hi];
        symplectic_project(g, J);
        return g;
    }

  private:
    std::vector<double> grid_;
    std::vector<Mat> samples_;
    std::optional<CoefficientPath> source_;
    int n_;
};

/// Fundamental solution of gamma' = J B(t) gamma, gamma(0) = I, by fixed-step
/// RK4 with per-step symplectic reprojection. The step count is doubled until
/// the endpoint stabilizes to 1e-9 (deterministic grids, no adaptive control).
inline SymplecticPath fundamental_solution(const CoefficientPath& B, int steps = 0) {
    const int n = B.n();
    const Mat J = standard_J(n);
    const double tau = B.tau();
    auto integrate = [&](int m) {
        std::vector<double> grid(m + 1);
        std::vector<Mat> samples(m + 1);
        samples[0] = Mat::Identity(2 * n, 2 * n);
        grid[0] = 0.0;
        const double h = tau / m;
        for (int i = 0; i < m; ++i) {
            grid[i + 1] = (i + 1 == m) ? tau : h * (i + 1);
            samples[i + 1] = detail::rk4_step(J, B, samples[i], grid[i], h);
        }
        return std::make_pair(std::move(grid), std::move(samples));
    };

    int m = steps;
    if (m == 0) m = std::max(64, static_cast<int>(2048.0 * std::max(1.0, std::ceil(tau))));
    if (m < 64) throw ValidationError("fundamental_solution: steps >= 64 required");

    auto [grid, samples] = integrate(m);
    if (steps == 0) {
        for (int pass = 0; pass < 4; ++pass) {
            auto [grid2, samples2] = integrate(2 * m);
            if ((samples2.back() - samples.back()).norm() <= 1e-9) {
                grid = std::move(grid2);
                samples = std::move(samples2);
                break;
            }
            m *= 2;
            grid = std::move(grid2);
            samples = std::move(samples2);
        }
    }
    for (const Mat& s : samples)
        if (symplecticity_defect(s, J) > 1e-6)
            throw IntegrationError(
                "fundamental_solution: symplectic drift beyond 1e-6; increase steps");
    return SymplecticPath(std::move(grid), std::move(samples), B);
}

/// Inserts grid-doubling samples in [t*-radius, t*+radius]; values come from
/// local re-integration when a source exists, interpolation otherwise.
inline SymplecticPath refine_near(const SymplecticPath& path, double t_star, double radius) {
    if (t_star < 0.0 || t_star > path.tau())
        throw ValidationError("refine_near: t* outside the path domain");
    if (radius <= 0.0) return path;
    std::vector<double> grid;
    std::vector<Mat> samples;
    const auto& g = path.grid();
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        grid.push_back(g[i]);
        samples.push_back(path.samples()[i]);
        const double mid = 0.5 * (g[i] + g[i + 1]);
        if (mid >= t_star - radius && mid <= t_star + radius) {
            grid.push_back(mid);
            samples.push_back(path.value(mid));
        }
    }
    grid.push_back(g.back());
    samples.push_back(path.samples().back());
    return SymplecticPath(std::move(grid), std::move(samples), path.source());
}

}  // namespace symindex
