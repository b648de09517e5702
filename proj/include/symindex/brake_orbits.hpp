#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symindex/galerkin.hpp"
#include "symindex/iteration.hpp"
#include "symindex/signature.hpp"

namespace symindex {

/// Autonomous Hamiltonian with analytic derivative evaluators (or central
/// difference fallbacks) and the symmetry flags the period theorems need.
struct Hamiltonian {
    int n = 1;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;   // optional; finite differences otherwise
    std::function<Mat(const Vec&)> hessian;    // optional
    bool reversible = false;                   // H(N x) = H(x)
    bool even = false;                         // H(-x) = H(x)
    bool superquadratic = false;               // declared growth property of the library entry
    bool vanishes_quadratically_at_zero = false;
    bool nonnegative = false;
    bool semipositive_hessian = false;
    std::optional<Mat> quadratic_part;         // B0 = diag(B11, B22) when H = 1/2 B0 x.x + rest
    std::string name;

    Vec grad(const Vec& x) const {
        if (gradient) return gradient(x);
        const double h = 1e-6 * (1.0 + x.norm());
        Vec g(x.size());
        for (int i = 0; i < x.size(); ++i) {
            Vec xp = x, xm = x;
            xp(i) += h;
            xm(i) -= h;
            g(i) = (value(xp) - value(xm)) / (2.0 * h);
        }
        return g;
    }

    Mat hess(const Vec& x) const {
        if (hessian) return hessian(x);
        const double h = 1e-5 * (1.0 + x.norm());
        const int d = static_cast<int>(x.size());
        Mat H(d, d);
        for (int i = 0; i < d; ++i) {
            Vec xp = x, xm = x;
            xp(i) += h;
            xm(i) -= h;
            Vec gp = grad(xp), gm = grad(xm);
            H.col(i) = (gp - gm) / (2.0 * h);
        }
        return 0.5 * (H + H.transpose());
    }

    /// Sampled check of the reversibility identity H(Nx) = H(x).
    bool check_reversible(unsigned seed = 12345, int samples = 32) const {
        const Mat N = standard_N(n);
        unsigned long long s = seed;
        auto next = [&s]() {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            return static_cast<double>(s % 2000001) / 1000000.0 - 1.0;
        };
        for (int k = 0; k < samples; ++k) {
            Vec x(2 * n);
            for (int i = 0; i < 2 * n; ++i) x(i) = 2.0 * next();
            const double hx = value(x);
            if (std::abs(value(N * x) - hx) > 1e-10 * (1.0 + std::abs(hx))) return false;
        }
        return true;
    }

    bool check_even(unsigned seed = 54321, int samples = 32) const {
        unsigned long long s = seed;
        auto next = [&s]() {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            return static_cast<double>(s % 2000001) / 1000000.0 - 1.0;
        };
        for (int k = 0; k < samples; ++k) {
            Vec x(2 * n);
            for (int i = 0; i < 2 * n; ++i) x(i) = 2.0 * next();
            const double hx = value(x);
            if (std::abs(value(-x) - hx) > 1e-10 * (1.0 + std::abs(hx))) return false;
        }
        return true;
    }
};

/// Built-in example library. Each entry satisfies the documented subset of
/// the structural hypotheses, with analytic derivatives throughout.
namespace hamiltonians {

/// H = 1/2 |x|^2: linear flow, closed-form orbits.
inline Hamiltonian harmonic(int n) {
    Hamiltonian H;
    H.n = n;
    H.name = "harmonic";
    H.value = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
    H.gradient = [](const Vec& x) { return x; };
    H.hessian = [](const Vec& x) { return Mat::Identity(x.size(), x.size()); };
    H.reversible = H.even = H.nonnegative = H.semipositive_hessian = true;
    H.quadratic_part = Mat::Identity(2 * n, 2 * n);
    return H;
}

/// H = sum over k of c_k |x|^(2k), radial polynomial.
inline Hamiltonian radial_poly(int n, std::vector<double> coeffs, std::string name = "radial") {
    Hamiltonian H;
    H.n = n;
    H.name = std::move(name);
    auto c = std::make_shared<std::vector<double>>(std::move(coeffs));
    H.value = [c](const Vec& x) {
        const double s = x.squaredNorm();
        double acc = 0.0, p = s;
        for (double ck : *c) {
            acc += ck * p;
            p *= s;
        }
        return acc;
    };
    H.gradient = [c](const Vec& x) {
        const double s = x.squaredNorm();
        double hprime = 0.0, p = 1.0;
        for (std::size_t k = 0; k < c->size(); ++k) {
            hprime += (*c)[k] * (k + 1.0) * p;
            p *= s;
        }
        return Vec(2.0 * hprime * x);
    };
    H.hessian = [c](const Vec& x) {
        const double s = x.squaredNorm();
        double h1 = 0.0, h2 = 0.0, p = 1.0, q = 1.0;
        for (std::size_t k = 0; k < c->size(); ++k) {
            h1 += (*c)[k] * (k + 1.0) * p;
            p *= s;
        }
        for (std::size_t k = 1; k < c->size(); ++k) {
            h2 += (*c)[k] * (k + 1.0) * k * q;
            q *= s;
        }
        const int d = static_cast<int>(x.size());
        return Mat(2.0 * h1 * Mat::Identity(d, d) + 4.0 * h2 * x * x.transpose());
    };
    H.reversible = H.even = true;
    return H;
}

/// H = 1/2|x|^2 + 1/4 |x|^4: circular orbits with amplitude-dependent period.
inline Hamiltonian quartic(int n) {
    Hamiltonian H = radial_poly(n, {0.5, 0.25}, "quartic");
    H.nonnegative = H.semipositive_hessian = true;
    H.quadratic_part = Mat::Identity(2 * n, 2 * n);
    return H;
}

/// H = 1/4 |x|^4: superquadratic at zero and infinity.
inline Hamiltonian pure_quartic(int n) {
    Hamiltonian H = radial_poly(n, {0.0, 0.25}, "pure-quartic");
    H.nonnegative = H.semipositive_hessian = true;
    H.superquadratic = true;
    H.vanishes_quadratically_at_zero = true;
    H.quadratic_part = Mat::Zero(2 * n, 2 * n);
    return H;
}

/// H = 1/2 (a |x1|^2 + b |x2|^2), block-diagonal quadratic part.
inline Hamiltonian anisotropic(int n, double a, double b) {
    Hamiltonian H;
    H.n = n;
    H.name = "anisotropic";
    Mat B0 = Mat::Identity(2 * n, 2 * n);
    B0.topLeftCorner(n, n) *= a;
    B0.bottomRightCorner(n, n) *= b;
    auto B = std::make_shared<Mat>(B0);
    H.value = [B](const Vec& x) { return 0.5 * x.dot(*B * x); };
    H.gradient = [B](const Vec& x) { return Vec(*B * x); };
    H.hessian = [B](const Vec&) { return *B; };
    H.reversible = H.even = true;
    H.nonnegative = (a >= 0.0 && b >= 0.0);
    H.semipositive_hessian = H.nonnegative;
    H.quadratic_part = B0;
    return H;
}

/// H = 1/4 sum x_i^4: even, non-radial, superquadratic.
inline Hamiltonian even_quartic(int n) {
    Hamiltonian H;
    H.n = n;
    H.name = "even-quartic";
    H.value = [](const Vec& x) { return 0.25 * x.array().pow(4).sum(); };
    H.gradient = [](const Vec& x) { return Vec(x.array().pow(3).matrix()); };
    H.hessian = [](const Vec& x) {
        return Mat((3.0 * x.array().square()).matrix().asDiagonal());
    };
    H.reversible = H.even = H.nonnegative = H.semipositive_hessian = true;
    H.superquadratic = true;
    H.vanishes_quadratically_at_zero = true;
    H.quadratic_part = Mat::Zero(2 * n, 2 * n);
    return H;
}

}  // namespace hamiltonians

/// Brake orbit found numerically: trajectory on [0, T] with x(-t) = N x(t)
/// built by reflection of the shooting arc on [0, T/2].
struct BrakeOrbit {
    Hamiltonian H;
    double T = 0.0;
    std::vector<double> grid;    // on [0, T]
    std::vector<Vec> samples;
    double boundary_residual = 0.0;
    double energy_drift = 0.0;
    bool symmetric = false;      // x(t + T/2) = -x(t) within 1e-7
    bool trivial = false;        // |q0| below 1e-8, the constant solution
    double tau_min = 0.0;
    int period_divisor = 1;      // T / tau_min

    Vec at(double t) const {
        double s = std::fmod(t, T);
        if (s < 0) s += T;
        auto it = std::upper_bound(grid.begin(), grid.end(), s);
        std::size_t hi = std::min<std::size_t>(it - grid.begin(), grid.size() - 1);
        std::size_t lo = hi - 1;
        double w = (s - grid[lo]) / (grid[hi] - grid[lo]);
        return (1.0 - w) * samples[lo] + w * samples[hi];
    }

    double amplitude() const {
        double a = 0.0;
        for (const Vec& x : samples) a = std::max(a, x.norm());
        return a;
    }
};

namespace detail {

/// RK4 on z' = J H'(z) together with the variational equation Y' = J H'' Y.
inline void flow_with_variation(const Hamiltonian& H, Vec& z, Mat& Y, double h) {
    const Mat J = standard_J(H.n);
    auto fz = [&](const Vec& x) { return Vec(J * H.grad(x)); };
    auto fY = [&](const Vec& x, const Mat& M) { return Mat(J * H.hess(x) * M); };
    Vec k1 = fz(z);
    Mat K1 = fY(z, Y);
    Vec k2 = fz(z + 0.5 * h * k1);
    Mat K2 = fY(z + 0.5 * h * k1, Y + 0.5 * h * K1);
    Vec k3 = fz(z + 0.5 * h * k2);
    Mat K3 = fY(z + 0.5 * h * k2, Y + 0.5 * h * K2);
    Vec k4 = fz(z + h * k3);
    Mat K4 = fY(z + h * k3, Y + h * K3);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Y += (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
}

}  // namespace detail

/// Shooting for brake orbits: integrate from (0, q0) on the half period and
/// drive the first n coordinates at T/2 to zero by Newton iteration, with the
/// Jacobian from the variational equation.
inline BrakeOrbit shoot_brake(const Hamiltonian& H, double T, Vec q0, int steps_per_unit = 512) {
    const int n = H.n;
    if (!H.check_reversible())
        throw ValidationError("shoot_brake: Hamiltonian is not reversible");
    if (q0.size() != n) throw ValidationError("shoot_brake: q0 must have length n");

    const int steps = std::max(256, static_cast<int>(steps_per_unit * std::ceil(T / 2.0)));
    const double h = (T / 2.0) / steps;

    auto shoot = [&](const Vec& q, std::vector<Vec>* store) {
        Vec z = Vec::Zero(2 * n);
        z.tail(n) = q;
        Mat Y = Mat::Identity(2 * n, 2 * n);
        if (store) store->push_back(z);
        for (int i = 0; i < steps; ++i) {
            detail::flow_with_variation(H, z, Y, h);
            if (store) store->push_back(z);
        }
        Vec residual = z.head(n);
        Mat jac = Y.topRightCorner(n, n);  // d x1(T/2) / d q0
        return std::make_pair(residual, jac);
    };

    Vec q = q0;
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        auto [res, jac] = shoot(q, nullptr);
        if (res.norm() < 1e-10) {
            converged = true;
            break;
        }
        Vec dq = jac.colPivHouseholderQr().solve(res);
        if (!dq.allFinite()) break;
        q -= dq;
        if (!q.allFinite()) break;
    }
    if (!converged) {
        auto [res, jac] = shoot(q, nullptr);
        (void)jac;
        if (res.norm() >= 1e-10)
            throw NonConvergenceError("shoot_brake: Newton did not reach residual 1e-10");
    }

    BrakeOrbit orbit;
    orbit.H = H;
    orbit.T = T;
    orbit.trivial = q.norm() < 1e-8;

    std::vector<Vec> half;
    auto [res, jac] = shoot(q, &half);
    (void)jac;
    orbit.boundary_residual = res.norm() + std::abs(half.front().head(n).norm());

    const Mat N = standard_N(n);
    for (int i = 0; i <= steps; ++i) {
        orbit.grid.push_back(h * i);
        orbit.samples.push_back(half[i]);
    }
    // x(t) = N x(T - t) on the second half
    for (int i = steps - 1; i >= 0; --i) {
        orbit.grid.push_back(T - h * i);
        orbit.samples.push_back(N * half[i]);
    }

    const double e0 = H.value(orbit.samples.front());
    for (const Vec& x : orbit.samples)
        orbit.energy_drift = std::max(orbit.energy_drift, std::abs(H.value(x) - e0));
    if (orbit.energy_drift > 1e-8 * (1.0 + std::abs(e0)))
        throw IntegrationError("shoot_brake: energy drift beyond tolerance");

    // symmetry flag: x(t + T/2) = -x(t)
    double sym = 0.0;
    for (int i = 0; i <= steps; ++i)
        sym = std::max(sym, (orbit.at(orbit.grid[i] + T / 2.0) + orbit.samples[i]).norm());
    orbit.symmetric = sym <= 1e-7 * std::max(1.0, orbit.amplitude());

    // minimal period scan
    orbit.tau_min = T;
    orbit.period_divisor = 1;
    if (!orbit.trivial) {
        const double amp = orbit.amplitude();
        for (int k = 64; k >= 2; --k) {
            const double tau = T / k;
            double dev = 0.0;
            for (int i = 0; i <= steps; ++i)
                dev = std::max(dev, (orbit.at(orbit.grid[i] + tau) - orbit.samples[i]).norm());
            if (dev < 1e-6 * amp) {
                orbit.tau_min = tau;
                orbit.period_divisor = k;
                break;
            }
        }
    }
    return orbit;
}

/// Smallest tau = T/k (k <= 64) with x(. + tau) = x within 1e-6 amplitude.
inline std::pair<double, int> minimal_period(const BrakeOrbit& orbit) {
    if (orbit.trivial) throw ValidationError("minimal_period: orbit is constant");
    return {orbit.tau_min, orbit.period_divisor};
}

/// Coefficient path B(t) = H''(x(t)) along the orbit, restricted to [0, span].
inline CoefficientPath orbit_coefficients(const BrakeOrbit& orbit, double span,
                                          int samples = 1025) {
    std::vector<double> grid;
    std::vector<Mat> values;
    for (int i = 0; i < samples; ++i) {
        const double t = span * i / (samples - 1);
        grid.push_back(t);
        Mat Ht = orbit.H.hess(orbit.at(t));
        values.push_back(0.5 * (Ht + Ht.transpose()));
    }
    return CoefficientPath(std::move(grid), std::move(values));
}

enum class OrbitIndexMode { Brake, Symmetric };

/// Index of the symplectic path associated with an orbit: the boundary family
/// on the half period for brake mode, the rotated family on the quarter
/// period for symmetric mode.
inline IndexRecord orbit_index(const BrakeOrbit& orbit, OrbitIndexMode mode) {
    if (mode == OrbitIndexMode::Symmetric && !orbit.symmetric)
        throw ValidationError("orbit_index: orbit is not symmetric");
    const double span = (mode == OrbitIndexMode::Brake) ? orbit.T / 2.0 : orbit.T / 4.0;
    SymplecticPath gamma = fundamental_solution(orbit_coefficients(orbit, span));
    if (mode == OrbitIndexMode::Brake) return i_L(gamma, 0);
    return i_omega_L0(gamma, M_PI / 2.0);
}

enum class PeriodTheorem { T11, T12, T13, T14, T15 };

struct SpotcheckReport {
    PeriodTheorem which = PeriodTheorem::T11;
    bool applicable = false;
    std::string note;
    long bound_divisor = 0;    // k must satisfy k <= bound_divisor
    int observed_divisor = 0;  // T / tau_min
    bool sharp_tested = false; // the positive-definite integral gate
    bool sharp_pass = true;    // divisor within {1, 2} (or {1, 3} symmetric)
    bool pass = false;
};

/// Tests the minimal-period conclusion of one of the period theorems on a
/// found orbit: hypothesis gates are sampled, the bound is computed from the
/// indices of the quadratic part, and the observed divisor must respect it.
inline SpotcheckReport theorem_spotcheck(const BrakeOrbit& orbit, PeriodTheorem which) {
    SpotcheckReport rep;
    rep.which = which;
    const Hamiltonian& H = orbit.H;
    const int n = H.n;
    if (orbit.trivial) {
        rep.note = "constant orbit; theorems concern nonconstant solutions";
        return rep;
    }

    // (H5) sampled along the trajectory
    bool h5 = true;
    for (std::size_t i = 0; i < orbit.samples.size(); i += 7) {
        Eigen::SelfAdjointEigenSolver<Mat> es(H.hess(orbit.samples[i]), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9) h5 = false;
    }
    const bool h1 = H.check_reversible();
    const bool growth = H.superquadratic && H.vanishes_quadratically_at_zero && H.nonnegative;

    auto quadratic_indices = [&](double span, IndexFamily fam) {
        Mat B0 = H.quadratic_part.value_or(Mat::Zero(2 * n, 2 * n));
        CoefficientPath b0 = CoefficientPath::constant(B0, span);
        SymplecticPath gb = fundamental_solution(b0);
        if (fam == IndexFamily::L0) return i_L(gb, 0);
        return i_omega_L0(gb, M_PI / 2.0);
    };

    // (zhi6)-type integral of the lower diagonal Hessian block on [0, T/2]
    auto b22_integral_positive = [&] {
        Mat i22 = Mat::Zero(n, n);
        const int m = 257;
        const double h = (orbit.T / 2.0) / (m - 1);
        for (int i = 0; i < m; ++i) {
            const double w = (i == 0 || i == m - 1) ? 0.5 : 1.0;
            i22 += w * h * H.hess(orbit.at(h * i)).bottomRightCorner(n, n);
        }
        return Eigen::SelfAdjointEigenSolver<Mat>(i22, Eigen::EigenvaluesOnly)
                   .eigenvalues()
                   .minCoeff() > 1e-10;
    };

    switch (which) {
        case PeriodTheorem::T11:
        case PeriodTheorem::T12: {
            if (!(h1 && growth && h5)) {
                rep.note = "hypotheses (H1)-(H5) not all satisfied";
                return rep;
            }
            if (which == PeriodTheorem::T12 && n != 1) {
                rep.note = "n = 1 only";
                return rep;
            }
            rep.applicable = true;
            rep.bound_divisor = 2 * n + 2;
            rep.observed_divisor = orbit.period_divisor;
            rep.pass = rep.observed_divisor <= rep.bound_divisor;
            if (which == PeriodTheorem::T12) {
                rep.bound_divisor = 2;
                rep.pass = rep.observed_divisor <= 2;
            }
            if (b22_integral_positive()) {
                rep.sharp_tested = true;
                rep.sharp_pass = rep.observed_divisor <= 2;
                rep.pass = rep.pass && rep.sharp_pass;
            }
            return rep;
        }
        case PeriodTheorem::T13: {
            if (!H.quadratic_part || !(h1 && h5)) {
                rep.note = "needs a declared block-diagonal quadratic part and (H1)-(H5)";
                return rep;
            }
            rep.applicable = true;
            IndexRecord rec = quadratic_indices(orbit.T / 2.0, IndexFamily::L0);
            rep.bound_divisor = 2 * (rec.index + rec.nullity) + 2 * n + 2;
            rep.observed_divisor = orbit.period_divisor;
            rep.pass = rep.observed_divisor <= rep.bound_divisor;
            return rep;
        }
        case PeriodTheorem::T14:
        case PeriodTheorem::T15: {
            if (!(h1 && H.even && h5)) {
                rep.note = "needs (H1), (H5), (H6)";
                return rep;
            }
            if (!orbit.symmetric) {
                rep.note = "orbit is not symmetric";
                return rep;
            }
            rep.applicable = true;
            rep.observed_divisor = orbit.period_divisor;
            if (which == PeriodTheorem::T14) {
                rep.bound_divisor = 3;
                rep.pass = rep.observed_divisor == 1 || rep.observed_divisor == 3;
            } else {
                IndexRecord rec = quadratic_indices(orbit.T / 4.0, IndexFamily::OmegaL0);
                const long s = rec.index + rec.nullity;
                rep.bound_divisor = (s % 2 == 0) ? 4 * s + 3 : 4 * s + 7;
                rep.pass = rep.observed_divisor <= rep.bound_divisor;
            }
            return rep;
        }
    }
    return rep;
}

struct LinearBoundReport {
    bool applicable = false;
    long i_rot = 0;
    int nu_rot = 0;
    long i_B0 = 0;
    int nu_B0 = 0;
    bool pass = false;
    std::string note;
};

/// For 0 < T < pi / |B0|: the comparison rotation exp((pi/T - eps) t J) has
/// vanishing boundary nullity and index on the half period, which squeezes
/// index + nullity of the constant path B0 to zero.
inline LinearBoundReport linear_bound_check(const Mat& B0, double T) {
    LinearBoundReport rep;
    const int n = static_cast<int>(B0.rows()) / 2;
    Eigen::SelfAdjointEigenSolver<Mat> es(B0, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw ValidationError("linear_bound_check: B0 must be positive semidefinite");
    if (B0.topRightCorner(n, n).norm() > 1e-12 || B0.bottomLeftCorner(n, n).norm() > 1e-12)
        throw ValidationError("linear_bound_check: B0 must be block-diagonal");
    const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
    if (norm > 0.0 && T >= M_PI / norm) {
        rep.note = "T >= pi / |B0|; hypothesis gate fails";
        return rep;
    }
    rep.applicable = true;
    const double eps = 0.5 * (M_PI / T - norm);
    const double rate = M_PI / T - eps;

    CoefficientPath rot = CoefficientPath::constant(rate * Mat::Identity(2 * n, 2 * n), T / 2.0);
    SymplecticPath grot = fundamental_solution(rot);
    IndexRecord rrec = i_L(grot, 0);
    rep.i_rot = rrec.index;
    rep.nu_rot = rrec.nullity;

    CoefficientPath cb0 = CoefficientPath::constant(B0, T / 2.0);
    SymplecticPath gb0 = fundamental_solution(cb0);
    IndexRecord brec = i_L(gb0, 0);
    GalerkinResult galerkin = index_from_galerkin(cb0, IndexFamily::L0);
    if (galerkin.record.index != brec.index || galerkin.record.nullity != brec.nullity)
        throw ConsistencyError("linear_bound_check: engines disagree on the B0 index");
    rep.i_B0 = brec.index;
    rep.nu_B0 = brec.nullity;
    rep.pass = (rep.i_rot == 0 && rep.nu_rot == 0 && rep.i_B0 + rep.nu_B0 == 0);
    return rep;
}

}  // namespace symindex
