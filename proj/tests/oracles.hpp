#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerics.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

//! Standard normal CDF.
inline double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

//! log E e^{λX} for X with density e^{−x²}/√π.
inline double mu2_log_mgf(double lambda)
{
    return lambda * lambda / 4.0;
}

//! Ent(e^{λX}) = λ M′(λ) − M log M with M the moment generating function.
inline double entropy_of_exponential(double lambda, double log_m, double dlog_m)
{
    const double m = std::exp(log_m);
    return lambda * dlog_m * m - m * log_m;
}

//! Best constant A in ∫ (f − f(0))² dμ ≤ A ∫ f′² dν for μ = Σ m_k δ_{t_k} and ν
//! with density n_k on (t_{k−1}, t_k]. Between atoms the optimal f is linear,
//! so A is the top generalized eigenvalue of SᵀMS against diag(n_k/Δ_k),
//! S the cumulative-sum matrix acting on increments.
inline double hardy_best_constant(const Eigen::VectorXd& t, const Eigen::VectorXd& m,
                                  const Eigen::VectorXd& n)
{
    const Eigen::Index k = t.size();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            S(i, j) = 1.0;
        }
    }
    const Eigen::MatrixXd num = S.transpose() * m.asDiagonal() * S;
    Eigen::VectorXd d(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        d(i) = n(i) / (t(i) - (i > 0 ? t(i - 1) : 0.0));
    }
    const Eigen::MatrixXd den = d.asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(num, den);
    return es.eigenvalues().maxCoeff();
}

//! Exhaustive minimum over permutations of (1/n) Σ L(x_i − y_σ(i)): the
//! vertices of the Birkhoff polytope, hence the LP optimum for uniform weights.
inline double assignment_minimum(const std::vector<double>& x, const std::vector<double>& y,
                                 const std::function<double(double)>& L)
{
    std::vector<int> perm(x.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += L(x[i] - y[static_cast<std::size_t>(perm[i])]);
        }
        best = std::min(best, s / static_cast<double>(x.size()));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

//! sup_x {xy − c(x)} by a dense scan with parabolic polishing of the best cell.
inline double grid_conjugate(const std::function<double(double)>& c, double y, double radius,
                             int points)
{
    const double h = 2.0 * radius / points;
    double best = -std::numeric_limits<double>::infinity();
    int arg = 0;
    auto g = [&](double x) {
        const double v = c(x);
        return std::isfinite(v) ? x * y - v : -std::numeric_limits<double>::infinity();
    };
    for (int i = 0; i <= points; ++i) {
        const double v = g(-radius + i * h);
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    if (arg > 0 && arg < points) {
        // ternary search inside the two neighbouring cells
        double lo = -radius + (arg - 1) * h;
        double hi = -radius + (arg + 1) * h;
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (g(m1) < g(m2)) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        best = std::max(best, g(0.5 * (lo + hi)));
    }
    return best;
}

//! Moreau envelope of |x| with quadratic cost x²/2 at t = 1.
inline double moreau_abs(double x)
{
    const double ax = std::abs(x);
    return ax <= 1.0 ? 0.5 * x * x : ax - 0.5;
}

//! Composite Simpson rule on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int n)
{
    n += n % 2;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    }
    return s * h / 3.0;
}

}  // namespace oracle
