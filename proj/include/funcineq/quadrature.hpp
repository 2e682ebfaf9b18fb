#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

//! Numerical building blocks shared by every module: intervals, composite
//! Gauss–Legendre panels, adaptive bisection, golden-section search and
//! bracketed root finding.
namespace funcineq {

using RealFn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

//! Error raised for every contract violation in the library. The message is
//! the short diagnostic phrase callers match on ("divergent normalization",
//! "parameter out of range", ...).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Interval {
    double lo = -kInf;
    double hi = kInf;

    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

namespace quad {

using Rule = boost::math::quadrature::gauss<double, 20>;

//! 20-point Gauss–Legendre on a single panel.
template <class F>
double gauss_panel(F&& f, double a, double b)
{
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    // the table holds the non-negative half of the symmetric node set
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = half * x[i];
        if (x[i] == 0.0) {
            sum += w[i] * f(mid);
        } else {
            sum += w[i] * (f(mid - dx) + f(mid + dx));
        }
    }
    return half * sum;
}

//! Composite rule on `panels` equal panels.
template <class F>
double gauss_composite(F&& f, double a, double b, int panels)
{
    double sum = 0.0;
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * h;
        const double hi = (k + 1 == panels) ? b : lo + h;
        sum += gauss_panel(f, lo, hi);
    }
    return sum;
}

namespace detail {
template <class F>
double adaptive(F& f, double a, double b, double whole, double tol, int depth)
{
    const double mid = 0.5 * (a + b);
    const double left = gauss_panel(f, a, mid);
    const double right = gauss_panel(f, mid, b);
    const double both = left + right;
    if (depth <= 0 || std::abs(both - whole) <= tol || !std::isfinite(both)) {
        return both;
    }
    return adaptive(f, a, mid, left, 0.5 * tol, depth - 1) +
           adaptive(f, mid, b, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

//! Adaptive bisection of Gauss–Legendre panels. Stops when the two-level
//! estimates agree to max(abs_tol, rel_tol * |estimate|).
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-13, double abs_tol = 0.0,
                 int max_depth = 30)
{
    if (a == b) {
        return 0.0;
    }
    if (b < a) {
        return -integrate(f, b, a, rel_tol, abs_tol, max_depth);
    }
    const double whole = gauss_panel(f, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::abs(whole));
    const double est = detail::adaptive(f, a, b, whole, tol, max_depth);
    // re-run with the refined magnitude when the first guess was poor
    const double tol2 = std::max(abs_tol, rel_tol * std::abs(est));
    if (tol2 < 0.5 * tol) {
        return detail::adaptive(f, a, b, gauss_panel(f, a, b), tol2, max_depth);
    }
    return est;
}

}  // namespace quad

struct Extremum {
    double arg = 0.0;
    double value = -kInf;
};

//! Golden-section maximisation of a unimodal function on [lo, hi]. Values of
//! -inf are allowed (treated as below every finite value).
template <class F>
Extremum golden_max(F&& f, double lo, double hi, double x_tol = 1e-12, int max_iter = 200)
{
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > x_tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    Extremum best{c, fc};
    if (fd > best.value) {
        best = {d, fd};
    }
    const double fa = f(lo);
    const double fb = f(hi);
    if (fa > best.value) {
        best = {lo, fa};
    }
    if (fb > best.value) {
        best = {hi, fb};
    }
    return best;
}

//! Bracketed root of a monotone function with a sign change on [lo, hi].
template <class F>
double find_root(F&& f, double lo, double hi, double x_tol = 1e-14, std::uintmax_t max_iter = 200)
{
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo < 0) == (fhi < 0)) {
        throw Error("root not bracketed");
    }
    auto tol = [x_tol](double a, double b) {
        return std::abs(b - a) <= x_tol * (1.0 + std::abs(a));
    };
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
    return 0.5 * (r.first + r.second);
}

//! Deterministic 64-bit mixer used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

//! Open-interval uniform variate from a 64-bit word.
inline double to_unit(std::uint64_t word)
{
    return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace funcineq
