#include "funcineq/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace funcineq {

nlohmann::json SupResult::to_json() const
{
    return {{"x_star", x_star},
            {"sup_value", finite ? nlohmann::json(value) : nlohmann::json("inf")},
            {"classification", classification()},
            {"end_slope", end_slope}};
}

namespace {

std::vector<double> probe_grid(Interval w, int probes, const std::vector<double>& extra)
{
    std::vector<double> xs;
    const double l0 = std::log(w.lo);
    const double l1 = std::log(w.hi);
    for (int i = 0; i < probes; ++i) {
        xs.push_back(std::exp(l0 + (l1 - l0) * i / (probes - 1)));
    }
    xs.front() = w.lo;
    xs.back() = w.hi;
    for (double b : extra) {
        if (b > w.lo && b < w.hi) {
            xs.push_back(b);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

// Sup of exp(logp) over the probe, refined by golden search next to the best
// probe and classified by the log-log slope at the right end.
template <class LogP>
SupResult log_sup(const std::vector<double>& xs, const std::vector<double>& logp, LogP&& refine,
                  double divergence_slope)
{
    const std::size_t n = xs.size();
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (logp[i] > logp[best]) {
            best = i;
        }
    }
    SupResult r;
    const std::size_t back = std::max<std::size_t>(n / 20, 2);
    const std::size_t j = n - 1 - back;
    r.end_slope = (logp[n - 1] - logp[j]) / (std::log(xs[n - 1]) - std::log(xs[j]));
    if (!std::isfinite(r.end_slope)) {
        r.end_slope = 0.0;
    }
    if (best + back >= n - 1 && r.end_slope > divergence_slope) {
        r.finite = false;
        r.value = kInf;
        r.x_star = xs[n - 1];
        return r;
    }
    r.x_star = xs[best];
    double lp = logp[best];
    if (best > 0 && best + 1 < n) {
        const auto e = golden_max(refine, xs[best - 1], xs[best + 1], 1e-13);
        if (e.value > lp) {
            lp = e.value;
            r.x_star = e.arg;
        }
    }
    r.value = std::exp(lp);
    return r;
}

}  // namespace

SupResult hardy_constant(const HardyPair& pair, const ProbeOptions& options)
{
    if (!(pair.window.lo > 0.0 && pair.window.hi > pair.window.lo)) {
        throw Error("parameter out of range");
    }
    auto inv = [&](double t) {
        const double n = pair.nu_density(t);
        if (!(n > 0.0) || !std::isfinite(1.0 / n)) {
            std::ostringstream msg;
            msg << "criterion integrand diverges at t=" << t;
            throw Error(msg.str());
        }
        return 1.0 / n;
    };
    std::vector<double> cuts = pair.breakpoints;
    std::sort(cuts.begin(), cuts.end());
    // ∫ over [a, b], split at breakpoints so step densities integrate exactly
    auto piece = [&](double a, double b) {
        double sum = 0.0;
        double lo = a;
        for (double c : cuts) {
            if (c > lo && c < b) {
                sum += quad::integrate(inv, lo, c, 1e-14);
                lo = c;
            }
        }
        return sum + quad::integrate(inv, lo, b, 1e-14);
    };
    const auto xs = probe_grid(pair.window, options.probes, cuts);
    std::vector<double> inner(xs.size());
    std::vector<double> logp(xs.size());
    double acc = piece(0.0, xs[0]);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) {
            acc += piece(xs[i - 1], xs[i]);
        }
        inner[i] = acc;
        const double p = pair.mu_tail(xs[i]) * acc;
        logp[i] = p > 0.0 ? std::log(p) : -kInf;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (logp[i] > logp[best]) {
            best = i;
        }
    }
    const std::size_t base = best > 0 ? best - 1 : 0;
    auto refine = [&](double x) {
        const double p = pair.mu_tail(x) * (inner[base] + piece(xs[base], x));
        return p > 0.0 ? std::log(p) : -kInf;
    };
    return log_sup(xs, logp, refine, options.divergence_slope);
}

HardyPair DiscreteHardyPair::to_pair() const
{
    const Eigen::Index n = points.size();
    if (n < 1 || masses.size() != n || densities.size() != n) {
        throw Error("discrete pair needs matching points, masses and densities");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(points(i) > (i > 0 ? points(i - 1) : 0.0))) {
            throw Error("points must be positive and increasing");
        }
    }
    HardyPair p;
    const Eigen::VectorXd t = points;
    const Eigen::VectorXd m = masses;
    const Eigen::VectorXd d = densities;
    p.mu_tail = [t, m](double x) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < t.size(); ++i) {
            if (t(i) >= x) {
                s += m(i);
            }
        }
        return s;
    };
    p.nu_density = [t, d](double x) {
        for (Eigen::Index i = 0; i < t.size(); ++i) {
            if (x <= t(i)) {
                return d(i);
            }
        }
        return d(t.size() - 1);
    };
    p.breakpoints.assign(t.data(), t.data() + n);
    p.window = {1e-3 * t(0), t(n - 1) + 1.0};
    return p;
}

double DiscreteHardyPair::criterion() const
{
    const Eigen::Index n = points.size();
    double best = 0.0;
    double inner = 0.0;
    double prev = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        inner += (points(k) - prev) / densities(k);
        prev = points(k);
        best = std::max(best, masses.tail(n - k).sum() * inner);
    }
    return best;
}

double BartheRoberto::lower() const { return std::max(b_minus.value, b_plus.value); }
double BartheRoberto::upper() const { return std::max(B_minus.value, B_plus.value); }

bool BartheRoberto::finite() const
{
    return b_minus.finite && b_plus.finite && B_minus.finite && B_plus.finite;
}

nlohmann::json BartheRoberto::to_json() const
{
    return {{"b_minus", b_minus.to_json()},
            {"b_plus", b_plus.to_json()},
            {"B_minus", B_minus.to_json()},
            {"B_plus", B_plus.to_json()}};
}

namespace {

// log ∫_0^x e^{φ(s·t) − φ(s·x)} / h(s·t) dt for x > 0 and side s = ±1
double log_scaled_inner(const Measure1D& m, const RealFn& h, double x, int side)
{
    const double px = m.potential(side * x);
    auto g = [&](double t) {
        const double w = h(side * t);
        if (!(w > 0.0)) {
            throw Error("weight must be positive");
        }
        return std::exp(m.potential(side * t) - px) / w;
    };
    double total = 0.0;
    double hi = x;
    double len = std::min(x, 0.25);
    while (hi > 0.0) {
        const double lo = std::max(0.0, hi - len);
        const double p = quad::integrate(g, lo, hi, 1e-13);
        total += p;
        if (lo == 0.0 || (p <= 1e-17 * total && hi < x)) {
            break;
        }
        hi = lo;
        len *= 2.0;
    }
    return std::log(total);
}

struct SideResult {
    SupResult small;
    SupResult big;
};

SideResult side_sups(const Measure1D& m, const RealFn& h, int side, const ProbeOptions& options)
{
    const double log_z = m.log_normalization();
    auto log_tail = [&](double x) {
        return side > 0 ? m.log_upper_tail(x) : m.log_lower_tail(-x);
    };
    // log μ(tail) + log log(1 + c/μ) + log ∫ Z e^φ / h
    auto log_product = [&](double x, bool upper) {
        const double lt = log_tail(x);
        const double mu = std::exp(lt);
        const double loglog = upper ? std::log(std::log(mu + std::exp(2.0)) - lt)
                                    : std::log(std::log1p(2.0 * mu) - std::log(2.0) - lt);
        return lt + loglog + log_z + m.potential(side * x) + log_scaled_inner(m, h, x, side);
    };
    const Interval sup = m.support();
    const double edge = side > 0 ? sup.hi : -sup.lo;
    double x_max = edge;
    if (!std::isfinite(edge)) {
        const auto far = m.window(1e-200);
        x_max = side > 0 ? far.hi : -far.lo;
    }
    if (!(x_max > 1e-3)) {
        throw Error("measure has no mass on this side");
    }
    const auto xs = probe_grid({1e-3, x_max}, options.probes, {});
    std::vector<double> small(xs.size());
    std::vector<double> big(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        small[i] = log_product(xs[i], false);
        big[i] = log_product(xs[i], true);
    }
    SideResult r;
    r.small = log_sup(xs, small, [&](double x) { return log_product(x, false); },
                      options.divergence_slope);
    r.big = log_sup(xs, big, [&](double x) { return log_product(x, true); },
                    options.divergence_slope);
    if (side < 0) {
        r.small.x_star = -r.small.x_star;
        r.big.x_star = -r.big.x_star;
    }
    return r;
}

}  // namespace

BartheRoberto barthe_roberto_constants(const Measure1D& m, const RealFn& h,
                                       const ProbeOptions& options)
{
    const Interval s = m.support();
    if (!(s.lo < 0.0 && s.hi > 0.0)) {
        throw Error("measure must charge both half-lines");
    }
    const auto plus = side_sups(m, h, +1, options);
    const auto minus = side_sups(m, h, -1, options);
    return {minus.small, plus.small, minus.big, plus.big};
}

const BartheRoberto& require_finite(const BartheRoberto& c)
{
    if (!c.finite()) {
        throw Error("weighted LSI constant infinite");
    }
    return c;
}

RealFn saturating_weight(double alpha)
{
    if (!(alpha > 1.0 && alpha <= 2.0)) {
        throw Error("parameter out of range");
    }
    return [alpha](double x) {
        const double ax = std::abs(x);
        return ax <= 1.0 ? 1.0 : std::pow(ax, 2.0 - alpha);
    };
}

RealFn saturating_weight(double alpha, double beta)
{
    if (!(alpha > 1.0 && alpha <= 2.0) || !std::isfinite(beta)) {
        throw Error("parameter out of range");
    }
    const double inner = std::pow(2.0, 2.0 - alpha) / std::pow(std::log(2.0), beta);
    return [alpha, beta, inner](double x) {
        const double ax = std::abs(x);
        return ax <= 2.0 ? inner : std::pow(ax, 2.0 - alpha) / std::pow(std::log(ax), beta);
    };
}

}  // namespace funcineq
