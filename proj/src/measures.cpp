#include "funcineq/measures.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace funcineq {

std::string to_string(MeasureFamily family)
{
    switch (family) {
    case MeasureFamily::mu_alpha: return "mu_alpha";
    case MeasureFamily::mu_alpha_beta: return "mu_alpha_beta";
    case MeasureFamily::tau_alpha: return "tau_alpha";
    case MeasureFamily::gamma_alpha_b: return "gamma_alpha_b";
    case MeasureFamily::gaussian: return "gaussian";
    case MeasureFamily::custom: return "custom";
    }
    return "custom";
}

MeasureSpec MeasureSpec::mu_alpha(double alpha)
{
    MeasureSpec s;
    s.family = MeasureFamily::mu_alpha;
    s.alpha = alpha;
    return s;
}

MeasureSpec MeasureSpec::mu_alpha_beta(double alpha, double beta, CoreInterpolant core)
{
    MeasureSpec s;
    s.family = MeasureFamily::mu_alpha_beta;
    s.alpha = alpha;
    s.beta = beta;
    s.core = core;
    return s;
}

MeasureSpec MeasureSpec::tau_alpha(double alpha)
{
    MeasureSpec s;
    s.family = MeasureFamily::tau_alpha;
    s.alpha = alpha;
    return s;
}

MeasureSpec MeasureSpec::gamma_alpha_b(double alpha, double b)
{
    MeasureSpec s;
    s.family = MeasureFamily::gamma_alpha_b;
    s.alpha = alpha;
    s.b = b;
    return s;
}

MeasureSpec MeasureSpec::gaussian(double sigma)
{
    MeasureSpec s;
    s.family = MeasureFamily::gaussian;
    s.sigma = sigma;
    return s;
}

nlohmann::json MeasureSpec::to_json() const
{
    nlohmann::json j;
    j["family"] = to_string(family);
    switch (family) {
    case MeasureFamily::mu_alpha:
    case MeasureFamily::tau_alpha:
        j["alpha"] = alpha;
        break;
    case MeasureFamily::mu_alpha_beta:
        j["alpha"] = alpha;
        j["beta"] = beta;
        j["core"] = core == CoreInterpolant::quartic ? "quartic" : "sextic";
        break;
    case MeasureFamily::gamma_alpha_b:
        j["alpha"] = alpha;
        j["b"] = b;
        break;
    case MeasureFamily::gaussian:
        j["sigma"] = sigma;
        break;
    case MeasureFamily::custom:
        break;
    }
    return j;
}

namespace {

double number_field(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key)) {
        throw Error(std::string("missing key: ") + key);
    }
    if (!j.at(key).is_number()) {
        throw Error(std::string("key must be numeric: ") + key);
    }
    return j.at(key).get<double>();
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) {
            ok = ok || it.key() == a;
        }
        if (!ok) {
            throw Error("unknown key: " + it.key());
        }
    }
}

}  // namespace

MeasureSpec MeasureSpec::from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
        throw Error("measure spec needs a string key: family");
    }
    const auto family = j.at("family").get<std::string>();
    if (family == "mu_alpha") {
        reject_unknown(j, {"family", "alpha"});
        return mu_alpha(number_field(j, "alpha"));
    }
    if (family == "mu_alpha_beta") {
        reject_unknown(j, {"family", "alpha", "beta", "core"});
        auto core = CoreInterpolant::quartic;
        if (j.contains("core")) {
            const auto c = j.at("core").get<std::string>();
            if (c == "sextic") {
                core = CoreInterpolant::sextic;
            } else if (c != "quartic") {
                throw Error("unknown value for key: core");
            }
        }
        return mu_alpha_beta(number_field(j, "alpha"), number_field(j, "beta"), core);
    }
    if (family == "tau_alpha") {
        reject_unknown(j, {"family", "alpha"});
        return tau_alpha(number_field(j, "alpha"));
    }
    if (family == "gamma_alpha_b") {
        reject_unknown(j, {"family", "alpha", "b"});
        return gamma_alpha_b(number_field(j, "alpha"), number_field(j, "b"));
    }
    if (family == "gaussian") {
        reject_unknown(j, {"family", "sigma"});
        return gaussian(j.contains("sigma") ? number_field(j, "sigma") : 1.0);
    }
    throw Error("unknown value for key: family");
}

struct Measure1D::State {
    RealFn phi;
    Interval support;
    std::optional<MeasureSpec> spec;
    std::optional<double> oscillation;
    nlohmann::json label;
    MeasureOptions options;
    double shift = 0.0;
    double log_z = 0.0;
    Interval window;
    std::vector<double> nodes;
    std::vector<double> cum;   // μ((-∞, nodes[k]])
    std::vector<double> rcum;  // μ([nodes[k], ∞))
    std::vector<double> dens;

    double density(double x) const
    {
        if (x < support.lo || x > support.hi) {
            return 0.0;
        }
        return std::exp(-phi(x) - log_z);
    }

    // ∫_x^{support.hi} e^{-(φ(t) - φ(x))} dt
    double scaled_upper(double x) const { return scaled_tail(x, +1); }
    // ∫_{support.lo}^x e^{-(φ(t) - φ(x))} dt
    double scaled_lower(double x) const { return scaled_tail(x, -1); }

    double scaled_tail(double x, int dir) const
    {
        const double end = dir > 0 ? support.hi : support.lo;
        if (dir > 0 ? x >= end : x <= end) {
            return 0.0;
        }
        const double px = phi(x);
        const double d = 1e-4 * (1.0 + std::abs(x));
        const double slope = std::abs(phi(x + dir * d) - px) / d;
        const double len = std::clamp(1.0 / std::max(slope, 1e-12), 1e-8, 1.0);
        auto g = [&](double s) { return std::exp(-(phi(x + dir * s) - px)); };
        double total = 0.0;
        double s = 0.0;
        double piece = len;
        for (int it = 0; it < 200; ++it) {
            double next = s + piece;
            bool last = false;
            if (std::isfinite(end) && std::abs(end - x) <= next) {
                next = std::abs(end - x);
                last = true;
            }
            const double p = quad::integrate(g, s, next, 1e-12);
            if (!std::isfinite(p)) {
                throw Error("divergent normalization");
            }
            total += p;
            if (last || (s > 0.0 && p <= 1e-18 * total)) {
                return total;
            }
            s = next;
            piece *= 2.0;
        }
        throw Error("divergent normalization");
    }

    std::size_t panel_of(double x) const
    {
        auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
        auto k = static_cast<std::size_t>(std::distance(nodes.begin(), it));
        k = k == 0 ? 0 : k - 1;
        return std::min(k, nodes.size() - 2);
    }

    double partial(double a, double b) const
    {
        return quad::gauss_panel([this](double t) { return density(t); }, a, b);
    }

    double lower_tail(double x) const
    {
        if (x >= support.hi) {
            return 1.0;
        }
        if (x < support.lo) {
            return 0.0;
        }
        if (x < window.lo) {
            return std::exp(-phi(x) - log_z) * scaled_lower(x);
        }
        if (x > window.hi) {
            return 1.0 - upper_tail(x);
        }
        const auto k = panel_of(x);
        return cum[k] + partial(nodes[k], x);
    }

    double upper_tail(double x) const
    {
        if (x <= support.lo) {
            return 1.0;
        }
        if (x > support.hi) {
            return 0.0;
        }
        if (x > window.hi) {
            return std::exp(-phi(x) - log_z) * scaled_upper(x);
        }
        if (x < window.lo) {
            return 1.0 - lower_tail(x);
        }
        const auto k = panel_of(x);
        return rcum[k + 1] + partial(x, nodes[k + 1]);
    }
};

namespace {

using State = Measure1D::State;

double find_extent(const State& s, double x0, int dir, double tail_mass, double shift)
{
    const double bound = dir > 0 ? s.support.hi : s.support.lo;
    if (std::isfinite(bound)) {
        return bound;
    }
    const double target = std::log(1.0 / tail_mass) + 8.0;
    auto ok = [&](double r) {
        const double v = s.phi(x0 + dir * r);
        if (std::isnan(v)) {
            throw Error("potential is not a number at x=" + std::to_string(x0 + dir * r));
        }
        return v - shift >= target && v >= s.phi(x0 + dir * 0.5 * r);
    };
    double r = 1.0;
    while (!ok(r)) {
        r *= 2.0;
        if (r > s.options.max_radius) {
            throw Error("divergent normalization");
        }
    }
    double lo = 0.5 * r;
    double hi = r;
    for (int i = 0; i < 20; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return x0 + dir * hi;
}

void build_tables(State& s)
{
    const auto& opt = s.options;
    const double x0 = s.support.clamp(0.0);
    double shift = kInf;
    for (int i = -40; i <= 40; ++i) {
        const double x = x0 + 0.1 * i;
        if (s.support.contains(x)) {
            shift = std::min(shift, s.phi(x));
        }
    }
    if (!std::isfinite(shift)) {
        throw Error("potential is not finite near the origin of the support");
    }
    s.shift = shift;

    double lo = find_extent(s, x0, -1, opt.tail_mass, shift);
    double hi = find_extent(s, x0, +1, opt.tail_mass, shift);

    for (int attempt = 0; attempt < 60; ++attempt) {
        s.window = {lo, hi};
        const int n = std::max(opt.table_nodes, 8);
        std::vector<double> nodes;
        nodes.reserve(static_cast<std::size_t>(n) + 2);
        if (lo < 0.0 && hi > 0.0) {
            const int nl = std::max(2, static_cast<int>(std::lround(n * (-lo) / (hi - lo))));
            const int nr = std::max(2, n - nl);
            for (int k = 0; k < nl; ++k) {
                nodes.push_back(lo + (0.0 - lo) * k / nl);
            }
            for (int k = 0; k <= nr; ++k) {
                nodes.push_back(hi * k / nr);
            }
        } else {
            for (int k = 0; k <= n; ++k) {
                nodes.push_back(lo + (hi - lo) * k / n);
            }
        }
        auto u = [&s](double t) { return std::exp(-(s.phi(t) - s.shift)); };
        std::vector<double> mass(nodes.size() - 1);
        for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
            mass[k] = quad::gauss_panel(u, nodes[k], nodes[k + 1]);
        }
        const double tail_lo =
            std::isfinite(s.support.lo) && lo <= s.support.lo ? 0.0 : u(lo) * s.scaled_lower(lo);
        const double tail_hi =
            std::isfinite(s.support.hi) && hi >= s.support.hi ? 0.0 : u(hi) * s.scaled_upper(hi);
        double total = tail_lo + tail_hi;
        for (double m : mass) {
            total += m;
        }
        if (!std::isfinite(total) || total <= 0.0) {
            throw Error("divergent normalization");
        }
        const bool lo_ok = tail_lo / total < opt.tail_mass;
        const bool hi_ok = tail_hi / total < opt.tail_mass;
        if (!lo_ok || !hi_ok) {
            const double span = hi - lo;
            if (!lo_ok) {
                lo -= 0.25 * span;
            }
            if (!hi_ok) {
                hi += 0.25 * span;
            }
            if (std::max(std::abs(lo), std::abs(hi)) > opt.max_radius) {
                throw Error("divergent normalization");
            }
            continue;
        }
        s.log_z = std::log(total) - s.shift;
        s.nodes = std::move(nodes);
        const std::size_t np = s.nodes.size();
        s.cum.assign(np, 0.0);
        s.rcum.assign(np, 0.0);
        s.cum[0] = tail_lo / total;
        for (std::size_t k = 0; k + 1 < np; ++k) {
            s.cum[k + 1] = s.cum[k] + mass[k] / total;
        }
        s.rcum[np - 1] = tail_hi / total;
        for (std::size_t k = np - 1; k-- > 0;) {
            s.rcum[k] = s.rcum[k + 1] + mass[k] / total;
        }
        s.dens.resize(np);
        for (std::size_t k = 0; k < np; ++k) {
            s.dens[k] = s.density(s.nodes[k]);
        }
        return;
    }
    throw Error("divergent normalization");
}

// C² even polynomial on [-1, 1] matching value, slope and curvature at x = 1.
RealFn core_potential(double alpha, double beta, CoreInterpolant core)
{
    const double x = 1.0;
    const double l = std::log(2.0 + x);
    const double v = std::pow(x, alpha) * std::pow(l, beta);
    const double d1 = alpha * std::pow(x, alpha - 1) * std::pow(l, beta) +
                      std::pow(x, alpha) * beta * std::pow(l, beta - 1) / (2.0 + x);
    const double d2 = alpha * (alpha - 1) * std::pow(x, alpha - 2) * std::pow(l, beta) +
                      2.0 * alpha * std::pow(x, alpha - 1) * beta * std::pow(l, beta - 1) / (2.0 + x) +
                      std::pow(x, alpha) * beta * (beta - 1) * std::pow(l, beta - 2) / ((2.0 + x) * (2.0 + x)) -
                      std::pow(x, alpha) * beta * std::pow(l, beta - 1) / ((2.0 + x) * (2.0 + x));
    if (core == CoreInterpolant::quartic) {
        const double c4 = (d2 - d1) / 8.0;
        const double c2 = (d1 - 4.0 * c4) / 2.0;
        const double c0 = v - c2 - c4;
        return [c0, c2, c4](double t) {
            const double t2 = t * t;
            return c0 + t2 * (c2 + c4 * t2);
        };
    }
    const double c6 = (d2 - d1) / 24.0;
    const double c2 = (d1 - 6.0 * c6) / 2.0;
    const double c0 = v - c2 - c6;
    return [c0, c2, c6](double t) {
        const double t2 = t * t;
        return c0 + c2 * t2 + c6 * t2 * t2 * t2;
    };
}

void require(bool ok)
{
    if (!ok) {
        throw Error("parameter out of range");
    }
}

}  // namespace

Measure1D::Measure1D(std::shared_ptr<const State> state) : state_(std::move(state)) {}

Measure1D Measure1D::build(const MeasureSpec& spec, const MeasureOptions& options)
{
    auto s = std::make_shared<State>();
    s->options = options;
    s->spec = spec;
    s->label = spec.to_json();
    const double a = spec.alpha;
    switch (spec.family) {
    case MeasureFamily::mu_alpha:
        require(a >= 1.0 && std::isfinite(a));
        s->phi = [a](double x) { return std::pow(std::abs(x), a); };
        break;
    case MeasureFamily::mu_alpha_beta: {
        require(a >= 1.0 && a <= 2.0 && std::isfinite(spec.beta));
        const double beta = spec.beta;
        auto core = core_potential(a, beta, spec.core);
        s->phi = [a, beta, core](double x) {
            const double ax = std::abs(x);
            if (ax < 1.0) {
                return core(ax);
            }
            return std::pow(ax, a) * std::pow(std::log(2.0 + ax), beta);
        };
        break;
    }
    case MeasureFamily::tau_alpha:
        require(a > 1.0 && a <= 2.0);
        s->phi = [a](double x) {
            const double ax = std::abs(x);
            return std::pow(ax, a) + std::pow(ax, a - 1.0) * std::cos(x);
        };
        break;
    case MeasureFamily::gamma_alpha_b: {
        require(a > 1.0 && a <= 2.0 && std::isfinite(spec.b));
        const double b = spec.b;
        s->support = {0.0, kInf};
        s->phi = [a, b](double x) { return std::pow(x, a) - b * std::log1p(x); };
        break;
    }
    case MeasureFamily::gaussian: {
        require(spec.sigma > 0.0 && std::isfinite(spec.sigma));
        const double inv = 1.0 / (2.0 * spec.sigma * spec.sigma);
        s->phi = [inv](double x) { return x * x * inv; };
        break;
    }
    case MeasureFamily::custom:
        throw Error("custom potentials are only available through Measure1D::custom");
    }
    build_tables(*s);
    return Measure1D(std::move(s));
}

Measure1D Measure1D::custom(RealFn potential, Interval support, const MeasureOptions& options)
{
    if (!(support.lo < support.hi)) {
        throw Error("parameter out of range");
    }
    auto s = std::make_shared<State>();
    s->options = options;
    s->phi = std::move(potential);
    s->support = support;
    s->label = {{"family", "custom"}};
    build_tables(*s);
    return Measure1D(std::move(s));
}

double Measure1D::potential(double x) const { return state_->phi(x); }
double Measure1D::density(double x) const { return state_->density(x); }
double Measure1D::normalization() const { return std::exp(state_->log_z); }
double Measure1D::log_normalization() const { return state_->log_z; }
Interval Measure1D::support() const { return state_->support; }
Interval Measure1D::window() const { return state_->window; }
const std::optional<MeasureSpec>& Measure1D::spec() const { return state_->spec; }
std::optional<double> Measure1D::oscillation() const { return state_->oscillation; }
const MeasureOptions& Measure1D::options() const { return state_->options; }

double Measure1D::cdf(double x) const { return std::clamp(state_->lower_tail(x), 0.0, 1.0); }
double Measure1D::upper_tail(double x) const { return std::clamp(state_->upper_tail(x), 0.0, 1.0); }
double Measure1D::lower_tail(double x) const { return cdf(x); }

double Measure1D::log_upper_tail(double x) const
{
    const auto& s = *state_;
    if (x > s.window.hi && x < s.support.hi) {
        return -s.phi(x) - s.log_z + std::log(s.scaled_upper(x));
    }
    return std::log(upper_tail(x));
}

double Measure1D::log_lower_tail(double x) const
{
    const auto& s = *state_;
    if (x < s.window.lo && x > s.support.lo) {
        return -s.phi(x) - s.log_z + std::log(s.scaled_lower(x));
    }
    return std::log(lower_tail(x));
}

namespace {

// x with log μ((-∞,x]) = log_p (dir < 0) or log μ([x,∞)) = log_p (dir > 0),
// searched outward from `start`.
double tail_point(const Measure1D& m, double start, double log_p, int dir)
{
    auto f = [&](double x) {
        return dir > 0 ? m.log_upper_tail(x) - log_p : m.log_lower_tail(x) - log_p;
    };
    double inner = start;
    double step = std::max(1.0, 0.1 * std::abs(start));
    double outer = start + dir * step;
    const Interval sup = m.support();
    while (f(outer) > 0.0) {
        inner = outer;
        step *= 2.0;
        outer = sup.clamp(start + dir * step);
        if (outer == inner || step > m.options().max_radius) {
            return outer;
        }
    }
    return find_root(f, std::min(inner, outer), std::max(inner, outer));
}

}  // namespace

double Measure1D::quantile(double p) const
{
    if (!(p > 0.0 && p < 1.0)) {
        throw Error("probability out of range");
    }
    const auto& s = *state_;
    if (p < s.cum.front()) {
        return tail_point(*this, s.window.lo, std::log(p), -1);
    }
    if (1.0 - p < s.rcum.back()) {
        return tail_point(*this, s.window.hi, std::log1p(-p), +1);
    }
    auto it = std::upper_bound(s.cum.begin(), s.cum.end(), p);
    auto k = static_cast<std::size_t>(std::distance(s.cum.begin(), it));
    k = std::clamp<std::size_t>(k, 1, s.nodes.size() - 1) - 1;
    auto f = [&](double x) { return s.cum[k] + s.partial(s.nodes[k], x) - p; };
    return find_root(f, s.nodes[k], s.nodes[k + 1], 1e-15);
}

Interval Measure1D::window(double tail_mass) const
{
    const auto& s = *state_;
    Interval w = s.window;
    if (!std::isfinite(s.support.lo) || s.window.lo > s.support.lo) {
        w.lo = tail_mass < s.cum.front() ? tail_point(*this, s.window.lo, std::log(tail_mass), -1)
                                          : quantile(tail_mass);
    }
    if (!std::isfinite(s.support.hi) || s.window.hi < s.support.hi) {
        if (tail_mass < s.rcum.back()) {
            w.hi = tail_point(*this, s.window.hi, std::log(tail_mass), +1);
        } else {
            auto f = [&](double x) { return std::log(upper_tail(x)) - std::log(tail_mass); };
            auto it = std::lower_bound(s.rcum.begin(), s.rcum.end(), tail_mass,
                                       [](double a, double b) { return a > b; });
            auto k = static_cast<std::size_t>(std::distance(s.rcum.begin(), it));
            k = std::clamp<std::size_t>(k, 1, s.nodes.size() - 1);
            w.hi = find_root(f, s.nodes[k - 1], s.nodes[k]);
        }
    }
    return w;
}

double Measure1D::expect(const RealFn& g) const
{
    const auto& s = *state_;
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < s.nodes.size(); ++k) {
        sum += quad::gauss_panel([&](double t) { return g(t) * s.density(t); }, s.nodes[k],
                                 s.nodes[k + 1]);
    }
    return sum;
}

double Measure1D::expect(const RealFn& g, double tail_mass, int panels) const
{
    const auto w = window(tail_mass);
    const auto& s = *state_;
    // keep a panel boundary at the origin so kinks of |x|^α stay on edges
    auto piece = [&](double a, double b, int n) {
        return quad::gauss_composite([&](double t) { return g(t) * s.density(t); }, a, b,
                                     std::max(n, 1));
    };
    if (w.lo < 0.0 && w.hi > 0.0) {
        const int nl = static_cast<int>(std::lround(panels * (-w.lo) / w.width()));
        return piece(w.lo, 0.0, nl) + piece(0.0, w.hi, panels - nl);
    }
    return piece(w.lo, w.hi, panels);
}

double Measure1D::sample_one(double u) const
{
    const auto& s = *state_;
    if (u <= s.cum.front() || u >= s.cum.back()) {
        return quantile(u);
    }
    auto it = std::upper_bound(s.cum.begin(), s.cum.end(), u);
    auto k = static_cast<std::size_t>(std::distance(s.cum.begin(), it)) - 1;
    k = std::min(k, s.nodes.size() - 2);
    const double h = s.nodes[k + 1] - s.nodes[k];
    const double f0 = s.cum[k];
    const double f1 = s.cum[k + 1];
    const double m0 = h * s.dens[k];
    const double m1 = h * s.dens[k + 1];
    auto hermite = [&](double t) {
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * f1 +
               (t3 - t2) * m1;
    };
    auto slope = [&](double t) {
        const double t2 = t * t;
        return (6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * f1 +
               (3 * t2 - 2 * t) * m1;
    };
    double a = 0.0;
    double b = 1.0;
    double t = f1 > f0 ? std::clamp((u - f0) / (f1 - f0), 0.0, 1.0) : 0.5;
    for (int it2 = 0; it2 < 60; ++it2) {
        const double r = hermite(t) - u;
        if (r > 0) {
            b = t;
        } else {
            a = t;
        }
        const double d = slope(t);
        double next = d > 0 ? t - r / d : 0.5 * (a + b);
        if (!(next > a && next < b)) {
            next = 0.5 * (a + b);
        }
        if (std::abs(next - t) < 1e-15) {
            t = next;
            break;
        }
        t = next;
    }
    return s.nodes[k] + t * h;
}

Eigen::VectorXd Measure1D::sample(Eigen::Index count, std::uint64_t seed) const
{
    if (count < 1) {
        throw Error("sample count must be positive");
    }
    std::mt19937_64 gen(seed);
    Eigen::VectorXd out(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        out(i) = sample_one(to_unit(gen()));
    }
    return out;
}

nlohmann::json Measure1D::describe() const
{
    nlohmann::json j = state_->label;
    j["Z"] = normalization();
    j["window"] = {state_->window.lo, state_->window.hi};
    if (state_->oscillation) {
        j["oscillation"] = *state_->oscillation;
    }
    return j;
}

Eigen::MatrixXd ProductMeasure::sample(Eigen::Index count, std::uint64_t seed) const
{
    if (count < 1 || dimension < 1) {
        throw Error("sample count must be positive");
    }
    std::mt19937_64 gen(seed);
    Eigen::MatrixXd out(count, dimension);
    for (Eigen::Index i = 0; i < count; ++i) {
        for (int j = 0; j < dimension; ++j) {
            out(i, j) = factor.sample_one(to_unit(gen()));
        }
    }
    return out;
}

double ks_statistic(Eigen::VectorXd samples, const Measure1D& m)
{
    std::sort(samples.data(), samples.data() + samples.size());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
        const double f = m.cdf(samples(i));
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double tail_asymptotic_ratio(const Measure1D& m, double x)
{
    if (!m.spec() || m.spec()->family != MeasureFamily::mu_alpha) {
        throw Error("tail asymptotic ratio requires a mu_alpha measure");
    }
    if (!(x > 0.0)) {
        throw Error("asymptotic regime requires positive x");
    }
    const double a = m.spec()->alpha;
    const double log_ratio = m.log_upper_tail(x) + m.log_normalization() + std::log(a) +
                             (a - 1.0) * std::log(x) + std::pow(x, a);
    return std::exp(log_ratio);
}

Measure1D perturb(const Measure1D& m, const RealFn& h, double probe_limit)
{
    const auto& base = *m.state_;
    const Interval w = base.window;
    double hmax = -kInf;
    double hmin = kInf;
    auto visit = [&](double x) {
        if (!base.support.contains(x)) {
            return;
        }
        const double v = h(x);
        if (!std::isfinite(v)) {
            throw Error("perturbation not bounded");
        }
        hmax = std::max(hmax, v);
        hmin = std::min(hmin, v);
    };
    constexpr int scan = 4096;
    for (int k = 0; k <= scan; ++k) {
        visit(w.lo + w.width() * k / scan);
    }
    // doubling probes beyond the window; growth over the last six levels
    // signals an unbounded perturbation
    std::vector<double> osc_levels;
    double r = std::max({std::abs(w.lo), std::abs(w.hi), 1.0});
    while (r <= probe_limit) {
        for (int k = 0; k <= 256; ++k) {
            const double x = r * (0.5 + 0.5 * k / 256.0);
            visit(x);
            visit(-x);
        }
        osc_levels.push_back(hmax - hmin);
        r *= 2.0;
    }
    const double osc = hmax - hmin;
    if (osc_levels.size() > 6) {
        const double before = osc_levels[osc_levels.size() - 7];
        if (osc - before > std::max(1e-3, 1e-3 * osc)) {
            throw Error("perturbation not bounded");
        }
    }
    auto s = std::make_shared<State>();
    s->options = base.options;
    s->support = base.support;
    auto phi = base.phi;
    s->phi = [phi, h](double x) { return phi(x) - h(x); };
    s->oscillation = osc;
    s->label = {{"family", "perturbed"}, {"base", base.label}, {"oscillation", osc}};
    build_tables(*s);
    return Measure1D(std::move(s));
}

double total_variation(const Measure1D& p, const Measure1D& q, int panels)
{
    const double lo = std::min(p.window().lo, q.window().lo);
    const double hi = std::max(p.window().hi, q.window().hi);
    auto diff = [&](double x) { return std::abs(p.density(x) - q.density(x)); };
    if (lo < 0.0 && hi > 0.0) {
        const int nl = std::max(1, static_cast<int>(std::lround(panels * (-lo) / (hi - lo))));
        return 0.5 * (quad::gauss_composite(diff, lo, 0.0, nl) +
                      quad::gauss_composite(diff, 0.0, hi, std::max(1, panels - nl)));
    }
    return 0.5 * quad::gauss_composite(diff, lo, hi, panels);
}

}  // namespace funcineq
