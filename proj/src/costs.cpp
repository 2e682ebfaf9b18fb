#include "funcineq/costs.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace funcineq {

double PowerPieces::value(double x) const
{
    const double ax = std::abs(x);
    if (ax <= k) {
        return q * ax * ax;
    }
    if (infinite_beyond) {
        return kInf;
    }
    return A * std::pow(ax, p) + B;
}

double PowerPieces::slope(double x) const
{
    const double ax = std::abs(x);
    const double s = x < 0 ? -1.0 : 1.0;
    if (ax <= k) {
        return 2.0 * q * x;
    }
    if (infinite_beyond) {
        return s * kInf;
    }
    return s * A * p * std::pow(ax, p - 1.0);
}

PowerPieces PowerPieces::rescaled(double t) const
{
    PowerPieces r = *this;
    r.q = q * t * t;
    r.k = k / t;
    r.A = A * std::pow(t, p);
    return r;
}

bool PowerPieces::tangent(double tol) const
{
    if (!std::isfinite(k) || infinite_beyond) {
        return true;
    }
    const double v_in = q * k * k;
    const double v_out = A * std::pow(k, p) + B;
    const double d_in = 2.0 * q * k;
    const double d_out = A * p * std::pow(k, p - 1.0);
    const double scale = 1.0 + std::abs(v_in) + std::abs(d_in);
    return std::abs(v_in - v_out) <= tol * scale && std::abs(d_in - d_out) <= tol * scale;
}

PowerPieces PowerPieces::conjugate() const
{
    PowerPieces r;
    r.q = 1.0 / (4.0 * q);
    if (!std::isfinite(k)) {
        r.k = kInf;
        return r;
    }
    r.k = 2.0 * q * k;
    if (infinite_beyond) {
        r.A = k;
        r.p = 1.0;
        r.B = -q * k * k;
        return r;
    }
    if (p == 1.0) {
        r.infinite_beyond = true;
        r.A = 0.0;
        r.p = 2.0;
        r.B = 0.0;
        return r;
    }
    r.p = p / (p - 1.0);
    r.A = A * (p - 1.0) * std::pow(A * p, -r.p);
    r.B = -B;
    return r;
}

double conjugate_exponent(double alpha)
{
    return alpha == 1.0 ? kInf : alpha / (alpha - 1.0);
}

namespace {

void check_family(double a, double alpha)
{
    if (!(a > 0.0) || !std::isfinite(a) || !(alpha >= 1.0 && alpha <= 2.0)) {
        throw Error("parameter out of range");
    }
}

CostFunction from_pieces(const PowerPieces& pc, CostKind kind)
{
    CostFunction c;
    c.evaluate = [pc](double x) { return pc.value(x); };
    c.derivative = [pc](double x) { return pc.slope(x); };
    c.kind = kind;
    c.pieces = pc;
    c.convex = true;
    if (pc.infinite_beyond) {
        c.finite_domain = {-pc.k, pc.k};
    }
    return c;
}

}  // namespace

CostFunction l_cost(double a, double alpha)
{
    check_family(a, alpha);
    PowerPieces pc;
    pc.k = a;
    pc.A = std::pow(a, 2.0 - alpha) / alpha;
    pc.p = alpha;
    pc.B = a * a * (alpha - 2.0) / (2.0 * alpha);
    auto c = from_pieces(pc, CostKind::L);
    c.a = a;
    c.alpha = alpha;
    c.beta = conjugate_exponent(alpha);
    return c;
}

CostFunction h_cost(double a, double alpha)
{
    check_family(a, alpha);
    PowerPieces pc;
    pc.k = a;
    if (alpha == 1.0) {
        pc.infinite_beyond = true;
    } else {
        const double beta = conjugate_exponent(alpha);
        pc.A = std::pow(a, 2.0 - beta) / beta;
        pc.p = beta;
        pc.B = a * a * (beta - 2.0) / (2.0 * beta);
    }
    auto c = from_pieces(pc, CostKind::H);
    c.a = a;
    c.alpha = alpha;
    c.beta = conjugate_exponent(alpha);
    return c;
}

bool midpoint_convex(const RealFn& f, double radius, int points, double tol)
{
    const double h = 2.0 * radius / points;
    for (int i = 0; i + 2 <= points; ++i) {
        const double x0 = -radius + i * h;
        const double f0 = f(x0);
        const double f1 = f(x0 + h);
        const double f2 = f(x0 + 2.0 * h);
        if (!std::isfinite(f0) || !std::isfinite(f1) || !std::isfinite(f2)) {
            continue;
        }
        if (f1 > 0.5 * (f0 + f2) + tol * (1.0 + std::abs(f1))) {
            return false;
        }
    }
    return true;
}

CostFunction h_general(HGeneralFamily family, double alpha, double beta)
{
    RealFn tail;
    RealFn tail_slope;
    std::string name;
    switch (family) {
    case HGeneralFamily::alpha_beta: {
        if (!(alpha > 1.0 && alpha < 2.0) || !std::isfinite(beta)) {
            throw Error("unsupported (α,β) combination");
        }
        const double p = alpha / (alpha - 1.0);
        const double r = beta / (alpha - 1.0);
        tail = [p, r](double x) { return std::pow(x, p) / std::pow(std::log(x), r); };
        tail_slope = [p, r](double x) {
            const double l = std::log(x);
            return std::pow(x, p - 1.0) * (p - r / l) / std::pow(l, r);
        };
        name = "alpha_beta";
        break;
    }
    case HGeneralFamily::alpha1_beta: {
        if (!(beta > 0.0) || !std::isfinite(beta)) {
            throw Error("unsupported (α,β) combination");
        }
        alpha = 1.0;
        tail = [beta](double x) { return x * x * std::exp(std::pow(x, 1.0 / beta)); };
        tail_slope = [beta](double x) {
            const double s = std::pow(x, 1.0 / beta);
            return std::exp(s) * (2.0 * x + x * s / beta);
        };
        name = "alpha1_beta";
        break;
    }
    case HGeneralFamily::alpha2_beta: {
        if (!(beta <= 0.0) || !std::isfinite(beta)) {
            throw Error("unsupported (α,β) combination");
        }
        alpha = 2.0;
        tail = [beta](double x) { return x * x * std::pow(std::log(x), -beta); };
        tail_slope = [beta](double x) {
            const double l = std::log(x);
            return x * std::pow(l, -beta - 1.0) * (2.0 * l - beta);
        };
        name = "alpha2_beta";
        break;
    }
    }
    const double c2 = tail(2.0) / 4.0;
    CostFunction c;
    c.evaluate = [tail, c2](double x) {
        const double ax = std::abs(x);
        return ax <= 2.0 ? c2 * ax * ax : tail(ax);
    };
    c.derivative = [tail_slope, c2](double x) {
        const double ax = std::abs(x);
        const double s = x < 0 ? -1.0 : 1.0;
        return s * (ax <= 2.0 ? 2.0 * c2 * ax : tail_slope(ax));
    };
    c.kind = CostKind::HGeneral;
    c.a = 2.0;
    c.alpha = alpha;
    c.beta = beta;
    c.convex = midpoint_convex(c.evaluate, 50.0, 5000);
    c.details = {{"variant", name},
                 {"core_coefficient", c2},
                 {"derivative_mismatch", tail_slope(2.0) - 4.0 * c2},
                 {"convex_on_scan", c.convex}};
    return c;
}

CostFunction scale(const CostFunction& c, double t)
{
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw Error("parameter out of range");
    }
    CostFunction r = c;
    auto f = c.evaluate;
    auto df = c.derivative;
    r.evaluate = [f, t](double x) { return f(t * x); };
    r.derivative = [df, t](double x) { return t * df(t * x); };
    r.kind = CostKind::Scaled;
    r.a = c.a / t;
    r.finite_domain = {c.finite_domain.lo / t, c.finite_domain.hi / t};
    if (c.pieces) {
        r.pieces = c.pieces->rescaled(t);
    }
    r.details["base"] = c.to_json();
    r.details["scale"] = t;
    return r;
}

CostFunction dirichlet_cost()
{
    auto c = scale(h_cost(1.0, 2.0), std::sqrt(2.0));
    c.a = kInf;
    c.details = {{"family", "dirichlet"}};
    return c;
}

CostFunction power_cost(double p)
{
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw Error("parameter out of range");
    }
    CostFunction c;
    c.evaluate = [p](double x) { return std::pow(std::abs(x), p); };
    c.derivative = [p](double x) {
        return (x < 0 ? -p : p) * std::pow(std::abs(x), p - 1.0);
    };
    c.kind = CostKind::Custom;
    c.alpha = p / (p - 1.0);
    c.beta = p;
    c.details = {{"family", "power"}, {"exponent", p}};
    return c;
}

namespace {

// sup over branch stationary points and the junction of the even piecewise shape
double conjugate_by_branches(const PowerPieces& pc, double y)
{
    const double ay = std::abs(y);
    double best = 0.0;  // x = 0
    const double xq = ay / (2.0 * pc.q);
    if (xq <= pc.k) {
        best = std::max(best, ay * xq - pc.q * xq * xq);
    } else {
        best = std::max(best, ay * pc.k - pc.q * pc.k * pc.k);
    }
    if (!std::isfinite(pc.k) || pc.infinite_beyond) {
        return best;
    }
    if (pc.p == 1.0) {
        if (ay > pc.A) {
            return kInf;
        }
        return std::max(best, ay * pc.k - (pc.A * pc.k + pc.B));
    }
    const double xs = std::pow(ay / (pc.A * pc.p), 1.0 / (pc.p - 1.0));
    if (xs >= pc.k) {
        best = std::max(best, ay * xs - (pc.A * std::pow(xs, pc.p) + pc.B));
    }
    return best;
}

double conjugate_numeric(const RealFn& c, double y, double radius, int grid_size)
{
    const double ay = std::abs(y);
    auto g = [&](double x) {
        const double v = c(x);
        return std::isfinite(v) ? x * ay - v : -kInf;
    };
    // g is concave: bracket the maximiser by doubling, then golden section
    double lo = 0.0;
    double mid = radius / std::max(grid_size, 8);
    double g_lo = g(lo);
    double g_mid = g(mid);
    if (g_mid <= g_lo) {
        return std::max(g_lo, golden_max(g, lo, mid, 1e-15).value);
    }
    while (mid < 1e15) {
        const double hi = 2.0 * mid;
        const double g_hi = g(hi);
        if (g_hi <= g_mid) {
            return std::max(g_mid, golden_max(g, lo, hi, 1e-15).value);
        }
        // barely rising: either the maximiser sits between mid and hi, or g
        // approaches a finite supremum
        if (g_hi - g_mid <= 1e-14 * (1.0 + std::abs(g_hi))) {
            return std::max(g_hi, golden_max(g, lo, hi, 1e-15).value);
        }
        lo = mid;
        g_lo = g_mid;
        mid = hi;
        g_mid = g_hi;
    }
    return kInf;
}

}  // namespace

CostFunction legendre(const CostFunction& c, double search_radius, int grid_size,
                      LegendreMethod method)
{
    if (!c.convex) {
        throw Error("Legendre of non-convex input not supported");
    }
    if (!(search_radius > 0.0)) {
        throw Error("parameter out of range");
    }
    CostFunction r;
    r.kind = CostKind::Conjugate;
    r.a = c.a;
    r.alpha = c.alpha;
    r.beta = c.beta;
    r.details = {{"of", c.to_json()}};
    if (method == LegendreMethod::automatic && c.pieces) {
        const auto pc = *c.pieces;
        r.evaluate = [pc](double y) { return conjugate_by_branches(pc, y); };
        if (pc.tangent()) {
            const auto dual = pc.conjugate();
            r.pieces = dual;
            r.derivative = [dual](double y) { return dual.slope(y); };
            if (dual.infinite_beyond) {
                r.finite_domain = {-dual.k, dual.k};
            }
        }
        r.details["method"] = "branches";
    } else {
        auto f = c.evaluate;
        r.evaluate = [f, search_radius, grid_size](double y) {
            return conjugate_numeric(f, y, search_radius, grid_size);
        };
        r.details["method"] = "numeric";
    }
    if (!r.derivative) {
        auto f = r.evaluate;
        r.derivative = [f](double y) {
            const double h = 1e-6 * (1.0 + std::abs(y));
            return (f(y + h) - f(y - h)) / (2.0 * h);
        };
    }
    return r;
}

nlohmann::json CostFunction::to_json() const
{
    nlohmann::json j;
    switch (kind) {
    case CostKind::L: j["family"] = "L"; break;
    case CostKind::H: j["family"] = "H"; break;
    case CostKind::HGeneral: j["family"] = "H_general"; break;
    case CostKind::Scaled: j["family"] = "scaled"; break;
    case CostKind::Conjugate: j["family"] = "conjugate"; break;
    case CostKind::Custom: j["family"] = "custom"; break;
    }
    if (std::isfinite(a)) {
        j["a"] = a;
    }
    if (std::isfinite(alpha)) {
        j["alpha"] = alpha;
    }
    if (kind == CostKind::HGeneral && std::isfinite(beta)) {
        j["beta"] = beta;
    }
    if (!details.empty()) {
        j["details"] = details;
    }
    return j;
}

namespace {

double cost_number(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw Error(std::string("missing or non-numeric key: ") + key);
    }
    return j.at(key).get<double>();
}

}  // namespace

CostFunction cost_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
        throw Error("cost spec needs a string key: family");
    }
    const auto family = j.at("family").get<std::string>();
    std::vector<std::string> allowed{"family"};
    CostFunction c;
    if (family == "L" || family == "H") {
        allowed = {"family", "a", "alpha"};
    } else if (family == "H_general") {
        allowed = {"family", "alpha", "beta"};
    } else if (family != "dirichlet") {
        throw Error("unknown value for key: family");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            throw Error("unknown key: " + it.key());
        }
    }
    if (family == "L") {
        return l_cost(cost_number(j, "a"), cost_number(j, "alpha"));
    }
    if (family == "H") {
        return h_cost(cost_number(j, "a"), cost_number(j, "alpha"));
    }
    if (family == "H_general") {
        const double alpha = cost_number(j, "alpha");
        const double beta = cost_number(j, "beta");
        if (alpha == 1.0) {
            return h_general(HGeneralFamily::alpha1_beta, alpha, beta);
        }
        if (alpha == 2.0) {
            return h_general(HGeneralFamily::alpha2_beta, alpha, beta);
        }
        return h_general(HGeneralFamily::alpha_beta, alpha, beta);
    }
    return dirichlet_cost();
}

}  // namespace funcineq
