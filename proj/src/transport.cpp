#include "funcineq/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace funcineq {

namespace {

// y with μ([y, ∞)) = upper, for upper possibly far below double epsilon
double upper_quantile(const Measure1D& m, double upper)
{
    if (upper > 1e-12) {
        return m.quantile(1.0 - upper);
    }
    const double log_p = std::log(upper);
    auto f = [&](double y) { return m.log_upper_tail(y) - log_p; };
    double inner = m.quantile(1.0 - 1e-12);
    double step = 1.0;
    double outer = inner + step;
    const Interval sup = m.support();
    while (f(outer) > 0.0) {
        inner = outer;
        step *= 2.0;
        outer = sup.clamp(inner + step);
        if (outer == inner) {
            return outer;
        }
    }
    return find_root(f, inner, outer);
}

}  // namespace

Coupling1D::Coupling1D(const Measure1D& base, RealFn F, const Measure1D& target, int panels)
    : base_(base), F_(std::move(F)), target_(target), window_(base.window(1e-40))
{
    if (panels < 1) {
        throw Error("parameter out of range");
    }
    nodes_.resize(static_cast<std::size_t>(panels) + 1);
    for (int k = 0; k <= panels; ++k) {
        nodes_[static_cast<std::size_t>(k)] =
            window_.lo + window_.width() * static_cast<double>(k) / panels;
    }
    nodes_.back() = window_.hi;
    std::vector<double> mass(static_cast<std::size_t>(panels));
    for (std::size_t k = 0; k < mass.size(); ++k) {
        mass[k] = quad::gauss_panel([this](double x) { return weight(x); }, nodes_[k], nodes_[k + 1]);
        if (!(mass[k] >= 0.0)) {
            throw Error("density must be nonnegative");
        }
    }
    cum_.assign(nodes_.size(), 0.0);
    rcum_.assign(nodes_.size(), 0.0);
    for (std::size_t k = 0; k < mass.size(); ++k) {
        cum_[k + 1] = cum_[k] + mass[k];
    }
    for (std::size_t k = mass.size(); k-- > 0;) {
        rcum_[k] = rcum_[k + 1] + mass[k];
    }
    z_ = cum_.back();
    if (!(z_ > 0.0) || !std::isfinite(z_)) {
        throw Error("density has no mass");
    }
    if (std::abs(z_ - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "density integrates to " << z_ << "; renormalized";
        warnings_.push_back(msg.str());
    }
}

double Coupling1D::weight(double x) const
{
    const double d = base_.density(x);
    return d > 0.0 ? F_(x) * d : 0.0;
}

double Coupling1D::source_lower(double x) const
{
    if (x <= window_.lo) {
        return 0.0;
    }
    if (x >= window_.hi) {
        return 1.0;
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const auto k = static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
    const double part = quad::gauss_panel([this](double t) { return weight(t); }, nodes_[k], x);
    return (cum_[k] + part) / z_;
}

double Coupling1D::source_upper(double x) const
{
    if (x <= window_.lo) {
        return 1.0;
    }
    if (x >= window_.hi) {
        return 0.0;
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const auto k = static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
    const double part = quad::gauss_panel([this](double t) { return weight(t); }, x, nodes_[k + 1]);
    return (rcum_[k + 1] + part) / z_;
}

double Coupling1D::map(double x) const
{
    const double lower = source_lower(x);
    const double upper = source_upper(x);
    double y = 0.0;
    if (lower <= upper) {
        const double p = std::max(lower, 1e-300);
        y = target_.quantile(p);
        for (int it = 0; it < 2; ++it) {
            const double d = target_.density(y);
            if (!(d > 0.0) || p < 1e-12) {
                break;
            }
            y += (p - target_.lower_tail(y)) / d;
        }
    } else {
        const double q = std::max(upper, 1e-300);
        y = upper_quantile(target_, q);
        for (int it = 0; it < 2; ++it) {
            const double d = target_.density(y);
            if (!(d > 0.0) || q < 1e-12) {
                break;
            }
            y += (target_.upper_tail(y) - q) / d;
        }
    }
    return y;
}

double Coupling1D::expect(const RealFn& g) const
{
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
        sum += quad::gauss_panel(
            [&](double x) {
                const double w = weight(x);
                return w > 0.0 ? g(x) * w : 0.0;
            },
            nodes_[k], nodes_[k + 1]);
    }
    return sum / z_;
}

double Coupling1D::pushforward_error(int points) const
{
    double worst = 0.0;
    for (int j = 1; j < points; ++j) {
        const double p = static_cast<double>(j) / points;
        // source point holding mass p on its left
        const double x = find_root([&](double s) { return source_lower(s) - p; }, window_.lo,
                                   window_.hi, 1e-15);
        worst = std::max(worst, std::abs(target_.cdf(map(x)) - source_lower(x)));
    }
    return worst;
}

double ot_cost(const CostFunction& L, const RealFn& F, const Measure1D& m,
               std::vector<std::string>* warnings)
{
    if (!L.convex) {
        throw Error("optimality of monotone coupling not guaranteed");
    }
    const Coupling1D c(m, F, m);
    if (warnings) {
        warnings->insert(warnings->end(), c.warnings().begin(), c.warnings().end());
    }
    return c.expect([&](double x) { return L(x - c.map(x)); });
}

double discrete_monotone_cost(const Eigen::VectorXd& x, const Eigen::VectorXd& wx,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& wy,
                              const CostFunction& L)
{
    if (x.size() != wx.size() || y.size() != wy.size() || x.size() == 0 || y.size() == 0) {
        throw Error("atoms and weights must match");
    }
    if (!L.convex) {
        throw Error("optimality of monotone coupling not guaranteed");
    }
    if ((wx.array() < 0.0).any() || (wy.array() < 0.0).any() ||
        std::abs(wx.sum() - wy.sum()) > 1e-12 * std::max(1.0, wx.sum())) {
        throw Error("weights must be nonnegative with equal totals");
    }
    auto order = [](const Eigen::VectorXd& v) {
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            idx[static_cast<std::size_t>(i)] = i;
        }
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v(a) < v(b); });
        return idx;
    };
    const auto ix = order(x);
    const auto iy = order(y);
    std::size_t i = 0;
    std::size_t j = 0;
    double left = wx(ix[0]);
    double right = wy(iy[0]);
    double cost = 0.0;
    while (i < ix.size() && j < iy.size()) {
        const double moved = std::min(left, right);
        cost += moved * L(x(ix[i]) - y(iy[j]));
        left -= moved;
        right -= moved;
        if (left <= 0.0 && ++i < ix.size()) {
            left = wx(ix[i]);
        }
        if (right <= 0.0 && ++j < iy.size()) {
            right = wy(iy[j]);
        }
    }
    return cost;
}

double density_entropy(const Measure1D& m, const RealFn& F)
{
    const Coupling1D c(m, F, m);
    return c.expect([&](double x) {
               const double v = F(x);
               return v > 0.0 ? std::log(v) : 0.0;
           }) -
           std::log(c.normalization());
}

GridFunction hopf_lax(const GridFunction& f, const CostFunction& L, double t)
{
    if (!(t >= 0.0)) {
        throw Error("parameter out of range");
    }
    if (t == 0.0) {
        return f;
    }
    const auto& x = f.nodes();
    const auto& v = f.values();
    const Eigen::Index n = x.size();
    const double osc = v.maxCoeff() - v.minCoeff();
    auto cost = [&](double d) { return t * L(d / t); };
    auto interp = [&](double y, Eigen::Index k) {
        // linear interpolation on [x_k, x_{k+1}]
        const double s = (y - x(k)) / (x(k + 1) - x(k));
        return v(k) + s * (v(k + 1) - v(k));
    };
    Eigen::VectorXd q(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = v(i);
        Eigen::Index arg = i;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double c = cost(x(i) - x(j));
            if (c > osc) {
                break;
            }
            if (v(j) + c < best) {
                best = v(j) + c;
                arg = j;
            }
        }
        for (Eigen::Index j = i - 1; j >= 0; --j) {
            const double c = cost(x(i) - x(j));
            if (c > osc) {
                break;
            }
            if (v(j) + c < best) {
                best = v(j) + c;
                arg = j;
            }
        }
        for (Eigen::Index k : {arg - 1, arg}) {
            if (k < 0 || k + 1 >= n) {
                continue;
            }
            auto objective = [&](double y) { return -(interp(y, k) + cost(x(i) - y)); };
            const auto e = golden_max(objective, x(k), x(k + 1), 1e-14);
            best = std::min(best, -e.value);
        }
        q(i) = best;
    }
    return GridFunction(x, std::move(q));
}

double dual_check(const GridMeasure& g, double C, double a, double alpha, const GridFunction& f)
{
    if (!(C > 0.0) || !(a > 0.0)) {
        throw Error("parameter out of range");
    }
    if (g.size() != f.size() || (g.nodes - f.nodes()).cwiseAbs().maxCoeff() > 0.0) {
        throw Error("function and grid measure must share nodes");
    }
    const auto L = l_cost(a * C / 2.0, alpha);
    const auto q = hopf_lax(f, L, 1.0);
    const double k = 4.0 / C;
    const Eigen::VectorXd e = k * q.values();
    const double top = e.maxCoeff();
    const double log_int = top + std::log(g.integrate((e.array() - top).exp().matrix()));
    return k * g.integrate(f.values()) - log_int;
}

std::vector<DensityMember> translation_densities(const Measure1D& m, const std::vector<double>& shifts)
{
    std::vector<DensityMember> out;
    for (double c : shifts) {
        out.push_back({"translation",
                       {{"shift", c}},
                       [m, c](double x) { return std::exp(m.potential(x) - m.potential(x - c)); }});
    }
    return out;
}

std::vector<DensityMember> tilt_densities(const Measure1D& m, const std::vector<double>& lambdas)
{
    std::vector<DensityMember> out;
    for (double l : lambdas) {
        const double log_mgf = std::log(m.expect([l](double x) { return std::exp(l * x); }, 1e-40, 2048));
        out.push_back({"tilt",
                       {{"lambda", l}},
                       [l, log_mgf](double x) { return std::exp(l * x - log_mgf); }});
    }
    return out;
}

InequalityReport verify_talagrand(const Measure1D& m, double C, double a, double alpha,
                                  const std::vector<DensityMember>& densities, double tolerance)
{
    if (!(C > 0.0) || !(a > 0.0)) {
        throw Error("parameter out of range");
    }
    const auto L = l_cost(a * C / 2.0, alpha);
    InequalityReport rep;
    rep.id = "talagrand";
    rep.measure = m.describe();
    rep.cost = L.to_json();
    rep.constant = -kInf;
    nlohmann::json members = nlohmann::json::array();
    for (std::size_t i = 0; i < densities.size(); ++i) {
        const auto& d = densities[i];
        const Coupling1D c(m, d.F, m);
        const double cost = c.expect([&](double x) { return L(x - c.map(x)); });
        const double ent = c.expect([&](double x) {
                               const double v = d.F(x);
                               return v > 0.0 ? std::log(v) : 0.0;
                           }) -
                           std::log(c.normalization());
        const double excess = cost - C / 4.0 * ent;
        rep.ratios.push_back(excess);
        members.push_back({{"F", {{"name", d.name}, {"params", d.params}}},
                           {"cost", cost},
                           {"entropy", ent},
                           {"bound", C / 4.0 * ent},
                           {"slack", C / 4.0 * ent - cost}});
        for (const auto& w : c.warnings()) {
            rep.notes.push_back(d.name + ": " + w);
        }
        if (excess > rep.constant) {
            rep.constant = excess;
            rep.witness = {{"name", d.name}, {"params", d.params}};
        }
    }
    rep.extra["C"] = C;
    rep.extra["transport_constant"] = C / 4.0;
    rep.extra["tolerance"] = tolerance;
    rep.extra["members"] = members;
    rep.verdict = densities.empty() ? Verdict::inconclusive
                  : rep.constant <= tolerance ? Verdict::certified_bounded
                                              : Verdict::violated;
    rep.notes.push_back("constant is the largest cost − (C/4) Ent over the densities");
    return rep;
}

double marton_bound(double C, const CostFunction& L, double r)
{
    if (!(C > 0.0) || !(r >= 0.0)) {
        throw Error("parameter out of range");
    }
    return std::min(1.0, 2.0 * std::exp(-L(r) / C));
}

InequalityReport marton_check(const Measure1D& m, double C, const CostFunction& L,
                              const std::vector<double>& radii)
{
    const double median = m.quantile(0.5);
    InequalityReport rep;
    rep.id = "marton";
    rep.measure = m.describe();
    rep.cost = L.to_json();
    rep.constant = -kInf;
    nlohmann::json rows = nlohmann::json::array();
    for (double r : radii) {
        const double tail = m.upper_tail(median + r);
        const double bound = marton_bound(C, L, r);
        rep.ratios.push_back(tail - bound);
        rows.push_back({{"r", r}, {"tail", tail}, {"bound", bound}});
        if (tail - bound > rep.constant) {
            rep.constant = tail - bound;
            rep.witness = {{"r", r}};
        }
    }
    rep.extra["C"] = C;
    rep.extra["median"] = median;
    rep.extra["rows"] = rows;
    rep.verdict = radii.empty() ? Verdict::inconclusive
                  : rep.constant <= 0.0 ? Verdict::certified_bounded
                                        : Verdict::violated;
    return rep;
}

InequalityReport t_implies_poincare_check(const Measure1D& m, double C, const TestFamily& family,
                                          double tolerance)
{
    CertifyOptions opt;
    opt.claimed = C;
    opt.tolerance = tolerance;
    auto rep = estimate_poincare_constant(m, family, opt);
    rep.id = "transport-poincare";
    return rep;
}

}  // namespace funcineq
