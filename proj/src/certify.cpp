#include "funcineq/certify.hpp"
#include "funcineq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace funcineq {

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::certified_bounded: return "certified-bounded";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Ratio {
    double num = 0.0;
    double den = 0.0;
    double scale = 1.0;  // ∫ f², used to decide what counts as zero
};

enum class Status { ratio, skipped, incompatible, unbounded };

struct MemberResult {
    Status status = Status::skipped;
    double ratio = kNaN;
    int nodes = 0;
};

using RatioFn = std::function<Ratio(const GridMeasure&, const GridFunction&)>;

MemberResult classify(const Ratio& r)
{
    MemberResult out;
    const double zero = 1e-13 * std::max(std::abs(r.scale), 1e-300);
    if (!std::isfinite(r.den)) {
        out.status = Status::incompatible;
        return out;
    }
    if (r.den <= zero) {
        if (r.num <= zero) {
            out.status = Status::skipped;
        } else {
            out.status = Status::unbounded;
            out.ratio = kInf;
        }
        return out;
    }
    out.status = Status::ratio;
    out.ratio = r.num / r.den;
    return out;
}

void fill_histogram(InequalityReport& rep)
{
    rep.histogram.assign(10, 0);
    if (!(rep.constant > 0.0) || !std::isfinite(rep.constant)) {
        return;
    }
    for (double r : rep.ratios) {
        if (!std::isfinite(r)) {
            continue;
        }
        const double slack = 1.0 - r / rep.constant;
        const int bin = std::clamp(static_cast<int>(slack * 10.0), 0, 9);
        ++rep.histogram[static_cast<std::size_t>(bin)];
    }
}

InequalityReport sup_ratio(const std::string& id, const Measure1D& m, const TestFamily& family,
                           const RatioFn& fn, const CertifyOptions& opt)
{
    if (family.members.empty()) {
        throw Error("family needs at least one member");
    }
    if (opt.start_nodes < 3 || opt.max_nodes < opt.start_nodes) {
        throw Error("parameter out of range");
    }
    std::vector<GridMeasure> grids;
    for (int n = opt.start_nodes; n <= opt.max_nodes; n *= 2) {
        grids.push_back(GridMeasure::from_measure(m, n, opt.tail_mass));
    }
    std::vector<MemberResult> results(family.members.size());
    parallel_for(family.members.size(), opt.threads, [&](std::size_t i) {
        const auto& member = family.members[i];
        double prev = kNaN;
        MemberResult last;
        for (const auto& g : grids) {
            const auto f = member.on(g.nodes);
            last = classify(fn(g, f));
            last.nodes = static_cast<int>(g.size());
            if (last.status != Status::ratio) {
                break;
            }
            if (std::isfinite(prev) && std::abs(last.ratio - prev) <= opt.refine_tol * last.ratio) {
                break;
            }
            prev = last.ratio;
        }
        results[i] = last;
    });

    InequalityReport rep;
    rep.id = id;
    rep.measure = m.describe();
    rep.family = family.to_json();
    rep.ratios.resize(results.size(), kNaN);
    int evaluated = 0;
    int skipped = 0;
    int incompatible = 0;
    int unbounded = 0;
    int max_nodes = 0;
    std::size_t best = results.size();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        max_nodes = std::max(max_nodes, r.nodes);
        switch (r.status) {
        case Status::skipped: ++skipped; break;
        case Status::incompatible: ++incompatible; break;
        case Status::unbounded:
            ++unbounded;
            rep.ratios[i] = kInf;
            if (best == results.size() || std::isfinite(rep.ratios[best])) {
                best = i;
            }
            break;
        case Status::ratio:
            ++evaluated;
            rep.ratios[i] = r.ratio;
            if (best == results.size() || r.ratio > rep.ratios[best]) {
                best = i;
            }
            break;
        }
    }
    if (incompatible == static_cast<int>(results.size())) {
        throw Error("family incompatible with cost (α=1 Lipschitz bound exceeded)");
    }
    if (best < results.size()) {
        rep.constant = rep.ratios[best];
        rep.witness = {{"family", family.members[best].family},
                       {"params", family.members[best].params},
                       {"ratio", std::isfinite(rep.constant) ? nlohmann::json(rep.constant)
                                                             : nlohmann::json("inf")},
                       {"index", best}};
    }
    if (unbounded > 0) {
        rep.verdict = Verdict::violated;
        rep.notes.push_back("a member has zero energy and positive entropy: no finite constant");
    } else if (evaluated == 0) {
        rep.verdict = Verdict::inconclusive;
        rep.notes.push_back("no member produced a ratio");
    } else if (opt.claimed &&
               rep.constant > *opt.claimed + opt.tolerance * std::max(1.0, *opt.claimed)) {
        rep.verdict = Verdict::violated;
    } else {
        rep.verdict = Verdict::certified_bounded;
    }
    rep.notes.push_back(
        "the constant is a supremum over the family only: a lower bound for the true constant");
    if (opt.claimed) {
        rep.extra["claimed"] = *opt.claimed;
    }
    rep.extra["evaluated"] = evaluated;
    rep.extra["skipped"] = skipped;
    rep.extra["incompatible"] = incompatible;
    rep.extra["max_nodes"] = max_nodes;
    fill_histogram(rep);
    return rep;
}

}  // namespace

InequalityReport estimate_lsi_constant(const Measure1D& m, const CostFunction& H,
                                       const TestFamily& family, const CertifyOptions& opt)
{
    RatioFn fn = [&H](const GridMeasure& g, const GridFunction& f) {
        if ((f.values().array() < 0.0).any()) {
            throw Error("family members must be positive");
        }
        const Eigen::VectorXd f2 = f.values().array().square();
        Ratio r;
        r.scale = g.integrate(f2);
        r.num = entropy(g, f2);
        r.den = energy(g, f, H);
        return r;
    };
    auto rep = sup_ratio("lsi", m, family, fn, opt);
    rep.cost = H.to_json();
    return rep;
}

InequalityReport estimate_poincare_constant(const Measure1D& m, const TestFamily& family,
                                            const CertifyOptions& opt)
{
    RatioFn fn = [](const GridMeasure& g, const GridFunction& f) {
        Ratio r;
        r.scale = g.integrate(f.values().array().square().matrix());
        r.num = variance(g, f.values());
        r.den = dirichlet(g, f);
        return r;
    };
    auto rep = sup_ratio("poincare", m, family, fn, opt);
    rep.cost = {{"family", "dirichlet"}};
    return rep;
}

double tensorise(double c1, double c2)
{
    if (!(c1 > 0.0) || !(c2 > 0.0)) {
        throw Error("parameter out of range");
    }
    return std::max(c1, c2);
}

double perturb_constant(double c, double osc)
{
    if (!(c > 0.0) || !(osc >= 0.0)) {
        throw Error("parameter out of range");
    }
    return c * std::exp(osc);
}

double lsi_to_poincare(double c)
{
    if (!(c > 0.0)) {
        throw Error("parameter out of range");
    }
    return c / 2.0;
}

LsiFromTransport t_to_lsi(double a, double alpha, double C, double lambda)
{
    if (!(a > 0.0) || !(alpha >= 1.0 && alpha <= 2.0) || !(C > 0.0)) {
        throw Error("parameter out of range");
    }
    if (!(lambda > C)) {
        throw Error("transfer requires λ > C");
    }
    return {a / (2.0 * lambda), 4.0 * lambda * lambda / (lambda - C)};
}

namespace {

double rule_number(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw Error(std::string("missing or non-numeric key: ") + key);
    }
    return j.at(key).get<double>();
}

void rule_keys(const nlohmann::json& j, std::initializer_list<const char*> keys)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; })) {
            throw Error("unknown key: " + it.key());
        }
    }
}

}  // namespace

nlohmann::json transfer_constants(const nlohmann::json& rule)
{
    if (!rule.is_object() || !rule.contains("rule") || !rule.at("rule").is_string()) {
        throw Error("transfer needs a string key: rule");
    }
    const auto name = rule.at("rule").get<std::string>();
    nlohmann::json out{{"rule", name}};
    if (name == "tensorise") {
        rule_keys(rule, {"rule", "C1", "C2"});
        out["D"] = tensorise(rule_number(rule, "C1"), rule_number(rule, "C2"));
    } else if (name == "perturb") {
        rule_keys(rule, {"rule", "C", "osc"});
        out["D"] = perturb_constant(rule_number(rule, "C"), rule_number(rule, "osc"));
    } else if (name == "lsi_to_poincare") {
        rule_keys(rule, {"rule", "C"});
        out["poincare"] = lsi_to_poincare(rule_number(rule, "C"));
    } else if (name == "t_to_lsi") {
        rule_keys(rule, {"rule", "a", "alpha", "C", "lambda"});
        const auto r = t_to_lsi(rule_number(rule, "a"), rule_number(rule, "alpha"),
                                rule_number(rule, "C"), rule_number(rule, "lambda"));
        out["a_prime"] = r.a;
        out["C_prime"] = r.C;
    } else {
        throw Error("unknown value for key: rule");
    }
    return out;
}

double herbst_K(double C, double a, double alpha, double lip)
{
    return std::pow(2.0, alpha) * std::pow(alpha - 1.0, 1.0 - alpha) * std::pow(a, 2.0 - alpha) /
           (alpha * std::pow(C, alpha - 1.0) * std::pow(lip, alpha));
}

double herbst_log_laplace(double C, double a, double alpha, double lip, double t)
{
    if (t <= 0.0) {
        return 0.0;
    }
    const auto H = h_cost(a, alpha);
    // H(s‖F‖/2)/s² → ‖F‖²/8 as s → 0
    auto g = [&](double s) {
        if (s == 0.0) {
            return lip * lip / 8.0;
        }
        return H(0.5 * s * lip) / (s * s);
    };
    const double kink = 2.0 * a / lip;
    double integral = 0.0;
    if (t <= kink) {
        integral = quad::integrate(g, 0.0, t, 1e-13);
    } else {
        integral = quad::integrate(g, 0.0, kink, 1e-13) + quad::integrate(g, kink, t, 1e-13);
    }
    return C * t * integral;
}

double herbst_shape(double alpha, double lambda)
{
    if (!(alpha > 1.0 && alpha <= 2.0)) {
        throw Error("parameter out of range");
    }
    return std::min(lambda * lambda, std::pow(lambda, alpha));
}

nlohmann::json HerbstBound::to_json() const
{
    return {{"bound", bound},     {"raw", raw},           {"regime", regime},
            {"threshold", threshold}, {"K", K},           {"chernoff", chernoff},
            {"below_chernoff", below_chernoff}};
}

HerbstBound herbst_bound(double C, double a, double alpha, double lip, double lambda)
{
    if (!(C > 0.0) || !(a > 0.0) || !(lip > 0.0) || !(lambda >= 0.0) ||
        !(alpha > 1.0 && alpha <= 2.0)) {
        throw Error("parameter out of range");
    }
    HerbstBound hb;
    hb.threshold = a * C * lip / 2.0;
    hb.K = herbst_K(C, a, alpha, lip);
    if (lambda >= hb.threshold) {
        hb.regime = "large";
        const double shift = std::max(lambda - a * C * lip * (2.0 - alpha), 0.0);
        hb.raw = 2.0 * std::exp(-hb.K * std::pow(shift, alpha) -
                                a * a * (2.0 - alpha) / (2.0 * alpha));
    } else {
        hb.regime = "small";
        hb.raw = 2.0 * std::exp(-2.0 * lambda * lambda / (C * lip * lip));
    }
    hb.bound = std::min(1.0, hb.raw);
    if (lambda > 0.0) {
        // exponent t λ − log Φ(t) is concave in t; grow the bracket then refine
        auto gain = [&](double t) { return t * lambda - herbst_log_laplace(C, a, alpha, lip, t); };
        double hi = 1.0;
        while (gain(2.0 * hi) > gain(hi) && hi < 1e8) {
            hi *= 2.0;
        }
        const auto best = golden_max(gain, 0.0, 2.0 * hi, 1e-12);
        hb.chernoff = std::min(1.0, 2.0 * std::exp(-std::max(best.value, 0.0)));
    }
    hb.below_chernoff = hb.bound < hb.chernoff * (1.0 - 1e-12);
    return hb;
}

// ---- modified LSI -----------------------------------------------------------

InequalityReport verify_modified_lsi(const Measure1D& m, const TestFamily& family,
                                     const ModifiedOptions& opt)
{
    if (!m.spec() || m.spec()->family != MeasureFamily::mu_alpha || m.spec()->alpha > 2.0) {
        throw Error("modified LSI needs a mu_alpha measure with α in [1,2]");
    }
    if (std::find(opt.sweep.begin(), opt.sweep.end(), opt.primary_A) == opt.sweep.end()) {
        throw Error("primary A must be part of the sweep");
    }
    const double alpha = m.spec()->alpha;
    const bool extreme = alpha == 1.0;
    const auto grid = GridMeasure::from_measure(m, opt.nodes, opt.tail_mass);
    const auto cost = extreme ? CostFunction{} : power_cost(conjugate_exponent(alpha));

    struct Row {
        double ent = 0.0;
        double var = 0.0;
        double restricted = 0.0;
        bool used = false;
        bool rescaled = false;
    };
    std::vector<Row> rows(family.members.size());
    parallel_for(family.members.size(), opt.threads, [&](std::size_t i) {
        auto f = family.members[i].on(grid.nodes);
        if ((f.values().array() < 0.0).any()) {
            throw Error("family members must be nonnegative");
        }
        const double m2 = grid.integrate(f.values().array().square().matrix());
        if (!(m2 > 0.0)) {
            return;
        }
        Row r;
        if (std::abs(m2 - 1.0) > 1e-12) {
            f = f.scaled(1.0 / std::sqrt(m2));
            r.rescaled = true;
        }
        if (extreme && f.derivative().cwiseAbs().maxCoeff() > 1.0 + 1e-9) {
            rows[i] = r;
            return;
        }
        r.ent = entropy(grid, f.values().array().square().matrix());
        r.var = variance(grid, f.values());
        if (!extreme) {
            r.restricted = energy(grid, f, cost, opt.region);
        }
        r.used = true;
        rows[i] = r;
    });

    InequalityReport rep;
    rep.id = extreme ? "modified-lsi-extreme" : "modified-lsi";
    rep.measure = m.describe();
    rep.family = family.to_json();
    rep.cost = extreme ? nlohmann::json{{"family", "none"}} : cost.to_json();
    rep.ratios.assign(rows.size(), kNaN);
    int used = 0;
    int rescaled = 0;
    for (const auto& r : rows) {
        used += r.used ? 1 : 0;
        rescaled += r.rescaled ? 1 : 0;
    }
    rep.extra["members_used"] = used;
    rep.extra["rescaled"] = rescaled;
    rep.extra["nodes"] = grid.size();
    rep.extra["region"] = to_string(opt.region);
    if (used == 0) {
        rep.verdict = Verdict::inconclusive;
        rep.notes.push_back("no member satisfied the hypotheses");
        return rep;
    }
    if (extreme) {
        std::size_t best = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (!r.used || r.var <= 1e-14) {
                continue;
            }
            rep.ratios[i] = r.ent / r.var;
            if (best == rows.size() || rep.ratios[i] > rep.ratios[best]) {
                best = i;
            }
        }
        if (best == rows.size()) {
            rep.verdict = Verdict::inconclusive;
            return rep;
        }
        rep.constant = rep.ratios[best];
        rep.witness = {{"family", family.members[best].family},
                       {"params", family.members[best].params}};
        rep.verdict = Verdict::certified_bounded;
        rep.notes.push_back("constant is sup Ent/Var over members with |f'| <= 1");
        fill_histogram(rep);
        return rep;
    }
    nlohmann::json frontier = nlohmann::json::array();
    for (double A : opt.sweep) {
        double bhat = 0.0;
        std::size_t best = rows.size();
        nlohmann::json counter = nlohmann::json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (!r.used) {
                continue;
            }
            const double excess = r.ent - A * r.var;
            if (excess <= 1e-12 * (1.0 + r.ent)) {
                if (A == opt.primary_A) {
                    rep.ratios[i] = 0.0;
                }
                continue;
            }
            if (r.restricted <= 0.0) {
                counter.push_back({{"family", family.members[i].family},
                                   {"params", family.members[i].params},
                                   {"excess", excess}});
                continue;
            }
            const double b = excess / r.restricted;
            if (A == opt.primary_A) {
                rep.ratios[i] = b;
            }
            if (b > bhat) {
                bhat = b;
                best = i;
            }
        }
        nlohmann::json entry{{"A", A}, {"B_hat", bhat}, {"counterexamples", counter}};
        if (best < rows.size()) {
            entry["witness"] = {{"family", family.members[best].family},
                                {"params", family.members[best].params}};
        }
        if (A == opt.primary_A) {
            rep.constant = bhat;
            rep.witness = entry.contains("witness") ? entry["witness"] : nlohmann::json::object();
            rep.verdict = counter.empty() ? Verdict::certified_bounded : Verdict::violated;
            if (!counter.empty()) {
                rep.witness = counter.front();
                rep.notes.push_back("member with Ent > A Var and zero restricted energy");
            }
        }
        frontier.push_back(entry);
    }
    rep.extra["A"] = opt.primary_A;
    rep.extra["frontier"] = frontier;
    rep.notes.push_back("B_hat is the smallest B consistent with every member for the given A");
    fill_histogram(rep);
    return rep;
}

// ---- consistency checks -----------------------------------------------------

InequalityReport tensorisation_check(const Measure1D& m1, const Measure1D& m2, double c1,
                                     double c2, const CostFunction& H, const TestFamily& family,
                                     int nodes, double tolerance)
{
    const auto g1 = GridMeasure::from_measure(m1, nodes);
    const auto g2 = GridMeasure::from_measure(m2, nodes);
    const double D = tensorise(c1, c2);
    const std::size_t n = family.members.size();
    InequalityReport rep;
    rep.id = "tensorisation";
    rep.measure = {{"factors", {m1.describe(), m2.describe()}}};
    rep.cost = H.to_json();
    rep.family = family.to_json();
    rep.ratios.assign(n, kNaN);
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
        const auto gx = family.members[i].on(g1.nodes);
        const auto hy = family.members[(i * 7 + 3) % n].on(g2.nodes);
        // F(x, y) = g(x) h(y) on the product grid, coordinate-sum energy
        const Eigen::MatrixXd F = gx.values() * hy.values().transpose();
        const Eigen::MatrixXd W = g1.weights * g2.weights.transpose();
        const Eigen::ArrayXXd F2 = F.array().square();
        const double mass = (W.array() * F2).sum();
        double ent = 0.0;
        double en = 0.0;
        for (Eigen::Index a = 0; a < F.rows(); ++a) {
            const double hx = H(gx.derivative()(a) / gx.values()(a));
            for (Eigen::Index b = 0; b < F.cols(); ++b) {
                const double r = F2(a, b) / mass;
                ent += W(a, b) * (r > 0.0 ? r * std::log(r) - r + 1.0 : 1.0);
                const double hyv = H(hy.derivative()(b) / hy.values()(b));
                en += W(a, b) * (hx + hyv) * F2(a, b);
            }
        }
        ent *= mass;
        if (en > 1e-13 * mass && std::isfinite(en)) {
            rep.ratios[i] = ent / en;
            if (best == n || rep.ratios[i] > rep.ratios[best]) {
                best = i;
            }
        }
    }
    if (best < n) {
        rep.constant = rep.ratios[best];
        rep.witness = {{"g", family.members[best].params},
                       {"h", family.members[(best * 7 + 3) % n].params}};
    }
    rep.extra["transferred"] = D;
    rep.extra["tolerance"] = tolerance;
    rep.verdict = rep.constant <= D * (1.0 + tolerance) ? Verdict::certified_bounded
                                                        : Verdict::violated;
    fill_histogram(rep);
    return rep;
}

InequalityReport perturbation_check(const Measure1D& m, const RealFn& h, double c,
                                    const CostFunction& H, const TestFamily& family,
                                    const CertifyOptions& opt)
{
    const auto pm = perturb(m, h);
    const double D = perturb_constant(c, *pm.oscillation());
    auto o = opt;
    o.claimed = D;
    auto rep = estimate_lsi_constant(pm, H, family, o);
    rep.id = "perturbation";
    rep.extra["base_constant"] = c;
    rep.extra["oscillation"] = *pm.oscillation();
    rep.extra["transferred"] = D;
    return rep;
}

InequalityReport poincare_from_lsi_check(const Measure1D& m, double c, const CostFunction& H,
                                         const TestFamily& family, double eps, int nodes)
{
    const auto g = GridMeasure::from_measure(m, nodes);
    const std::size_t n = family.members.size();
    InequalityReport rep;
    rep.id = "poincare-from-lsi";
    rep.measure = m.describe();
    rep.cost = H.to_json();
    rep.family = family.to_json();
    rep.ratios.assign(n, kNaN);
    double lsi_limit = 0.0;
    std::size_t best = n;
    auto lsi_ratio = [&](const GridFunction& base, double e) {
        const GridFunction f(base.nodes(), (1.0 + e * base.values().array()).matrix());
        const double den = energy(g, f, H);
        return entropy(g, f.values().array().square().matrix()) / den;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const auto base = family.members[i].on(g.nodes);
        const GridFunction f(base.nodes(), (1.0 + eps * base.values().array()).matrix());
        const double d = dirichlet(g, f);
        if (!(d > 1e-300)) {
            continue;
        }
        rep.ratios[i] = variance(g, f.values()) / d;
        if (best == n || rep.ratios[i] > rep.ratios[best]) {
            best = i;
        }
        const double r1 = lsi_ratio(base, eps);
        const double r2 = lsi_ratio(base, 0.5 * eps);
        lsi_limit = std::max(lsi_limit, 2.0 * r2 - r1);
    }
    if (best < n) {
        rep.constant = rep.ratios[best];
        rep.witness = {{"params", family.members[best].params}};
    }
    const double limit = lsi_to_poincare(c) + 1e-2;
    rep.extra["transferred"] = lsi_to_poincare(c);
    rep.extra["epsilon"] = eps;
    rep.extra["lsi_ratio_limit"] = lsi_limit;
    rep.verdict = rep.constant <= limit ? Verdict::certified_bounded : Verdict::violated;
    fill_histogram(rep);
    return rep;
}

InequalityReport latala_check(const Measure1D& m, double a, const TestFamily& family,
                              const std::vector<double>& ps, int nodes)
{
    const auto g = GridMeasure::from_measure(m, nodes);
    const std::size_t n = family.members.size();
    InequalityReport rep;
    rep.id = "latala";
    rep.measure = m.describe();
    rep.family = family.to_json();
    rep.ratios.assign(n, kNaN);
    std::size_t best = n;
    double best_p = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto f = family.members[i].on(g.nodes);
        const double d = dirichlet(g, f);
        if (!(d > 1e-13 * g.integrate(f.values().array().square().matrix()))) {
            continue;
        }
        for (double p : ps) {
            const double r = latala_deficit(g, f.values(), p) / (std::pow(2.0 - p, a) * d);
            if (!std::isfinite(rep.ratios[i]) || r > rep.ratios[i]) {
                rep.ratios[i] = r;
                if (best == n || r > rep.ratios[best]) {
                    best = i;
                    best_p = p;
                }
            }
        }
    }
    if (best < n) {
        rep.constant = rep.ratios[best];
        rep.witness = {{"params", family.members[best].params}, {"p", best_p}};
    }
    rep.extra["a"] = a;
    rep.extra["p"] = ps;
    rep.verdict = std::isfinite(rep.constant) && best < n ? Verdict::certified_bounded
                                                          : Verdict::inconclusive;
    fill_histogram(rep);
    return rep;
}

}  // namespace funcineq
