// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "funcineq/certify.hpp"
#include "funcineq/costs.hpp"
#include "funcineq/functionals.hpp"
#include "funcineq/hardy.hpp"
#include "funcineq/measures.hpp"
#include "funcineq/transport.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace funcineq;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

struct Criterion {
    std::string id;
    std::string name;
    double budget;  // seconds
    std::function<void(Outcome&)> body;
};

Measure1D mu(double alpha)
{
    return Measure1D::build(MeasureSpec::mu_alpha(alpha));
}

Measure1D gaussian()
{
    return Measure1D::build(MeasureSpec::gaussian(1.0));
}

void legendre_duality(Outcome& o)
{
    double worst = 0.0;
    double worst_double = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
        for (double alpha : {1.0, 1.2, 1.5, 2.0}) {
            const auto L = l_cost(a, alpha);
            const auto H = h_cost(a, alpha);
            const auto num = legendre(L, 64.0, 256, LegendreMethod::numeric);
            const auto back = legendre(num, 64.0, 256, LegendreMethod::numeric);
            for (int i = 0; i <= 1000; ++i) {
                const double x = -10.0 + 0.02 * i;
                const double h = H(x);
                const double n = num(x);
                if (std::isfinite(h)) {
                    worst = std::max(worst, std::abs(n - h));
                } else if (std::isfinite(n)) {
                    worst = kInf;
                }
                worst_double = std::max(worst_double, std::abs(back(x) - L(x)));
            }
        }
    }
    o.detail << "sup|L*−H|=" << worst << " sup|L**−L|=" << worst_double;
    o.require(worst <= 1e-7, "conjugate within 1e-7");
    o.require(worst_double <= 1e-6, "double transform within 1e-6");
}

void scaling_identity(Outcome& o)
{
    std::mt19937_64 rng(20);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = 0.05 + 20.0 * u(rng);
        const double x = -50.0 + 100.0 * u(rng);
        const double a = 0.05 + 10.0 * u(rng);
        const double alpha = 1.0 + u(rng);
        const double lhs = l_cost(a, alpha)(t * x);
        const double rhs = t * t * l_cost(a / t, alpha)(x);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    o.detail << "max relative error=" << worst;
    o.require(worst <= 1e-12, "identity within 1e-12");
}

void gaussian_lsi(Outcome& o)
{
    const auto all = TestFamily::combine(
        "all", {TestFamily::standard(), TestFamily::exponentials(), TestFamily::lipschitz()});
    o.require(all.size() >= 200, "at least 200 members");
    CertifyOptions opt;
    opt.threads = 4;

    const auto g = gaussian();
    const auto exp_g = estimate_lsi_constant(g, dirichlet_cost(), TestFamily::exponentials(), opt);
    double dev = 0.0;
    for (double r : exp_g.ratios) {
        dev = std::max(dev, std::abs(r - 2.0));
    }
    const auto all_g = estimate_lsi_constant(g, dirichlet_cost(), all, opt);
    o.detail << "gaussian: max|ratio−2|=" << dev << " sup=" << all_g.constant;
    o.require(dev <= 1e-5, "gaussian exponential ratios equal 2");
    o.require(all_g.constant <= 2.0 + 1e-5, "gaussian sup at most 2");

    const auto m2 = mu(2.0);
    const auto exp_m = estimate_lsi_constant(m2, dirichlet_cost(), TestFamily::exponentials(), opt);
    const auto all_m = estimate_lsi_constant(m2, dirichlet_cost(), all, opt);
    o.detail << "; mu_2: constant=" << exp_m.constant << " sup=" << all_m.constant;
    o.require(std::abs(exp_m.constant - 1.0) <= 1e-5, "mu_2 constant equals 1");
    o.require(all_m.constant <= 1.0 + 1e-5, "mu_2 sup at most 1");
}

void hardy_sandwich(Outcome& o)
{
    std::mt19937_64 rng(40);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    double slack = kInf;
    for (int trial = 0; trial < 100; ++trial) {
        DiscreteHardyPair d{Eigen::VectorXd(6), Eigen::VectorXd(6), Eigen::VectorXd(6)};
        double t = 0.0;
        for (int i = 0; i < 6; ++i) {
            t += u(rng);
            d.points(i) = t;
            d.masses(i) = u(rng);
            d.densities(i) = 3.0 * u(rng);
        }
        const double B = d.criterion();
        const double A = oracle::hardy_best_constant(d.points, d.masses, d.densities);
        slack = std::min({slack, A - B, 4.0 * B - A});
    }
    HardyPair p;
    p.mu_tail = [](double x) { return std::exp(-x); };
    p.nu_density = [](double x) { return std::exp(-x); };
    p.window = {1e-3, 60.0};
    const auto r = hardy_constant(p);
    o.detail << "min slack=" << slack << " B(exp)=" << r.value;
    o.require(slack >= -1e-10, "B ≤ A ≤ 4B");
    o.require(r.finite && std::abs(r.value - 1.0) <= 1e-6, "exponential pair B = 1");
}

void weight_saturation(Outcome& o)
{
    for (double alpha : {1.2, 1.5}) {
        const auto c = barthe_roberto_constants(mu(alpha), saturating_weight(alpha));
        o.detail << "alpha=" << alpha << ": " << (c.finite() ? "finite" : "divergent");
        if (c.finite()) {
            o.detail << " [" << c.lower() << ", " << c.upper() << "]";
        }
        o.detail << "; ";
        o.require(c.finite(), "saturating weight gives finite constants");
    }
    const auto flat = barthe_roberto_constants(mu(1.5), [](double) { return 1.0; });
    o.detail << "h=1: " << (flat.finite() ? "finite" : "divergent");
    o.require(!flat.finite(), "constant weight diverges");
}

void pointwise_lemmas(Outcome& o)
{
    const auto s = verify_pointwise_lemmas(100000, 10000, 8, 6);
    o.detail << "worst slack=" << s.worst();
    o.require(s.worst() >= -1e-12, "slack ≥ −1e-12");
}

void modified_lsi(Outcome& o)
{
    const auto family = TestFamily::combine("combined", {TestFamily::standard(), TestFamily::lipschitz()});
    o.require(family.size() >= 200, "at least 200 members");
    for (double alpha : {1.2, 1.5}) {
        double b[2];
        int k = 0;
        for (int nodes : {2048, 4096}) {
            ModifiedOptions opt;
            opt.nodes = nodes;
            opt.threads = 4;
            const auto rep = verify_modified_lsi(mu(alpha), family, opt);
            b[k++] = rep.constant;
        }
        o.detail << "alpha=" << alpha << ": B(2048)=" << b[0] << " B(4096)=" << b[1] << "; ";
        o.require(std::isfinite(b[0]) && std::isfinite(b[1]), "finite B");
        o.require(std::abs(b[0] - b[1]) <= 0.05 * std::max(b[0], b[1]), "stable within 5%");
    }
}

void talagrand_chain(Outcome& o)
{
    const auto m2 = mu(2.0);
    CertifyOptions opt;
    opt.threads = 4;
    const double C = estimate_lsi_constant(m2, h_cost(1.0, 2.0), TestFamily::standard(), opt).constant;
    auto dens = translation_densities(m2, {-1.5, -0.5, 0.25, 0.5, 1.0, 2.0});
    const auto tilts = tilt_densities(m2, {-1.0, 0.5, 1.0, 2.0});
    dens.insert(dens.end(), tilts.begin(), tilts.end());
    const auto rep = verify_talagrand(m2, C, 1.0, 2.0, dens, 1e-6);
    o.detail << "C=" << C << " max(cost−(C/4)Ent)=" << rep.constant;
    o.require(rep.constant <= 1e-6, "cost ≤ (C/4)Ent + 1e-6");

    const auto g = gaussian();
    const auto probe = verify_talagrand(g, 4.0, 10.0, 2.0, translation_densities(g, {0.25, 0.5, 1.0, 2.0}));
    double worst = 0.0;
    for (const auto& e : probe.extra["members"]) {
        worst = std::max(worst, std::abs(e["slack"].get<double>()));
    }
    o.detail << "; gaussian probe max|slack|=" << worst;
    o.require(worst <= 1e-8, "gaussian probe tight to 1e-8");
}

void dual_hopf_lax(Outcome& o)
{
    const auto family = TestFamily::lipschitz();
    double worst = kInf;
    CertifyOptions opt;
    opt.threads = 4;
    for (const auto& [m, name] : {std::pair{mu(2.0), "mu_2"}, std::pair{gaussian(), "gaussian"}}) {
        const double C = estimate_lsi_constant(m, h_cost(1.0, 2.0), TestFamily::standard(), opt).constant;
        const auto grid = GridMeasure::from_measure(m, 4096);
        double w = kInf;
        for (const auto& member : family.members) {
            w = std::min(w, dual_check(grid, C, 1.0, 2.0, member.on(grid.nodes)));
        }
        o.detail << name << ": C=" << C << " min slack=" << w << "; ";
        worst = std::min(worst, w);
    }
    o.require(worst >= -1e-6, "log-slack ≥ −1e-6");

    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(801, -4.0, 4.0);
    const auto f = GridFunction::sample([](double t) { return std::abs(t); }, x);
    const auto q = hopf_lax(f, l_cost(1e6, 2.0), 1.0);
    double err = 0.0;
    for (Eigen::Index i : {400, 450, 600}) {  // x = 0, 0.5, 2
        err = std::max(err, std::abs(q.values()(i) - oracle::moreau_abs(x(i))));
    }
    o.detail << "Moreau error=" << err;
    o.require(err <= 1e-8, "Moreau envelope within 1e-8");
}

void concentration(Outcome& o)
{
    ConcentrationOptions opt;
    opt.threads = 4;
    const ProductMeasure pm{mu(1.5), 20};
    const auto c = simulate_concentration(pm, Statistic::normalized_sum(20), 100000, 2024, opt);
    o.detail << "K=" << c.K_fit << " violations=" << c.violations;
    o.require(c.K_fit > 0.0, "K > 0");
    o.require(c.violations == 0, "tails below the fitted envelope");

    ConcentrationOptions g;
    g.threads = 4;
    g.reference = [](double l) { return herbst_bound(4.0, 1e6, 2.0, 1.0, l).bound; };
    const auto gc =
        simulate_concentration(ProductMeasure{gaussian(), 1}, Statistic::coordinate(0), 100000, 7, g);
    int above = 0;
    for (const auto& p : gc.points) {
        above += p.ci_lo > p.bound ? 1 : 0;
    }
    o.detail << "; gaussian points above the small-λ bound=" << above;
    o.require(above == 0, "gaussian below the small-λ bound");
}

void ot_optimality(Outcome& o)
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0.0, 3.0);
    std::uniform_int_distribution<int> pick(0, 3);
    const std::vector<CostFunction> costs{l_cost(1.0, 1.5), l_cost(0.5, 1.0), h_cost(1.0, 1.5),
                                          dirichlet_cost()};
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> xs(5);
        std::vector<double> ys(5);
        for (int i = 0; i < 5; ++i) {
            xs[i] = n(rng);
            ys[i] = n(rng);
        }
        const auto& L = costs[pick(rng)];
        const Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(xs.data(), 5);
        const Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(ys.data(), 5);
        const Eigen::VectorXd w = Eigen::VectorXd::Constant(5, 0.2);
        const double mono = discrete_monotone_cost(x, w, y, w, L);
        const double best = oracle::assignment_minimum(xs, ys, L.evaluate);
        worst = std::max(worst, std::abs(mono - best) / std::max(1.0, best));
    }
    o.detail << "max relative gap=" << worst;
    o.require(worst <= 1e-12, "monotone cost equals the assignment minimum");
}

void transfer(Outcome& o)
{
    bool exact = tensorise(1.5, 2.5) == 2.5 && tensorise(3.0, 0.5) == 3.0;
    exact = exact && perturb_constant(2.0, 0.7) == 2.0 * std::exp(0.7);
    exact = exact && lsi_to_poincare(3.0) == 1.5;
    const auto t = t_to_lsi(2.0, 1.5, 1.0, 3.0);
    exact = exact && t.a == 2.0 / 6.0 && t.C == 36.0 / 2.0;
    o.require(exact, "plug-in arithmetic");

    const auto H = h_cost(1.0, 2.0);
    const auto fam = TestFamily::standard();
    CertifyOptions opt;
    opt.threads = 4;
    const auto m2 = mu(2.0);
    const double c2 = estimate_lsi_constant(m2, H, fam, opt).constant;
    const auto m15 = mu(1.5);
    const auto H15 = h_cost(1.0, 1.5);
    const double c15 = estimate_lsi_constant(m15, H15, fam, opt).constant;

    const auto tens = tensorisation_check(m2, m2, c2, c2, H, fam, 1024, 1e-3);
    const auto pert = perturbation_check(m2, [](double x) { return 0.5 * std::sin(x); }, c2, H, fam, opt);
    const auto pert15 =
        perturbation_check(m15, [](double x) { return 0.3 * std::cos(2.0 * x); }, c15, H15, fam, opt);
    const auto poin = poincare_from_lsi_check(m2, c2, H,
                                              TestFamily::combine("smooth", {TestFamily::bumps(), TestFamily::ramps()}));
    o.detail << "tensorised=" << tens.constant << " perturbed=" << pert.constant << "/" << pert15.constant
             << " poincare=" << poin.constant;
    o.require(tens.verdict != Verdict::violated, "tensorised family");
    o.require(pert.verdict != Verdict::violated && pert15.verdict != Verdict::violated, "perturbed family");
    o.require(poin.verdict != Verdict::violated, "Poincaré from LSI");
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {"AC1", "legendre duality", 5.0, legendre_duality},
        {"AC2", "scaling identity", 1.0, scaling_identity},
        {"AC3", "gaussian LSI constant", 30.0, gaussian_lsi},
        {"AC4", "Hardy sandwich", 60.0, hardy_sandwich},
        {"AC5", "weight saturation", 30.0, weight_saturation},
        {"AC6", "pointwise lemmas", 30.0, pointwise_lemmas},
        {"AC7", "modified LSI", 120.0, modified_lsi},
        {"AC8", "LSI to transport", 60.0, talagrand_chain},
        {"AC9", "dual Hopf-Lax", 30.0, dual_hopf_lax},
        {"AC10", "concentration", 120.0, concentration},
        {"AC11", "1D transport optimality", 10.0, ot_optimality},
        {"AC12", "constant transfer", 60.0, transfer},
    };
    // optional arguments select criteria by id
    const std::vector<std::string> only(argv + 1, argv + argc);
    int failed = 0;
    int ran = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) {
            continue;
        }
        ++ran;
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.require(secs < c.budget, "runtime budget");
        failed += o.pass ? 0 : 1;
        std::printf("%s %-5s %-24s %7.2fs / %5.0fs  %s\n", o.pass ? "PASS" : "FAIL", c.id.c_str(),
                    c.name.c_str(), secs, c.budget, o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}
