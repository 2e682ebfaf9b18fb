#include "funcineq/families.hpp"
#include "funcineq/functionals.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace funcineq;

namespace {

Measure1D mu(double alpha)
{
    return Measure1D::build(MeasureSpec::mu_alpha(alpha));
}

GridFunction on(const GridMeasure& g, const RealFn& f)
{
    return GridFunction::sample(f, g.nodes);
}

}  // namespace

TEST_SUITE("functionals")
{
    TEST_CASE("grid function validation and CSV")
    {
        Eigen::VectorXd x(3);
        x << 0.0, 1.0, 1.0;
        CHECK_THROWS(GridFunction(x, Eigen::VectorXd::Zero(3)));
        CHECK_THROWS(GridFunction(Eigen::VectorXd::LinSpaced(2, 0, 1), Eigen::VectorXd::Zero(2)));
        const auto f = GridFunction::sample([](double t) { return t * t; },
                                            Eigen::VectorXd::LinSpaced(11, -1.0, 1.0));
        const auto back = GridFunction::from_csv(f.to_csv());
        CHECK(back.nodes() == f.nodes());
        CHECK(back.values() == f.values());
        CHECK(f.to_csv().rfind("x,f\r\n", 0) == 0);
    }

    TEST_CASE("finite differences are exact on quadratics")
    {
        Eigen::VectorXd x(6);
        x << -1.0, -0.3, 0.0, 0.2, 0.9, 2.0;
        const auto f = GridFunction::sample([](double t) { return 3.0 * t * t - t + 2.0; }, x);
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            CHECK(f.derivative()(i) == doctest::Approx(6.0 * x(i) - 1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("entropy")
    {
        const auto g = GridMeasure::from_measure(mu(2.0), 8192);
        CHECK(std::abs(entropy(g, Eigen::VectorXd::Constant(g.size(), 5.0))) < 1e-12);
        const auto f2 = on(g, [](double x) { return std::exp(2.0 * x); });
        CHECK(entropy(g, f2.values()) == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
        CHECK_THROWS_WITH(entropy(g, Eigen::VectorXd::Zero(g.size())), "entropy of null function");
    }

    TEST_CASE("entropy on a five-point measure matches direct summation")
    {
        Eigen::VectorXd x(5);
        x << -2.0, -0.5, 0.1, 1.0, 3.0;
        Eigen::VectorXd w(5);
        w << 0.1, 0.3, 0.25, 0.2, 0.15;
        const auto g = GridMeasure::discrete(x, w);
        Eigen::VectorXd f2(5);
        f2 << 0.3, 1.7, 0.0, 2.5, 4.0;
        double m = 0.0;
        double s = 0.0;
        for (int i = 0; i < 5; ++i) {
            m += w(i) * f2(i);
            s += f2(i) > 0.0 ? w(i) * f2(i) * std::log(f2(i)) : 0.0;
        }
        CHECK(entropy(g, f2) == doctest::Approx(s - m * std::log(m)).epsilon(1e-12));
    }

    TEST_CASE("entropy properties")
    {
        const auto g = GridMeasure::from_measure(mu(1.5), 4096);
        for (const auto& member : TestFamily::standard().members) {
            const Eigen::VectorXd f2 = on(g, member.f).values().array().square();
            const double e = entropy(g, f2);
            CHECK(e >= 0.0);
            CHECK(entropy(g, 3.0 * f2) == doctest::Approx(3.0 * e).epsilon(1e-10));
        }
    }

    TEST_CASE("variance")
    {
        const auto g2 = GridMeasure::from_measure(mu(2.0), 8192);
        CHECK(variance(g2, on(g2, [](double x) { return x; }).values()) ==
              doctest::Approx(0.5).epsilon(1e-10));
        const auto g1 = GridMeasure::from_measure(mu(1.0), 65536);
        CHECK(variance(g1, on(g1, [](double x) { return x; }).values()) ==
              doctest::Approx(2.0).epsilon(1e-6));
        CHECK(std::abs(variance(g1, Eigen::VectorXd::Constant(g1.size(), 4.0))) < 1e-12);
        for (const auto& member : TestFamily::standard().members) {
            const auto f = on(g2, member.f).values();
            CHECK(variance(g2, f) <= g2.integrate(f.array().square().matrix()) + 1e-12);
        }
    }

    TEST_CASE("energy")
    {
        const auto g = GridMeasure::from_measure(mu(2.0), 65536);
        const auto H = h_cost(1.0, 2.0);
        CHECK(energy(g, on(g, [](double) { return 1.0; }), H) == 0.0);
        const auto f = on(g, [](double x) { return std::exp(x); });
        CHECK(energy(g, f, H) == doctest::Approx(std::exp(1.0) / 2.0).epsilon(1e-7));
        const auto small = on(g, [](double x) { return 1.0 + 0.5 * std::tanh(x); });
        CHECK(energy(g, small, H, Region::at_least_two) == 0.0);
    }

    TEST_CASE("energy chain rule for f = e^{g/2}")
    {
        const auto m = mu(1.5);
        const auto grid = GridMeasure::from_measure(m, 16384);
        auto gfun = [](double x) { return std::sin(x) + 0.3 * x; };
        auto gprime = [](double x) { return std::cos(x) + 0.3; };
        const auto f = on(grid, [&](double x) { return std::exp(0.5 * gfun(x)); });
        const double direct = energy(grid, f, h_cost(1.0, 2.0));
        const double chain = 0.125 * m.expect([&](double x) {
            return gprime(x) * gprime(x) * std::exp(gfun(x));
        });
        CHECK(direct == doctest::Approx(chain).epsilon(1e-6));
    }

    TEST_CASE("zero convention")
    {
        const auto g = GridMeasure::from_measure(mu(2.0), 1025);
        // the grid is symmetric with a node at 0
        const auto crossing = on(g, [](double x) { return x; });
        CHECK(energy(g, crossing, h_cost(1.0, 2.0)) == kInf);
        const auto touching = on(g, [](double x) { return x * x; });
        CHECK(std::isfinite(energy(g, touching, h_cost(1.0, 2.0))));
    }

    TEST_CASE("regions")
    {
        Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(5, 0.0, 4.0);
        const auto g = GridMeasure::discrete(x, Eigen::VectorXd::Constant(5, 0.2));
        Eigen::VectorXd f(5);
        f << 0.5, 1.0, 2.0, 3.0, -4.0;
        const auto two = region_mask(g, f, Region::at_least_two);
        CHECK(two.count() == 2);
        // f₊² mass = 0.2(0.25 + 1 + 4 + 9) = 2.85, threshold 2√2.85 ≈ 3.38
        // f₋² mass = 0.2·16 = 3.2, threshold 2√3.2 ≈ 3.58 and f₋ = 4 passes
        const auto omega = region_mask(g, f, Region::omega);
        CHECK(omega.count() == 1);
        CHECK(omega(4));
        CHECK(region_mask(g, f, Region::all).count() == 5);
    }

    TEST_CASE("Latała deficit")
    {
        const auto g = GridMeasure::from_measure(mu(1.5), 8192);
        CHECK(std::abs(latala_deficit(g, Eigen::VectorXd::Constant(g.size(), 2.0), 1.3)) < 1e-12);
        const auto f = on(g, [](double x) { return 1.0 + 0.4 * std::sin(x) + 0.2 * x * x; });
        const Eigen::VectorXd f2 = f.values().array().square();
        CHECK(latala_deficit(g, f.values(), 1.0) ==
              doctest::Approx(variance(g, f.values())).epsilon(1e-12));
        // deficit/(2−p) → Ent(f²)/2 as p → 2
        CHECK(latala_deficit(g, f.values(), 1.9999) / 1e-4 ==
              doctest::Approx(0.5 * entropy(g, f2)).epsilon(1e-3));
        CHECK_THROWS(latala_deficit(g, f.values(), 2.0));
    }

    TEST_CASE("pointwise lemmas")
    {
        const auto s = verify_pointwise_lemmas(100000, 2000, 8, 3);
        CHECK(s.quintic >= -1e-12);
        CHECK(s.mean_square >= -1e-12);
        CHECK(s.upper_mass >= -1e-12);
        CHECK(s.upper_entropy >= -1e-12);
        CHECK(s.positivity >= -1e-12);
        CHECK(s.worst() >= -1e-12);
    }

    TEST_CASE("lemma slacks for the constant function")
    {
        Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(4, 0.0, 3.0);
        const auto g = GridMeasure::discrete(x, Eigen::VectorXd::Constant(4, 0.25));
        const auto s = lemma_slacks(g, Eigen::VectorXd::Constant(4, 1.0));
        CHECK(std::abs(s.mean_square) < 1e-15);
        const auto r = lemma_slacks(g, Eigen::VectorXd::Constant(4, 3.0));
        CHECK(r.rescaled == 1);
    }
}

TEST_SUITE("families")
{
    TEST_CASE("standard family size and positivity")
    {
        const auto fam = TestFamily::standard();
        CHECK(fam.size() >= 200);
        const auto g = GridMeasure::from_measure(mu(2.0), 2048);
        for (const auto& m : fam.members) {
            const auto v = on(g, m.f).values();
            CHECK(v.allFinite());
            CHECK((v.array() > 0.0).all());
        }
    }

    TEST_CASE("Lipschitz members report their constant")
    {
        const auto g = GridMeasure::from_measure(mu(1.0), 8192);
        for (const auto& m : TestFamily::lipschitz().members) {
            REQUIRE(m.lipschitz);
            const auto f = on(g, m.f);
            CHECK(f.derivative().cwiseAbs().maxCoeff() <= *m.lipschitz + 1e-6);
        }
    }

    TEST_CASE("JSON specs")
    {
        CHECK(TestFamily::from_json("exponentials").size() == 30);
        CHECK(TestFamily::from_json({{"name", "fourier"}, {"count", 7}, {"seed", 3}}).size() == 7);
        CHECK_THROWS_WITH(TestFamily::from_json({{"name", "bumps"}, {"width", 1}}), "unknown key: width");
        const auto a = TestFamily::fourier(5, 9);
        const auto b = TestFamily::fourier(5, 9);
        CHECK(a.members[3].f(0.7) == b.members[3].f(0.7));
    }
}
