#include "funcineq/hardy.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace funcineq;

namespace {

HardyPair exponential_pair(double c)
{
    HardyPair p;
    p.mu_tail = [](double x) { return std::exp(-x); };
    p.nu_density = [c](double t) { return c * std::exp(-t); };
    p.window = {1e-3, 60.0};
    return p;
}

DiscreteHardyPair random_pair(std::mt19937_64& rng, int n)
{
    std::uniform_real_distribution<double> u(0.05, 1.0);
    DiscreteHardyPair d{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
        t += u(rng);
        d.points(i) = t;
        d.masses(i) = u(rng);
        d.densities(i) = u(rng) * 3.0;
    }
    return d;
}

}  // namespace

TEST_SUITE("hardy")
{
    TEST_CASE("exponential pair has B = 1")
    {
        const auto r = hardy_constant(exponential_pair(1.0));
        CHECK(r.finite);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r.to_json()["classification"] == "finite");
    }

    TEST_CASE("criterion is linear in 1/ν")
    {
        const auto a = hardy_constant(exponential_pair(1.0));
        const auto b = hardy_constant(exponential_pair(2.0));
        CHECK(b.value == doctest::Approx(a.value / 2.0).epsilon(1e-10));
    }

    TEST_CASE("degenerate density")
    {
        auto p = exponential_pair(1.0);
        p.nu_density = [](double t) { return t < 1.0 ? 1.0 : 0.0; };
        CHECK_THROWS_WITH(hardy_constant(p), doctest::Contains("criterion integrand diverges at t="));
    }

    TEST_CASE("divergent criterion")
    {
        HardyPair p;
        p.mu_tail = [](double x) { return 1.0 / std::sqrt(1.0 + x); };
        p.nu_density = [](double) { return 1.0; };
        p.window = {1e-3, 1e6};
        const auto r = hardy_constant(p);
        CHECK_FALSE(r.finite);
        CHECK(r.to_json()["sup_value"] == "inf");
    }

    TEST_CASE("discrete criterion matches the probe")
    {
        std::mt19937_64 rng(2);
        for (int i = 0; i < 20; ++i) {
            const auto d = random_pair(rng, 6);
            const auto r = hardy_constant(d.to_pair());
            CHECK(r.value == doctest::Approx(d.criterion()).epsilon(1e-9));
        }
    }

    TEST_CASE("sandwich against the eigenvalue oracle")
    {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 50; ++i) {
            const auto d = random_pair(rng, 6);
            const double B = d.criterion();
            const double A = oracle::hardy_best_constant(d.points, d.masses, d.densities);
            CHECK(A >= B - 1e-10);
            CHECK(A <= 4.0 * B + 1e-10);
        }
    }

    TEST_CASE("monotone in the pair")
    {
        std::mt19937_64 rng(4);
        for (int i = 0; i < 20; ++i) {
            auto d = random_pair(rng, 6);
            const double B = d.criterion();
            auto bigger = d;
            bigger.masses *= 1.5;
            CHECK(bigger.criterion() >= B);
            auto thinner = d;
            thinner.densities *= 0.5;
            CHECK(thinner.criterion() >= B);
        }
    }

    TEST_CASE("saturating weights")
    {
        const auto h2 = saturating_weight(2.0);
        for (double x : {-5.0, 0.0, 0.5, 3.0, 100.0}) {
            CHECK(h2(x) == 1.0);
        }
        CHECK(saturating_weight(1.5)(4.0) == doctest::Approx(2.0));
        CHECK(saturating_weight(1.5)(-4.0) == doctest::Approx(2.0));
        const double e2 = std::exp(2.0);
        CHECK(saturating_weight(1.5, 1.0)(e2) == doctest::Approx(std::exp(1.0) / 2.0).epsilon(1e-14));
        const auto hb = saturating_weight(1.5, 1.0);
        CHECK(hb(2.0 - 1e-12) == doctest::Approx(hb(2.0 + 1e-12)).epsilon(1e-9));
    }

    TEST_CASE("Barthe-Roberto constants")
    {
        for (double alpha : {1.2, 1.5, 2.0}) {
            const auto m = Measure1D::build(MeasureSpec::mu_alpha(alpha));
            const auto c = barthe_roberto_constants(m, saturating_weight(alpha));
            CHECK(c.finite());
            CHECK(c.lower() <= c.upper());
            CHECK(c.b_minus.value == doctest::Approx(c.b_plus.value).epsilon(1e-9));
            CHECK(require_finite(c).upper() > 0.0);
        }
        const auto m = Measure1D::build(MeasureSpec::mu_alpha(1.5));
        const auto flat = barthe_roberto_constants(m, [](double) { return 1.0; });
        CHECK_FALSE(flat.B_plus.finite);
        CHECK_THROWS_WITH(require_finite(flat), "weighted LSI constant infinite");
    }

    TEST_CASE("Barthe-Roberto needs a two-sided measure")
    {
        const auto m = Measure1D::build(MeasureSpec::gamma_alpha_b(1.5, 0.0));
        CHECK_THROWS(barthe_roberto_constants(m, saturating_weight(1.5)));
    }
}
