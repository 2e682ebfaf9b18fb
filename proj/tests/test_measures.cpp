#include "funcineq/measures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace funcineq;

namespace {

Measure1D mu(double alpha)
{
    return Measure1D::build(MeasureSpec::mu_alpha(alpha));
}

}  // namespace

TEST_SUITE("measures")
{
    TEST_CASE("normalizing constants")
    {
        CHECK(mu(1.0).normalization() == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(mu(2.0).normalization() == doctest::Approx(std::sqrt(oracle::pi)).epsilon(1e-12));
        const auto g = Measure1D::build(MeasureSpec::gaussian(1.0));
        CHECK(g.normalization() == doctest::Approx(std::sqrt(2.0 * oracle::pi)).epsilon(1e-12));
    }

    TEST_CASE("gamma_alpha_b integrates to one against an independent quadrature")
    {
        const auto m = Measure1D::build(MeasureSpec::gamma_alpha_b(1.5, 2.0));
        CHECK(m.normalization() > 0.0);
        auto dens = [](double x) { return std::pow(1.0 + x, 2.0) * std::exp(-std::pow(x, 1.5)); };
        const double z = oracle::simpson(dens, 0.0, 60.0, 200000);
        CHECK(m.normalization() == doctest::Approx(z).epsilon(1e-9));
        CHECK(m.expect([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(m.cdf(-1.0) == 0.0);
    }

    TEST_CASE("every family integrates to one")
    {
        for (const auto& spec :
             {MeasureSpec::mu_alpha(1.0), MeasureSpec::mu_alpha(1.2), MeasureSpec::mu_alpha(3.0),
              MeasureSpec::mu_alpha_beta(1.5, 1.0), MeasureSpec::mu_alpha_beta(2.0, -1.0),
              MeasureSpec::mu_alpha_beta(1.5, 1.0, CoreInterpolant::sextic),
              MeasureSpec::tau_alpha(1.5), MeasureSpec::gamma_alpha_b(2.0, -0.5),
              MeasureSpec::gaussian(0.3)}) {
            const auto m = Measure1D::build(spec);
            CHECK(std::abs(m.expect([](double) { return 1.0; }) - 1.0) < 1e-9);
        }
    }

    TEST_CASE("parameter validation")
    {
        CHECK_THROWS_WITH(mu(0.5), "parameter out of range");
        CHECK_THROWS_WITH(Measure1D::build(MeasureSpec::tau_alpha(1.0)), "parameter out of range");
        CHECK_THROWS_WITH(Measure1D::build(MeasureSpec::gaussian(0.0)), "parameter out of range");
        CHECK_THROWS_WITH(Measure1D::custom([](double) { return 0.0; }), "divergent normalization");
        CHECK_THROWS_WITH(MeasureSpec::from_json({{"family", "mu_alpha"}, {"alpha", 2}, {"x", 1}}),
                          "unknown key: x");
        CHECK_THROWS(MeasureSpec::from_json({{"family", "cauchy"}}));
    }

    TEST_CASE("spec round trip through JSON")
    {
        const auto s = MeasureSpec::mu_alpha_beta(1.5, 0.5, CoreInterpolant::sextic);
        const auto t = MeasureSpec::from_json(s.to_json());
        CHECK(t.family == s.family);
        CHECK(t.alpha == s.alpha);
        CHECK(t.beta == s.beta);
        CHECK(t.core == s.core);
    }

    TEST_CASE("cdf values")
    {
        CHECK(mu(1.0).cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(mu(1.0).cdf(std::log(0.75)) == doctest::Approx(0.375).epsilon(1e-10));
        const auto g = Measure1D::build(MeasureSpec::gaussian(1.0));
        CHECK(g.cdf(1.0) == doctest::Approx(oracle::normal_cdf(1.0)).epsilon(1e-10));
        CHECK(g.cdf(-1e9) == 0.0);
        CHECK(g.cdf(1e9) == 1.0);
    }

    TEST_CASE("quantile values and round trip")
    {
        CHECK(std::abs(mu(1.0).quantile(0.5)) < 1e-12);
        CHECK(mu(1.0).quantile(0.375) == doctest::Approx(std::log(0.75)).epsilon(1e-9));
        const auto m = mu(1.5);
        CHECK(m.quantile(m.cdf(1.3)) == doctest::Approx(1.3).epsilon(1e-8));
        for (double x = -4.0; x <= 4.0; x += 0.37) {
            CHECK(std::abs(m.quantile(m.cdf(x)) - x) < 1e-8);
        }
        CHECK_THROWS_WITH(m.quantile(0.0), "probability out of range");
        CHECK_THROWS_WITH(m.quantile(1.0), "probability out of range");
    }

    TEST_CASE("cdf is monotone")
    {
        const auto m = Measure1D::build(MeasureSpec::mu_alpha_beta(1.2, 2.0));
        double prev = 0.0;
        for (double x = -30.0; x <= 30.0; x += 0.05) {
            const double c = m.cdf(x);
            CHECK(c >= prev);
            prev = c;
        }
    }

    TEST_CASE("deep tails stay accurate")
    {
        const auto g = Measure1D::build(MeasureSpec::gaussian(1.0));
        const double exact = 0.5 * std::erfc(8.0 / std::sqrt(2.0));
        CHECK(g.upper_tail(8.0) == doctest::Approx(exact).epsilon(1e-9));
        CHECK(g.lower_tail(-8.0) == doctest::Approx(exact).epsilon(1e-9));
        CHECK(g.log_upper_tail(30.0) == doctest::Approx(std::log(0.5 * std::erfc(30.0 / std::sqrt(2.0)))).epsilon(1e-9));
    }

    TEST_CASE("sampling moments for mu_2")
    {
        const auto s = mu(2.0).sample(100000, 7);
        const double mean = s.mean();
        const double var = (s.array() - mean).square().sum() / (s.size() - 1);
        CHECK(std::abs(mean) < 3.0 * std::sqrt(0.5 / 1e5));
        CHECK(std::abs(var - 0.5) < 0.01);
    }

    TEST_CASE("sampling is deterministic per seed")
    {
        const auto m = mu(1.5);
        CHECK(m.sample(100, 3) == m.sample(100, 3));
        CHECK(m.sample(100, 3) != m.sample(100, 4));
    }

    TEST_CASE("product sampling passes a KS check per coordinate")
    {
        const ProductMeasure pm{mu(1.5), 10};
        const auto x = pm.sample(10000, 1);
        REQUIRE(x.rows() == 10000);
        REQUIRE(x.cols() == 10);
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            CHECK(ks_statistic(x.col(j), pm.factor) < 0.02);
        }
    }

    TEST_CASE("sample moments within the Monte Carlo envelope")
    {
        for (double alpha : {1.0, 1.5, 3.0}) {
            const auto m = mu(alpha);
            const double m2 = m.expect([](double x) { return x * x; });
            const double m4 = m.expect([](double x) { return x * x * x * x; });
            const auto s = m.sample(50000, 11);
            const double emp = s.array().square().mean();
            CHECK(std::abs(emp - m2) < 4.0 * std::sqrt((m4 - m2 * m2) / 50000.0));
        }
    }

    TEST_CASE("tail asymptotic ratio")
    {
        CHECK(std::abs(tail_asymptotic_ratio(mu(1.5), 6.0) - 1.0) < 0.1);
        CHECK(std::abs(tail_asymptotic_ratio(mu(2.0), 8.0) - 1.0) < 0.05);
        for (double alpha : {1.2, 1.5, 2.0}) {
            const auto m = mu(alpha);
            double prev = std::abs(tail_asymptotic_ratio(m, 4.0) - 1.0);
            for (double x : {6.0, 8.0, 12.0}) {
                const double gap = std::abs(tail_asymptotic_ratio(m, x) - 1.0);
                CHECK(gap < prev);
                prev = gap;
            }
        }
        CHECK_THROWS_WITH(tail_asymptotic_ratio(mu(1.5), 0.0),
                          "asymptotic regime requires positive x");
    }

    TEST_CASE("perturbation")
    {
        const auto base = mu(1.5);
        const auto same = perturb(base, [](double) { return 3.0; });
        CHECK(*same.oscillation() == 0.0);
        CHECK(total_variation(base, same) < 1e-10);

        const auto wavy = perturb(base, [](double x) { return std::sin(x); });
        CHECK(*wavy.oscillation() == doctest::Approx(2.0).epsilon(1e-3));
        CHECK(std::abs(wavy.expect([](double) { return 1.0; }) - 1.0) < 1e-9);

        CHECK_THROWS_WITH(perturb(mu(2.0), [](double x) { return x; }), "perturbation not bounded");
    }

    TEST_CASE("mu_alpha_beta is insensitive to the core interpolant in the tails")
    {
        const auto q = Measure1D::build(MeasureSpec::mu_alpha_beta(1.5, 1.0));
        const auto s = Measure1D::build(MeasureSpec::mu_alpha_beta(1.5, 1.0, CoreInterpolant::sextic));
        CHECK(q.potential(3.0) == s.potential(3.0));
        CHECK(total_variation(q, s) < 0.05);
    }
}
