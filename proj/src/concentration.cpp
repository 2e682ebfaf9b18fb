#include "funcineq/certify.hpp"
#include "funcineq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace funcineq {

Statistic Statistic::normalized_sum(int n)
{
    return scaled_sum(n, 1.0);
}

Statistic Statistic::scaled_sum(int n, double c)
{
    if (n < 1) {
        throw Error("parameter out of range");
    }
    const double w = c / std::sqrt(static_cast<double>(n));
    std::ostringstream name;
    name << "scaled_sum(" << n << "," << c << ")";
    return {c == 1.0 ? "normalized_sum(" + std::to_string(n) + ")" : name.str(),
            [w](const Eigen::Ref<const Eigen::RowVectorXd>& x) { return w * x.sum(); },
            std::abs(c)};
}

Statistic Statistic::coordinate(int i)
{
    if (i < 0) {
        throw Error("parameter out of range");
    }
    return {"coordinate(" + std::to_string(i) + ")",
            [i](const Eigen::Ref<const Eigen::RowVectorXd>& x) { return x(i); }, 1.0};
}

Statistic Statistic::constant(double c)
{
    return {"constant", [c](const Eigen::Ref<const Eigen::RowVectorXd>&) { return c; }, 0.0};
}

std::pair<double, double> wilson_interval(std::int64_t k, std::int64_t n)
{
    if (n <= 0 || k < 0 || k > n) {
        throw Error("parameter out of range");
    }
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double denom = 1.0 + z * z / nn;
    const double centre = (p + z * z / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    const double lo = k == 0 ? 0.0 : std::max(0.0, centre - half);
    const double hi = k == n ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

namespace {

std::vector<double> default_lambdas()
{
    std::vector<double> l;
    for (int i = 0; i <= 16; ++i) {
        l.push_back(0.25 * i);
    }
    return l;
}

double shape(double alpha, double lambda)
{
    return std::min(lambda * lambda, std::pow(lambda, alpha));
}

std::int64_t count_at_least(const std::vector<double>& dev, double lambda)
{
    // dev is sorted ascending
    return static_cast<std::int64_t>(dev.end() - std::lower_bound(dev.begin(), dev.end(), lambda));
}

}  // namespace

TailCurve simulate_concentration(const ProductMeasure& pm, const Statistic& F, std::int64_t samples,
                                 std::uint64_t seed, const ConcentrationOptions& opt)
{
    if (F.gradient_bound > 1.0) {
        throw Error("statistic out of hypothesis class");
    }
    if (samples < 4 || opt.shards < 1) {
        throw Error("parameter out of range");
    }
    const auto lambdas = opt.lambdas.empty() ? default_lambdas() : opt.lambdas;
    const auto& spec = pm.factor.spec();
    double alpha = 2.0;
    if (spec && (spec->family == MeasureFamily::mu_alpha ||
                 spec->family == MeasureFamily::mu_alpha_beta ||
                 spec->family == MeasureFamily::tau_alpha)) {
        alpha = std::min(spec->alpha, 2.0);
    }

    // fixed shard layout so the stream does not depend on the thread count
    const std::int64_t shards = opt.shards;
    std::vector<std::vector<double>> values(static_cast<std::size_t>(shards));
    parallel_for(values.size(), opt.threads, [&](std::size_t s) {
        const std::int64_t count = samples / shards + (static_cast<std::int64_t>(s) < samples % shards);
        auto& out = values[s];
        out.resize(static_cast<std::size_t>(count));
        if (count == 0) {
            return;
        }
        const Eigen::MatrixXd x = pm.sample(count, splitmix64(seed + s));
        for (std::int64_t i = 0; i < count; ++i) {
            out[static_cast<std::size_t>(i)] = F.eval(x.row(i));
        }
    });
    std::vector<double> all;
    all.reserve(static_cast<std::size_t>(samples));
    for (const auto& v : values) {
        all.insert(all.end(), v.begin(), v.end());
    }

    TailCurve curve;
    curve.statistic = F.name;
    curve.alpha = alpha;
    curve.samples = samples;
    double sum = 0.0;
    for (double v : all) {
        sum += v;
    }
    curve.mean = sum / static_cast<double>(all.size());

    const std::size_t half = all.size() / 2;
    std::vector<double> fit(half);
    std::vector<double> check(all.size() - half);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const double d = std::abs(all[i] - curve.mean);
        (i < half ? fit[i] : check[i - half]) = d;
    }
    std::sort(fit.begin(), fit.end());
    std::sort(check.begin(), check.end());

    double K = kInf;
    for (double l : lambdas) {
        if (l <= 0.0) {
            continue;
        }
        const auto ci = wilson_interval(count_at_least(fit, l), static_cast<std::int64_t>(fit.size()));
        K = std::min(K, std::max(0.0, -std::log(ci.second / 2.0) / shape(alpha, l)));
    }
    curve.K_fit = std::isfinite(K) ? K : 0.0;

    const auto n = static_cast<std::int64_t>(check.size());
    for (double l : lambdas) {
        TailPoint p;
        p.lambda = l;
        p.hits = count_at_least(check, l);
        p.empirical = static_cast<double>(p.hits) / static_cast<double>(n);
        std::tie(p.ci_lo, p.ci_hi) = wilson_interval(p.hits, n);
        p.bound = opt.reference ? opt.reference(l)
                                : std::min(1.0, 2.0 * std::exp(-curve.K_fit * shape(alpha, l)));
        if (p.ci_lo > p.bound) {
            ++curve.violations;
        }
        curve.points.push_back(p);
    }
    return curve;
}

std::string TailCurve::to_csv(const std::string& bound_label) const
{
    std::ostringstream out;
    out << std::setprecision(17);
    out << "lambda,empirical," << bound_label << ",ci_lo,ci_hi\r\n";
    for (const auto& p : points) {
        out << p.lambda << ',' << p.empirical << ',' << p.bound << ',' << p.ci_lo << ','
            << p.ci_hi << "\r\n";
    }
    return out.str();
}

nlohmann::json TailCurve::to_json() const
{
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points) {
        pts.push_back({{"lambda", p.lambda},
                       {"empirical", p.empirical},
                       {"ci_lo", p.ci_lo},
                       {"ci_hi", p.ci_hi},
                       {"bound", p.bound},
                       {"hits", p.hits}});
    }
    return {{"statistic", statistic}, {"alpha", alpha},       {"samples", samples},
            {"mean", mean},           {"K_fit", K_fit},       {"points", pts},
            {"violations", violations}};
}

}  // namespace funcineq
