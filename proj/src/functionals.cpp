#include "funcineq/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <vector>

namespace funcineq {

GridMeasure GridMeasure::on_nodes(const Measure1D& m, const Eigen::VectorXd& nodes)
{
    const Eigen::Index n = nodes.size();
    if (n < 3) {
        throw Error("grid needs at least 3 nodes");
    }
    GridMeasure g;
    g.nodes = nodes;
    g.weights.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double left = i > 0 ? nodes(i) - nodes(i - 1) : 0.0;
        const double right = i + 1 < n ? nodes(i + 1) - nodes(i) : 0.0;
        g.weights(i) = 0.5 * (left + right) * m.density(nodes(i));
    }
    const double total = g.weights.sum();
    if (!(total > 0.0)) {
        throw Error("grid carries no mass");
    }
    g.weights /= total;
    return g;
}

GridMeasure GridMeasure::from_measure(const Measure1D& m, int n, double tail_mass)
{
    if (n < 3) {
        throw Error("grid needs at least 3 nodes");
    }
    const Interval w = m.window(tail_mass);
    double h = w.width() / (n - 1);
    double lo = w.lo;
    if (w.lo < 0.0 && w.hi > 0.0) {
        lo = -std::ceil(-w.lo / h) * h;
    }
    const int count = static_cast<int>(std::floor((w.hi - lo) / h + 1e-9)) + 1;
    Eigen::VectorXd nodes(std::max(count, 3));
    for (Eigen::Index i = 0; i < nodes.size(); ++i) {
        nodes(i) = lo + static_cast<double>(i) * h;
    }
    return on_nodes(m, nodes);
}

GridMeasure GridMeasure::discrete(Eigen::VectorXd nodes, Eigen::VectorXd weights)
{
    if (nodes.size() != weights.size() || nodes.size() == 0) {
        throw Error("atoms and weights differ in length");
    }
    if ((weights.array() < 0.0).any() || !(weights.sum() > 0.0)) {
        throw Error("weights must be nonnegative with positive total");
    }
    GridMeasure g;
    g.nodes = std::move(nodes);
    g.weights = weights / weights.sum();
    return g;
}

GridFunction::GridFunction(Eigen::VectorXd nodes, Eigen::VectorXd values)
    : nodes_(std::move(nodes)), values_(std::move(values))
{
    const Eigen::Index n = nodes_.size();
    if (n < 3) {
        throw Error("grid needs at least 3 nodes");
    }
    if (values_.size() != n) {
        throw Error("nodes and values differ in length");
    }
    for (Eigen::Index i = 1; i < n; ++i) {
        if (!(nodes_(i) > nodes_(i - 1))) {
            throw Error("nodes must be strictly increasing");
        }
    }
    derivative_.resize(n);
    const auto& x = nodes_;
    const auto& f = values_;
    // divided differences keep constants exactly flat
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double h1 = x(i) - x(i - 1);
        const double h2 = x(i + 1) - x(i);
        const double d1 = (f(i) - f(i - 1)) / h1;
        const double d2 = (f(i + 1) - f(i)) / h2;
        derivative_(i) = (h2 * d1 + h1 * d2) / (h1 + h2);
    }
    {
        const double h1 = x(1) - x(0);
        const double h2 = x(2) - x(1);
        const double d1 = (f(1) - f(0)) / h1;
        const double d2 = (f(2) - f(1)) / h2;
        derivative_(0) = d1 - h1 * (d2 - d1) / (h1 + h2);
    }
    {
        const Eigen::Index m = n - 1;
        const double h1 = x(m) - x(m - 1);
        const double h2 = x(m - 1) - x(m - 2);
        const double d1 = (f(m) - f(m - 1)) / h1;
        const double d2 = (f(m - 1) - f(m - 2)) / h2;
        derivative_(m) = d1 + h1 * (d1 - d2) / (h1 + h2);
    }
}

GridFunction GridFunction::sample(const RealFn& f, const Eigen::VectorXd& nodes)
{
    Eigen::VectorXd v(nodes.size());
    for (Eigen::Index i = 0; i < nodes.size(); ++i) {
        v(i) = f(nodes(i));
    }
    return GridFunction(nodes, std::move(v));
}

GridFunction GridFunction::scaled(double c) const
{
    return GridFunction(nodes_, c * values_);
}

std::string GridFunction::to_csv() const
{
    std::ostringstream out;
    out << std::setprecision(17);
    out << "x,f\r\n";
    for (Eigen::Index i = 0; i < nodes_.size(); ++i) {
        out << nodes_(i) << ',' << values_(i) << "\r\n";
    }
    return out.str();
}

GridFunction GridFunction::from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::vector<double> xs;
    std::vector<double> fs;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (header) {
            header = false;
            if (line == "x,f") {
                continue;
            }
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw Error("malformed CSV row: " + line);
        }
        try {
            xs.push_back(std::stod(line.substr(0, comma)));
            fs.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw Error("malformed CSV row: " + line);
        }
    }
    return GridFunction(Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                        Eigen::Map<Eigen::VectorXd>(fs.data(), static_cast<Eigen::Index>(fs.size())));
}

namespace {

void require_same_nodes(const GridMeasure& g, Eigen::Index n)
{
    if (g.size() != n) {
        throw Error("function and measure live on different grids");
    }
}

}  // namespace

double entropy(const GridMeasure& g, const Eigen::VectorXd& f2)
{
    require_same_nodes(g, f2.size());
    if ((f2.array() < 0.0).any()) {
        throw Error("entropy needs a nonnegative function");
    }
    const double mass = g.integrate(f2);
    if (!(mass > 0.0)) {
        throw Error("entropy of null function");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < f2.size(); ++i) {
        const double r = f2(i) / mass;
        const double u = r > 0.0 ? r * std::log(r) - r + 1.0 : 1.0;
        sum += g.weights(i) * u;
    }
    return mass * std::max(sum, 0.0);
}

double entropy(const Measure1D& m, const GridFunction& f2)
{
    return entropy(GridMeasure::on_nodes(m, f2.nodes()), f2.values());
}

double variance(const GridMeasure& g, const Eigen::VectorXd& f)
{
    require_same_nodes(g, f.size());
    const double mean = g.integrate(f);
    const Eigen::VectorXd c = f.array() - mean;
    return g.integrate(c.array().square().matrix());
}

double variance(const Measure1D& m, const GridFunction& f)
{
    return variance(GridMeasure::on_nodes(m, f.nodes()), f.values());
}

double dirichlet(const GridMeasure& g, const GridFunction& f)
{
    require_same_nodes(g, f.size());
    return g.integrate(f.derivative().array().square().matrix());
}

double dirichlet(const Measure1D& m, const GridFunction& f)
{
    return dirichlet(GridMeasure::on_nodes(m, f.nodes()), f);
}

std::string to_string(Region region)
{
    switch (region) {
    case Region::all: return "all";
    case Region::at_least_two: return "f>=2";
    case Region::omega: return "omega";
    }
    return "all";
}

Eigen::Array<bool, Eigen::Dynamic, 1> region_mask(const GridMeasure& g, const Eigen::VectorXd& f,
                                                  Region region)
{
    require_same_nodes(g, f.size());
    Eigen::Array<bool, Eigen::Dynamic, 1> mask(f.size());
    switch (region) {
    case Region::all:
        mask.setConstant(true);
        break;
    case Region::at_least_two:
        mask = f.array() >= 2.0;
        break;
    case Region::omega: {
        const Eigen::ArrayXd plus = f.array().max(0.0);
        const Eigen::ArrayXd minus = (-f.array()).max(0.0);
        const double tp = 2.0 * std::sqrt(g.integrate(plus.square().matrix()));
        const double tm = 2.0 * std::sqrt(g.integrate(minus.square().matrix()));
        mask = (plus >= tp && plus > 0.0) || (minus >= tm && minus > 0.0);
        break;
    }
    }
    return mask;
}

double energy(const GridMeasure& g, const GridFunction& f, const CostFunction& H, Region region)
{
    require_same_nodes(g, f.size());
    const auto mask = region_mask(g, f.values(), region);
    const auto& v = f.values();
    const auto& d = f.derivative();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!mask(i) || g.weights(i) == 0.0) {
            continue;
        }
        if (v(i) == 0.0) {
            if (d(i) != 0.0) {
                return kInf;
            }
            continue;
        }
        const double term = H(d(i) / v(i)) * v(i) * v(i);
        if (!std::isfinite(term)) {
            return kInf;
        }
        sum += g.weights(i) * term;
    }
    return sum;
}

double energy(const Measure1D& m, const GridFunction& f, const CostFunction& H, Region region)
{
    return energy(GridMeasure::on_nodes(m, f.nodes()), f, H, region);
}

double latala_deficit(const GridMeasure& g, const Eigen::VectorXd& f, double p)
{
    if (!(p >= 1.0 && p < 2.0)) {
        throw Error("parameter out of range");
    }
    require_same_nodes(g, f.size());
    const Eigen::ArrayXd af = f.array().abs();
    const double m2 = g.integrate(af.square().matrix());
    const double mp = g.integrate(af.pow(p).matrix());
    return m2 - std::pow(mp, 2.0 / p);
}

double latala_deficit(const Measure1D& m, const GridFunction& f, double p)
{
    return latala_deficit(GridMeasure::on_nodes(m, f.nodes()), f.values(), p);
}

double LemmaSlacks::worst() const
{
    return std::min({quintic, mean_square, upper_mass, upper_entropy, positivity});
}

nlohmann::json LemmaSlacks::to_json() const
{
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    return {{"quintic", num(quintic)},
            {"mean_square", num(mean_square)},
            {"upper_mass", num(upper_mass)},
            {"upper_entropy", num(upper_entropy)},
            {"positivity", num(positivity)},
            {"grid_points", grid_points},
            {"trials", trials},
            {"rescaled", rescaled}};
}

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

LemmaSlacks lemma_slacks(const GridMeasure& g, Eigen::VectorXd f)
{
    require_same_nodes(g, f.size());
    if ((f.array() < 0.0).any()) {
        throw Error("lemma instances need f >= 0");
    }
    LemmaSlacks s;
    s.trials = 1;
    const double m2 = g.integrate(f.array().square().matrix());
    if (!(m2 > 0.0)) {
        throw Error("entropy of null function");
    }
    if (std::abs(m2 - 1.0) > 1e-14) {
        f /= std::sqrt(m2);
        s.rescaled = 1;
    }
    const Eigen::VectorXd f2 = f.array().square();
    const double var = variance(g, f);
    const double ent = entropy(g, f2);
    const Eigen::ArrayXd high = (f.array() >= 2.0).cast<double>();
    const double lhs_b = g.integrate((f.array() - 1.0).square().matrix());
    const double lhs_c = g.integrate((high * f2.array()).matrix());
    Eigen::VectorXd f2logf2(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        f2logf2(i) = high(i) * xlogx(f2(i));
    }
    const double lhs_d = g.integrate(f2logf2);
    const double ln4 = std::log(4.0);
    s.mean_square = 2.0 * var - lhs_b;
    s.upper_mass = 8.0 * var - lhs_c;
    s.upper_entropy = ln4 / (ln4 - 1.0) * ent - lhs_d;
    return s;
}

LemmaSlacks verify_pointwise_lemmas(int grid_points, int trials, int atoms, std::uint64_t seed)
{
    if (grid_points < 2 || trials < 0 || atoms < 1) {
        throw Error("parameter out of range");
    }
    LemmaSlacks s;
    s.grid_points = grid_points;
    for (int i = 0; i < grid_points; ++i) {
        const double x = 100.0 * i / (grid_points - 1);
        const double lhs = xlogx(x * x);
        const double t = std::max(x - 2.0, 0.0);
        const double rhs = 5.0 * (x - 1.0) * (x - 1.0) + x * x - 1.0 + xlogx(t * t);
        s.quintic = std::min(s.quintic, rhs - lhs);
        s.positivity = std::min(s.positivity, xlogx(x) + 1.0 - x);
    }
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd w(atoms);
        Eigen::VectorXd f(atoms);
        const double spread = 0.25 + 2.0 * to_unit(gen());
        for (int i = 0; i < atoms; ++i) {
            w(i) = to_unit(gen());
            f(i) = std::exp(spread * normal(gen));
            // some atoms at zero, as allowed for f >= 0
            if (to_unit(gen()) < 0.1) {
                f(i) = 0.0;
            }
        }
        if (!(f.sum() > 0.0)) {
            f(0) = 1.0;
        }
        Eigen::VectorXd nodes = Eigen::VectorXd::LinSpaced(atoms, 0.0, atoms - 1.0);
        const auto one = lemma_slacks(GridMeasure::discrete(nodes, w), f);
        s.mean_square = std::min(s.mean_square, one.mean_square);
        s.upper_mass = std::min(s.upper_mass, one.upper_mass);
        s.upper_entropy = std::min(s.upper_entropy, one.upper_entropy);
        s.rescaled += one.rescaled;
        ++s.trials;
    }
    return s;
}

}  // namespace funcineq
