#include "cli.hpp"

#include "funcineq/certify.hpp"
#include "funcineq/hardy.hpp"
#include "funcineq/report.hpp"
#include "funcineq/transport.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace funcineq::cli {

namespace {

struct Args {
    std::string measure;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> b;
    std::optional<double> sigma;
    std::string cost;
    std::string family = "standard";
    std::string out;
    std::string format;
    std::uint64_t seed = 1;
    int threads = 0;
    std::optional<double> claimed;
    double tolerance = 1e-6;
    int max_nodes = 65536;

    // certify-modified
    double A = 34.0;
    std::vector<double> sweep{10.0, 20.0, 34.0, 50.0};
    int nodes = 2048;
    std::string region = "at_least_two";

    // certify-talagrand, concentration, transfer
    std::optional<double> C;
    double a = 1.0;
    double cost_alpha = 2.0;
    std::vector<double> shifts{-1.0, -0.5, -0.25, 0.25, 0.5, 1.0};
    std::vector<double> tilts{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};

    // hardy
    std::string weight = "saturating";
    std::string pair;

    // concentration
    int n = 1;
    std::int64_t samples = 100000;
    std::string statistic = "sum";

    // hopf-lax
    std::string input;
    double t = 1.0;

    // transfer
    std::string rule;
    std::optional<double> lambda;
    std::optional<double> C1;
    std::optional<double> C2;
    std::optional<double> osc;
    std::optional<double> transfer_alpha;

    // lemmas
    int grid_points = 100000;
    int trials = 10000;
    int atoms = 8;
};

nlohmann::json parse_json(const std::string& text, const std::string& flag)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception&) {
        throw Error("invalid JSON for " + flag);
    }
}

nlohmann::json measure_json(const Args& a)
{
    if (a.measure.empty()) {
        throw Error("missing measure spec: --measure");
    }
    if (a.measure.front() == '{') {
        return parse_json(a.measure, "--measure");
    }
    nlohmann::json j{{"family", a.measure}};
    if (a.alpha) {
        j["alpha"] = *a.alpha;
    }
    if (a.beta) {
        j["beta"] = *a.beta;
    }
    if (a.b) {
        j["b"] = *a.b;
    }
    if (a.sigma) {
        j["sigma"] = *a.sigma;
    }
    return j;
}

nlohmann::json family_json(const Args& a)
{
    if (!a.family.empty() && a.family.front() == '{') {
        return parse_json(a.family, "--family");
    }
    return a.family;
}

int thread_count(const Args& a)
{
    if (a.threads > 0) {
        return a.threads;
    }
    if (const char* env = std::getenv("FUNCINEQ_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) {
                return n;
            }
        } catch (const std::exception&) {
        }
        throw Error("bad value for FUNCINEQ_THREADS");
    }
    return 1;
}

std::string output_format(const Args& a)
{
    if (!a.format.empty()) {
        return a.format;
    }
    const auto& o = a.out;
    return o.size() >= 4 && o.compare(o.size() - 4, 4, ".csv") == 0 ? "csv" : "json";
}

Region parse_region(const std::string& s)
{
    if (s == "all") {
        return Region::all;
    }
    if (s == "at_least_two") {
        return Region::at_least_two;
    }
    if (s == "omega") {
        return Region::omega;
    }
    throw Error("unknown value for key: region");
}

std::string report_csv(const InequalityReport& rep)
{
    std::string s = csv_row({"index", "family", "params", "ratio"});
    const auto& members = rep.family.contains("members") ? rep.family.at("members") : nlohmann::json();
    for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
        std::string fam;
        std::string params;
        if (members.is_array() && i < members.size()) {
            fam = members[i].value("family", "");
            params = members[i].contains("params") ? members[i].at("params").dump() : "";
        }
        s += csv_row({std::to_string(i), fam, params, format_number(rep.ratios[i])});
    }
    return s;
}

std::string flat_csv(const nlohmann::json& j)
{
    std::string s = csv_row({"key", "value"});
    for (auto it = j.begin(); it != j.end(); ++it) {
        s += csv_row({it.key(), it->is_string() ? it->get<std::string>() : it->dump()});
    }
    return s;
}

void emit(const Args& a, const std::string& text, std::ostream& out)
{
    if (a.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(a.out, std::ios::binary);
    if (!f) {
        throw Error("cannot open output file: " + a.out);
    }
    f << text;
    if (!f) {
        throw Error("cannot write output file: " + a.out);
    }
}

struct Result {
    nlohmann::json payload;
    std::string csv;
    int code = ok;
};

int code_for(Verdict v)
{
    return v == Verdict::violated ? violation : ok;
}

Result from_report(const InequalityReport& rep)
{
    return {rep.to_json(), report_csv(rep), code_for(rep.verdict)};
}

void add_measure(CLI::App* c, Args& a)
{
    c->add_option("--measure", a.measure, "measure spec: JSON object or family name");
    c->add_option("--alpha", a.alpha, "family parameter alpha");
    c->add_option("--beta", a.beta, "family parameter beta");
    c->add_option("--b", a.b, "family parameter b");
    c->add_option("--sigma", a.sigma, "gaussian standard deviation");
}

void add_output(CLI::App* c, Args& a)
{
    c->add_option("--out", a.out, "output path (stdout when omitted)");
    c->add_option("--format", a.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--threads", a.threads, "worker threads (FUNCINEQ_THREADS otherwise)")
        ->check(CLI::PositiveNumber);
}

void add_certify(CLI::App* c, Args& a)
{
    c->add_option("--family", a.family, "test family: name or JSON spec");
    c->add_option("--claimed", a.claimed, "constant to test against");
    c->add_option("--tolerance", a.tolerance, "tolerance on the claimed constant");
    c->add_option("--max-nodes", a.max_nodes, "grid refinement limit")->check(CLI::PositiveNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Numerical certification of functional inequalities", "funcineq"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());
    Args a;

    auto* lsi = app.add_subcommand("certify-lsi", "log-Sobolev constant over a test family");
    add_measure(lsi, a);
    add_output(lsi, a);
    add_certify(lsi, a);
    lsi->add_option("--cost", a.cost, "cost spec as JSON (default: dirichlet)");

    auto* poincare = app.add_subcommand("certify-poincare", "Poincaré constant over a test family");
    add_measure(poincare, a);
    add_output(poincare, a);
    add_certify(poincare, a);

    auto* modified = app.add_subcommand("certify-modified", "modified LSI frontier for mu_alpha");
    add_measure(modified, a);
    add_output(modified, a);
    modified->add_option("--family", a.family, "test family: name or JSON spec");
    modified->add_option("--A", a.A, "variance coefficient reported as the primary value");
    modified->add_option("--sweep", a.sweep, "variance coefficients to sweep");
    modified->add_option("--nodes", a.nodes, "grid nodes")->check(CLI::PositiveNumber);
    modified->add_option("--region", a.region, "all, at_least_two or omega");

    auto* talagrand = app.add_subcommand("certify-talagrand", "transport inequality on densities");
    add_measure(talagrand, a);
    add_output(talagrand, a);
    talagrand->add_option("--C", a.C, "LSI constant (estimated when omitted)");
    talagrand->add_option("--a", a.a, "cost scale a");
    talagrand->add_option("--cost-alpha", a.cost_alpha, "cost exponent");
    talagrand->add_option("--shifts", a.shifts, "translation densities");
    talagrand->add_option("--tilts", a.tilts, "exponential tilt densities");
    talagrand->add_option("--tolerance", a.tolerance, "allowed excess");

    auto* hardy = app.add_subcommand("hardy", "Hardy and weighted-LSI criteria");
    add_measure(hardy, a);
    add_output(hardy, a);
    hardy->add_option("--weight", a.weight, "one or saturating")
        ->check(CLI::IsMember({"one", "saturating"}));
    hardy->add_option("--pair", a.pair, "discrete pair as JSON {points, masses, densities}");

    auto* conc = app.add_subcommand("concentration", "Monte Carlo tails of a Lipschitz statistic");
    add_measure(conc, a);
    add_output(conc, a);
    conc->add_option("--n", a.n, "dimension")->check(CLI::PositiveNumber);
    conc->add_option("--samples", a.samples, "sample count")->check(CLI::PositiveNumber);
    conc->add_option("--seed", a.seed, "random seed");
    conc->add_option("--statistic", a.statistic, "sum or coordinate")
        ->check(CLI::IsMember({"sum", "coordinate"}));
    conc->add_option("--C", a.C, "LSI constant for the Herbst reference bound");
    conc->add_option("--a", a.a, "cost scale a for the Herbst reference bound");

    auto* hl = app.add_subcommand("hopf-lax", "Hopf-Lax infimal convolution of a grid function");
    hl->add_option("--input", a.input, "CSV file with columns x,f")->required();
    hl->add_option("--cost", a.cost, "cost spec as JSON")->required();
    hl->add_option("--t", a.t, "time")->check(CLI::NonNegativeNumber);
    add_output(hl, a);

    auto* transfer = app.add_subcommand("transfer", "constant transfer rules");
    transfer->add_option("--rule", a.rule, "tensorise, perturb, lsi_to_poincare or t_to_lsi")
        ->required();
    transfer->add_option("--a", a.a, "cost scale a");
    transfer->add_option("--alpha", a.transfer_alpha, "cost exponent");
    transfer->add_option("--C", a.C, "constant");
    transfer->add_option("--lambda", a.lambda, "free parameter λ > C");
    transfer->add_option("--C1", a.C1, "first factor constant");
    transfer->add_option("--C2", a.C2, "second factor constant");
    transfer->add_option("--osc", a.osc, "oscillation of the perturbation");
    add_output(transfer, a);

    auto* lemmas = app.add_subcommand("lemmas", "pointwise and discrete lemma checks");
    lemmas->add_option("--grid-points", a.grid_points, "scalar grid size")->check(CLI::PositiveNumber);
    lemmas->add_option("--trials", a.trials, "random discrete instances")->check(CLI::PositiveNumber);
    lemmas->add_option("--atoms", a.atoms, "atoms per instance")->check(CLI::PositiveNumber);
    lemmas->add_option("--seed", a.seed, "random seed");
    add_output(lemmas, a);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        const auto* sub = app.get_subcommands().front();
        const std::string command = sub->get_name();
        const int threads = thread_count(a);
        nlohmann::json config{{"command", command}};
        nlohmann::json tolerances{{"tolerance", a.tolerance}};
        Result result;

        // every spec is validated before any computation starts
        std::optional<Measure1D> measure;
        if (command != "hopf-lax" && command != "transfer" && command != "lemmas" &&
            !(command == "hardy" && !a.pair.empty())) {
            const auto mj = measure_json(a);
            config["measure"] = mj;
            measure = Measure1D::build(MeasureSpec::from_json(mj));
        }

        if (command == "certify-lsi" || command == "certify-poincare") {
            const auto fj = family_json(a);
            const auto family = TestFamily::from_json(fj);
            config["family"] = fj;
            CertifyOptions opt;
            opt.claimed = a.claimed;
            opt.tolerance = a.tolerance;
            opt.max_nodes = a.max_nodes;
            opt.threads = threads;
            tolerances["refine_tol"] = opt.refine_tol;
            tolerances["tail_mass"] = opt.tail_mass;
            if (a.claimed) {
                config["claimed"] = *a.claimed;
            }
            config["max_nodes"] = a.max_nodes;
            if (command == "certify-lsi") {
                const auto cj = a.cost.empty() ? nlohmann::json{{"family", "dirichlet"}}
                                               : parse_json(a.cost, "--cost");
                const auto H = cost_from_json(cj);
                config["cost"] = cj;
                result = from_report(estimate_lsi_constant(*measure, H, family, opt));
            } else {
                result = from_report(estimate_poincare_constant(*measure, family, opt));
            }
        } else if (command == "certify-modified") {
            const auto fj = family_json(a);
            const auto family = TestFamily::from_json(fj);
            ModifiedOptions opt;
            opt.primary_A = a.A;
            opt.sweep = a.sweep;
            opt.nodes = a.nodes;
            opt.region = parse_region(a.region);
            opt.threads = threads;
            config["family"] = fj;
            config["A"] = a.A;
            config["sweep"] = a.sweep;
            config["nodes"] = a.nodes;
            config["region"] = a.region;
            result = from_report(verify_modified_lsi(*measure, family, opt));
        } else if (command == "certify-talagrand") {
            config["a"] = a.a;
            config["cost_alpha"] = a.cost_alpha;
            config["shifts"] = a.shifts;
            config["tilts"] = a.tilts;
            const auto H = h_cost(a.a, a.cost_alpha);
            double C = 0.0;
            std::optional<InequalityReport> lsi;
            if (a.C) {
                C = *a.C;
                config["C"] = C;
            } else {
                CertifyOptions opt;
                opt.threads = threads;
                lsi = estimate_lsi_constant(*measure, H, TestFamily::standard(), opt);
                C = lsi->constant;
            }
            auto densities = translation_densities(*measure, a.shifts);
            auto tilts = tilt_densities(*measure, a.tilts);
            densities.insert(densities.end(), tilts.begin(), tilts.end());
            auto rep = verify_talagrand(*measure, C, a.a, a.cost_alpha, densities, a.tolerance);
            if (lsi) {
                rep.extra["lsi_report"] = lsi->to_json();
            }
            result = from_report(rep);
            nlohmann::json rows = nlohmann::json::array();
            std::string csv = csv_row({"name", "params", "cost", "entropy", "bound", "slack"});
            for (const auto& m : rep.extra["members"]) {
                csv += csv_row({m["F"]["name"].get<std::string>(), m["F"]["params"].dump(),
                                format_number(m["cost"].get<double>()),
                                format_number(m["entropy"].get<double>()),
                                format_number(m["bound"].get<double>()),
                                format_number(m["slack"].get<double>())});
            }
            result.csv = csv;
        } else if (command == "hardy") {
            if (!a.pair.empty()) {
                const auto pj = parse_json(a.pair, "--pair");
                config["pair"] = pj;
                for (auto it = pj.begin(); it != pj.end(); ++it) {
                    if (it.key() != "points" && it.key() != "masses" && it.key() != "densities") {
                        throw Error("unknown key: " + it.key());
                    }
                }
                auto vec = [&](const char* key) {
                    if (!pj.contains(key)) {
                        throw Error(std::string("missing key: ") + key);
                    }
                    const auto v = pj.at(key).get<std::vector<double>>();
                    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
                        v.data(), static_cast<Eigen::Index>(v.size())));
                };
                DiscreteHardyPair d{vec("points"), vec("masses"), vec("densities")};
                const auto sup = hardy_constant(d.to_pair());
                result.payload = {{"criterion", d.criterion()},
                                  {"probe", sup.to_json()},
                                  {"best_constant_bounds", {d.criterion(), 4.0 * d.criterion()}}};
            } else {
                config["weight"] = a.weight;
                const auto& spec = measure->spec();
                RealFn h = [](double) { return 1.0; };
                if (a.weight == "saturating") {
                    if (!spec || (spec->family != MeasureFamily::mu_alpha &&
                                  spec->family != MeasureFamily::mu_alpha_beta)) {
                        throw Error("saturating weight needs mu_alpha or mu_alpha_beta");
                    }
                    h = spec->family == MeasureFamily::mu_alpha
                            ? saturating_weight(spec->alpha)
                            : saturating_weight(spec->alpha, spec->beta);
                }
                const auto br = barthe_roberto_constants(*measure, h);
                result.payload = br.to_json();
                result.payload["finite"] = br.finite();
                if (br.finite()) {
                    result.payload["lower"] = br.lower();
                    result.payload["upper"] = br.upper();
                }
            }
            result.csv = flat_csv(result.payload);
        } else if (command == "concentration") {
            config["n"] = a.n;
            config["samples"] = a.samples;
            config["seed"] = a.seed;
            config["statistic"] = a.statistic;
            const ProductMeasure pm{*measure, a.n};
            const auto F = a.statistic == "sum" ? Statistic::normalized_sum(a.n)
                                                : Statistic::coordinate(0);
            ConcentrationOptions opt;
            opt.threads = threads;
            if (a.C) {
                const auto& spec = measure->spec();
                const double alpha = spec ? std::min(spec->alpha, 2.0) : 2.0;
                const double C = *a.C;
                const double sa = a.a;
                herbst_bound(C, sa, alpha, 1.0, 0.0);  // validates the parameters
                opt.reference = [=](double l) { return herbst_bound(C, sa, alpha, 1.0, l).bound; };
                config["C"] = C;
                config["a"] = a.a;
            }
            const auto curve = simulate_concentration(pm, F, a.samples, a.seed, opt);
            result.payload = curve.to_json();
            result.csv = curve.to_csv("herbst");
            result.code = curve.violations > 0 ? violation : ok;
        } else if (command == "hopf-lax") {
            std::ifstream in(a.input, std::ios::binary);
            if (!in) {
                throw Error("cannot open input file: " + a.input);
            }
            std::stringstream buf;
            buf << in.rdbuf();
            const auto f = GridFunction::from_csv(buf.str());
            const auto cj = parse_json(a.cost, "--cost");
            const auto L = cost_from_json(cj);
            config["input"] = a.input;
            config["cost"] = cj;
            config["t"] = a.t;
            const auto q = hopf_lax(f, L, a.t);
            result.csv = q.to_csv();
            nlohmann::json xs = nlohmann::json::array();
            nlohmann::json vs = nlohmann::json::array();
            for (Eigen::Index i = 0; i < q.size(); ++i) {
                xs.push_back(q.nodes()(i));
                vs.push_back(q.values()(i));
            }
            result.payload = {{"x", xs}, {"Q", vs}};
        } else if (command == "transfer") {
            nlohmann::json rule{{"rule", a.rule}};
            auto put = [&](const char* key, const std::optional<double>& v) {
                if (v) {
                    rule[key] = *v;
                }
            };
            if (a.rule == "t_to_lsi") {
                rule["a"] = a.a;
            }
            put("alpha", a.transfer_alpha);
            put("C", a.C);
            put("lambda", a.lambda);
            put("C1", a.C1);
            put("C2", a.C2);
            put("osc", a.osc);
            config["rule"] = rule;
            result.payload = transfer_constants(rule);
            result.csv = flat_csv(result.payload);
        } else if (command == "lemmas") {
            config["grid_points"] = a.grid_points;
            config["trials"] = a.trials;
            config["atoms"] = a.atoms;
            config["seed"] = a.seed;
            const auto s = verify_pointwise_lemmas(a.grid_points, a.trials, a.atoms, a.seed);
            tolerances["slack"] = -1e-12;
            result.payload = s.to_json();
            result.csv = flat_csv(result.payload);
            result.code = s.worst() >= -1e-12 ? ok : violation;
        }

        const auto format = output_format(a);
        config["format"] = format;
        if (format == "csv") {
            emit(a, result.csv, out);
        } else {
            emit(a, envelope(result.payload, config, tolerances).dump(2) + "\n", out);
        }
        return result.code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    }
}

}  // namespace funcineq::cli
