#pragma once

#include "funcineq/costs.hpp"
#include "funcineq/families.hpp"
#include "funcineq/functionals.hpp"
#include "funcineq/measures.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace funcineq {

enum class Verdict { certified_bounded, violated, inconclusive };

std::string to_string(Verdict v);

//! Outcome of a certification run. `constant` is the largest ratio over the
//! family: a lower bound for the true constant; "certified-bounded" only
//! means no member exceeded it (or the claimed constant).
struct InequalityReport {
    std::string id;
    nlohmann::json measure = nlohmann::json::object();
    nlohmann::json cost = nlohmann::json::object();
    nlohmann::json family = nlohmann::json::object();
    double constant = 0.0;
    nlohmann::json witness = nlohmann::json::object();
    std::vector<double> ratios;     //!< per member; NaN when skipped
    std::vector<int> histogram;     //!< counts of 1 − ratio/constant in tenths
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> notes;
    nlohmann::json extra = nlohmann::json::object();

    nlohmann::json to_json() const;
};

struct CertifyOptions {
    int start_nodes = 2048;
    int max_nodes = 65536;
    double refine_tol = 1e-6;       //!< relative change that stops grid doubling
    double tail_mass = 1e-40;       //!< window used for the grid measure
    std::optional<double> claimed;  //!< constant to test against
    double tolerance = 1e-6;
    int threads = 1;
};

//! sup over the family of Ent(f²) / ∫ H(f′/f) f² dμ.
InequalityReport estimate_lsi_constant(const Measure1D& m, const CostFunction& H,
                                       const TestFamily& family, const CertifyOptions& opt = {});

//! sup over the family of Var(f) / ∫ f′² dμ.
InequalityReport estimate_poincare_constant(const Measure1D& m, const TestFamily& family,
                                            const CertifyOptions& opt = {});

// ---- constant transfer ------------------------------------------------------

double tensorise(double c1, double c2);
double perturb_constant(double c, double osc);
double lsi_to_poincare(double c);

struct LsiFromTransport {
    double a = 0.0;
    double C = 0.0;
};

//! T_{a,α}(C) ⇒ LSI_{a/(2λ),α}(4λ²/(λ−C)) for λ > C.
LsiFromTransport t_to_lsi(double a, double alpha, double C, double lambda);

//! {"rule": "tensorise"|"perturb"|"lsi_to_poincare"|"t_to_lsi", ...}
nlohmann::json transfer_constants(const nlohmann::json& rule);

// ---- Herbst -----------------------------------------------------------------

double herbst_K(double C, double a, double alpha, double lip);

struct HerbstBound {
    double bound = 1.0;        //!< capped at 1
    double raw = 2.0;          //!< before capping
    std::string regime;        //!< "small" or "large"
    double threshold = 0.0;    //!< aC‖F‖/2
    double K = 0.0;
    double chernoff = 1.0;     //!< 2 inf_t Φ(t) e^{−tλ} from the Laplace bound, capped
    bool below_chernoff = false;  //!< two-regime bound smaller than the Chernoff bound

    nlohmann::json to_json() const;
};

//! Two-regime tail bound for a Lipschitz F under LSI_{a,α}(C).
HerbstBound herbst_bound(double C, double a, double alpha, double lip, double lambda);

//! log Φ(t) ≤ C t ∫₀ᵗ H_{a,α}(s‖F‖/2)/s² ds.
double herbst_log_laplace(double C, double a, double alpha, double lip, double t);

//! min(λ², λ^α).
double herbst_shape(double alpha, double lambda);

// ---- Monte Carlo concentration ---------------------------------------------

struct Statistic {
    std::string name;
    std::function<double(const Eigen::Ref<const Eigen::RowVectorXd>&)> eval;
    double gradient_bound = 1.0;  //!< bound on (Σ |∂F/∂xᵢ|²)^{1/2}

    //! Σ xᵢ / √n.
    static Statistic normalized_sum(int n);
    static Statistic coordinate(int i);
    static Statistic constant(double c);
    //! c · Σ xᵢ / √n; its gradient norm is |c|.
    static Statistic scaled_sum(int n, double c);
};

struct TailPoint {
    double lambda = 0.0;
    double empirical = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double bound = 1.0;
    std::int64_t hits = 0;
};

struct ConcentrationOptions {
    std::vector<double> lambdas;   //!< defaults to 0, 0.25, ..., 4
    int shards = 16;
    int threads = 1;
    //! Bound to compare with at each λ; defaults to the fitted envelope.
    std::function<double(double)> reference;
};

//! Empirical P(|F − mean| ≥ λ) from two independent halves of the samples:
//! the first half fits K̃ = min_λ −log(ci_hi/2)/min(λ², λ^α); the second half is
//! checked against 2 exp(−K̃ min(λ², λ^α)) and against `reference` if given.
struct TailCurve {
    std::string statistic;
    double alpha = 2.0;
    std::int64_t samples = 0;
    double mean = 0.0;
    double K_fit = 0.0;
    std::vector<TailPoint> points;
    int violations = 0;  //!< λ where the whole Wilson band lies above the bound

    //! Columns lambda, empirical, <bound_label>, ci_lo, ci_hi.
    std::string to_csv(const std::string& bound_label = "bound") const;
    nlohmann::json to_json() const;
};

//! Wilson 95% interval for k successes out of n.
std::pair<double, double> wilson_interval(std::int64_t k, std::int64_t n);

TailCurve simulate_concentration(const ProductMeasure& pm, const Statistic& F, std::int64_t samples,
                                 std::uint64_t seed, const ConcentrationOptions& opt = {});

// ---- modified LSI -----------------------------------------------------------

struct ModifiedOptions {
    std::vector<double> sweep{10.0, 20.0, 34.0, 50.0};
    double primary_A = 34.0;
    int nodes = 2048;
    double tail_mass = 1e-40;
    Region region = Region::at_least_two;
    int threads = 1;
};

//! Ent(f²) ≤ A Var(f) + B ∫_region |f′/f|^β f² dμ_α with ∫ f² = 1. Reports the
//! empirical B̂(A) over the sweep; for α = 1 reports sup Ent/Var over members
//! with |f′| ≤ 1.
InequalityReport verify_modified_lsi(const Measure1D& m, const TestFamily& family,
                                     const ModifiedOptions& opt = {});

// ---- consistency checks of the transfer rules -------------------------------

//! 2D product functions g(x)h(y) on μ₁⊗μ₂ against max(C₁, C₂).
InequalityReport tensorisation_check(const Measure1D& m1, const Measure1D& m2, double c1,
                                     double c2, const CostFunction& H, const TestFamily& family,
                                     int nodes = 1024, double tolerance = 1e-6);

//! Family ratios on the perturbed measure against C·e^{osc}.
InequalityReport perturbation_check(const Measure1D& m, const RealFn& h, double c,
                                    const CostFunction& H, const TestFamily& family,
                                    const CertifyOptions& opt = {});

//! Var(1+εg)/∫((1+εg)′)² against C/2 + 10⁻², with the ε → 0 limit of the
//! LSI ratio estimated by Richardson extrapolation from ε and ε/2.
InequalityReport poincare_from_lsi_check(const Measure1D& m, double c, const CostFunction& H,
                                         const TestFamily& family, double eps = 1e-3,
                                         int nodes = 4096);

//! sup over the family and p of deficit / ((2−p)^a ∫ f′²), a = 2(α−1)/α.
InequalityReport latala_check(const Measure1D& m, double a, const TestFamily& family,
                              const std::vector<double>& ps = {1.0, 1.5, 1.9, 1.99},
                              int nodes = 4096);

}  // namespace funcineq
