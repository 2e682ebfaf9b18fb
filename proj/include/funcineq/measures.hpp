#pragma once

#include "funcineq/quadrature.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace funcineq {

enum class MeasureFamily { mu_alpha, mu_alpha_beta, tau_alpha, gamma_alpha_b, gaussian, custom };

//! C² even core used for μ_{α,β} on [-1, 1].
enum class CoreInterpolant { quartic, sextic };

std::string to_string(MeasureFamily family);

//! Parameters of one of the built-in measure families. Custom potentials are
//! only reachable through Measure1D::custom, never through JSON.
struct MeasureSpec {
    MeasureFamily family = MeasureFamily::mu_alpha;
    double alpha = 2.0;
    double beta = 0.0;
    double b = 0.0;
    double sigma = 1.0;
    CoreInterpolant core = CoreInterpolant::quartic;

    static MeasureSpec mu_alpha(double alpha);
    static MeasureSpec mu_alpha_beta(double alpha, double beta,
                                     CoreInterpolant core = CoreInterpolant::quartic);
    static MeasureSpec tau_alpha(double alpha);
    static MeasureSpec gamma_alpha_b(double alpha, double b);
    static MeasureSpec gaussian(double sigma);

    nlohmann::json to_json() const;
    //! Throws Error naming the offending key on unknown keys or bad values.
    static MeasureSpec from_json(const nlohmann::json& j);
};

struct MeasureOptions {
    double tail_mass = 1e-12;     //!< mass allowed beyond each end of the window
    int table_nodes = 4096;       //!< CDF table / sampling spline resolution
    double max_radius = 1e6;      //!< probe limit before declaring divergence
    double quad_rel_tol = 1e-13;
};

//! Probability measure e^{-φ(x)} dx / Z on an interval. Immutable after
//! construction; copies share the precomputed tables.
class Measure1D {
public:
    static Measure1D build(const MeasureSpec& spec, const MeasureOptions& options = {});
    static Measure1D custom(RealFn potential, Interval support = {},
                            const MeasureOptions& options = {});

    double potential(double x) const;
    //! e^{-φ(x)}/Z inside the support, 0 outside.
    double density(double x) const;
    double normalization() const;
    double log_normalization() const;
    Interval support() const;
    //! Truncated support; each tail beyond it carries less than tail_mass.
    Interval window() const;
    //! Smallest symmetric-in-mass window with tails below `tail_mass` each.
    Interval window(double tail_mass) const;
    const std::optional<MeasureSpec>& spec() const;
    std::optional<double> oscillation() const;
    const MeasureOptions& options() const;

    double cdf(double x) const;
    //! μ([x, ∞)), accurate relative to its own size deep in the tail.
    double upper_tail(double x) const;
    //! μ((-∞, x]).
    double lower_tail(double x) const;
    double log_upper_tail(double x) const;
    double log_lower_tail(double x) const;
    double quantile(double p) const;

    //! ∫ g dμ over the window by composite Gauss–Legendre on the table panels.
    double expect(const RealFn& g) const;
    //! ∫ g dμ over the window(tail_mass) with `panels` equal panels.
    double expect(const RealFn& g, double tail_mass, int panels) const;

    //! Inverse-CDF sampling through the cached Hermite spline of the CDF.
    Eigen::VectorXd sample(Eigen::Index count, std::uint64_t seed) const;
    double sample_one(double u) const;

    nlohmann::json describe() const;

    struct State;

private:
    explicit Measure1D(std::shared_ptr<const State> state);
    std::shared_ptr<const State> state_;

    friend Measure1D perturb(const Measure1D& m, const RealFn& h, double probe_limit);
};

//! μ^{⊗n}.
struct ProductMeasure {
    Measure1D factor;
    int dimension = 1;

    //! count × dimension matrix of i.i.d. coordinates.
    Eigen::MatrixXd sample(Eigen::Index count, std::uint64_t seed) const;
};

//! Largest |empirical CDF − F| over sorted samples.
double ks_statistic(Eigen::VectorXd samples, const Measure1D& m);

//! μ_α([x,∞)) · Z_α · α · x^{α−1} · e^{x^α}; tends to 1 as x → ∞.
double tail_asymptotic_ratio(const Measure1D& m, double x);

//! dμ̃ = e^h dμ / Z̃. Records osc(h) over the scan grid; throws
//! "perturbation not bounded" when h keeps growing past the window.
Measure1D perturb(const Measure1D& m, const RealFn& h, double probe_limit = 1e6);

//! ½ ∫ |p − q| dx over the union of both windows.
double total_variation(const Measure1D& p, const Measure1D& q, int panels = 4096);

}  // namespace funcineq
