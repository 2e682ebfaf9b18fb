#pragma once

#include "funcineq/measures.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <string>
#include <vector>

namespace funcineq {

//! Supremum of a criterion over a probe window. `finite` is false when the
//! running sup still grows at the right end with log-log slope above the
//! divergence threshold; `value` is then +∞.
struct SupResult {
    double x_star = 0.0;
    double value = 0.0;
    bool finite = true;
    double end_slope = 0.0;  //!< d log(product) / d log x at the window end

    std::string classification() const { return finite ? "finite" : "divergent"; }
    nlohmann::json to_json() const;
};

struct ProbeOptions {
    int probes = 400;
    double divergence_slope = 0.2;
};

//! μ, ν on ℝ⁺ through μ([x,∞)) and the Lebesgue density of ν.
struct HardyPair {
    RealFn mu_tail;
    RealFn nu_density;
    std::vector<double> breakpoints;  //!< kinks or jumps of either input
    Interval window{1e-3, 50.0};
};

//! B = sup_{x>0} μ([x,∞)) ∫₀ˣ 1/n(t) dt over a log-spaced probe of the window
//! (plus breakpoints) with golden refinement. Best constant A obeys B ≤ A ≤ 4B.
SupResult hardy_constant(const HardyPair& pair, const ProbeOptions& options = {});

//! μ = Σ m_k δ_{t_k}, ν with density n_k on (t_{k−1}, t_k], t₀ = 0.
struct DiscreteHardyPair {
    Eigen::VectorXd points;
    Eigen::VectorXd masses;
    Eigen::VectorXd densities;

    HardyPair to_pair() const;
    //! max_k (Σ_{i≥k} m_i)(Σ_{i≤k} Δ_i/n_i), the exact criterion for this pair.
    double criterion() const;
};

struct BartheRoberto {
    SupResult b_minus;
    SupResult b_plus;
    SupResult B_minus;
    SupResult B_plus;

    double lower() const;
    double upper() const;
    bool finite() const;
    nlohmann::json to_json() const;
};

//! The four suprema bounding the weighted constant C_h in
//! Ent(g²) ≤ C_h ∫ g′² h dμ: max(b₋, b₊) ≤ C_h ≤ max(B₋, B₊).
//! Tails and the inner integral ∫ Z e^{φ}/h are handled in log space, so
//! the probe runs out to where μ's tail is 1e-200.
BartheRoberto barthe_roberto_constants(const Measure1D& m, const RealFn& h,
                                       const ProbeOptions& options = {});

//! Throws "weighted LSI constant infinite" unless all four are finite.
const BartheRoberto& require_finite(const BartheRoberto& c);

//! 1 on |x| ≤ 1, |x|^{2−α} beyond.
RealFn saturating_weight(double alpha);
//! |x|^{2−α}/log^β|x| for |x| ≥ 2, its value at 2 inside.
RealFn saturating_weight(double alpha, double beta);

}  // namespace funcineq
