#pragma once

#include "funcineq/certify.hpp"
#include "funcineq/costs.hpp"
#include "funcineq/functionals.hpp"
#include "funcineq/measures.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace funcineq {

//! Monotone rearrangement of F dμ onto a target measure:
//! T = quantile_target ∘ cdf_source.
class Coupling1D {
public:
    //! F is a density with respect to `base`; it is renormalized when its
    //! integral is off by more than 1e-9 (see warnings()).
    Coupling1D(const Measure1D& base, RealFn F, const Measure1D& target, int panels = 256);

    double map(double x) const;
    //! Source mass of (−∞, x].
    double source_lower(double x) const;
    //! Source mass of [x, ∞).
    double source_upper(double x) const;
    double normalization() const { return z_; }
    Interval window() const { return window_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    //! ∫ g(x) F(x) dμ(x) / Z over the source window.
    double expect(const RealFn& g) const;
    //! Largest |target mass below T(x) − source mass below x| over `points` probes.
    double pushforward_error(int points = 64) const;

private:
    Measure1D base_;
    RealFn F_;
    Measure1D target_;
    Interval window_;
    std::vector<double> nodes_;
    std::vector<double> cum_;
    std::vector<double> rcum_;
    double z_ = 1.0;
    std::vector<std::string> warnings_;

    double weight(double x) const;
};

//! ∫ L(x − T(x)) F dμ for the monotone coupling of F dμ onto μ.
double ot_cost(const CostFunction& L, const RealFn& F, const Measure1D& m,
               std::vector<std::string>* warnings = nullptr);

//! Monotone (north-west corner) coupling cost between two discrete measures.
double discrete_monotone_cost(const Eigen::VectorXd& x, const Eigen::VectorXd& wx,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& wy,
                              const CostFunction& L);

//! Ent_μ(F) = ∫ F log F dμ for F normalized to ∫ F dμ = 1.
double density_entropy(const Measure1D& m, const RealFn& F);

//! Q_t f(x) = inf_y { f(y) + t L((x − y)/t) } at the nodes of f; y ranges over
//! the grid span with golden refinement on the linear interpolant.
GridFunction hopf_lax(const GridFunction& f, const CostFunction& L, double t);

//! (4/C) ∫ f dμ − log ∫ e^{(4/C) Q₁f} dμ with Q from L_{aC/2,α}.
double dual_check(const GridMeasure& g, double C, double a, double alpha, const GridFunction& f);

struct DensityMember {
    std::string name;
    nlohmann::json params = nlohmann::json::object();
    RealFn F;
};

//! Densities of μ shifted by c: e^{φ(x) − φ(x − c)}.
std::vector<DensityMember> translation_densities(const Measure1D& m, const std::vector<double>& shifts);
//! e^{λx} / ∫ e^{λx} dμ.
std::vector<DensityMember> tilt_densities(const Measure1D& m, const std::vector<double>& lambdas);

//! cost − (C/4) Ent for each density with cost L_{aC/2,α}; certified-bounded
//! when the largest value is at most `tolerance`.
InequalityReport verify_talagrand(const Measure1D& m, double C, double a, double alpha,
                                  const std::vector<DensityMember>& densities,
                                  double tolerance = 1e-6);

//! min(1, 2 e^{−L(r)/C}).
double marton_bound(double C, const CostFunction& L, double r);

//! μ((A_r)^c) for A = (−∞, median] against marton_bound at each r.
InequalityReport marton_check(const Measure1D& m, double C, const CostFunction& L,
                              const std::vector<double>& radii);

//! Largest Var/Dirichlet ratio over the family against C.
InequalityReport t_implies_poincare_check(const Measure1D& m, double C, const TestFamily& family,
                                          double tolerance = 1e-6);

}  // namespace funcineq
