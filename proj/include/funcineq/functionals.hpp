#pragma once

#include "funcineq/costs.hpp"
#include "funcineq/measures.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <string>

namespace funcineq {

//! A probability measure on finitely many nodes. Built either from a
//! Measure1D (trapezoid weights times density, renormalised) or directly
//! from atoms.
struct GridMeasure {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    //! Uniform grid of about n nodes over m.window(tail_mass); the origin is a
    //! node whenever it lies inside the window.
    static GridMeasure from_measure(const Measure1D& m, int n, double tail_mass = 1e-40);
    static GridMeasure on_nodes(const Measure1D& m, const Eigen::VectorXd& nodes);
    static GridMeasure discrete(Eigen::VectorXd nodes, Eigen::VectorXd weights);

    Eigen::Index size() const { return nodes.size(); }
    double integrate(const Eigen::VectorXd& values) const { return weights.dot(values); }
};

//! Values of a test function on strictly increasing nodes, with a
//! second-order finite-difference derivative (one-sided at the ends).
class GridFunction {
public:
    GridFunction(Eigen::VectorXd nodes, Eigen::VectorXd values);

    static GridFunction sample(const RealFn& f, const Eigen::VectorXd& nodes);
    static GridFunction from_csv(const std::string& text);

    const Eigen::VectorXd& nodes() const { return nodes_; }
    const Eigen::VectorXd& values() const { return values_; }
    const Eigen::VectorXd& derivative() const { return derivative_; }
    Eigen::Index size() const { return nodes_.size(); }

    GridFunction scaled(double c) const;
    std::string to_csv() const;

private:
    Eigen::VectorXd nodes_;
    Eigen::VectorXd values_;
    Eigen::VectorXd derivative_;
};

//! Ent(f²) = ∫ f² log f² − ∫ f² log ∫ f², evaluated as Σ w M u(f²/M) with
//! u(r) = r log r − r + 1 ≥ 0, which keeps it nonnegative.
double entropy(const GridMeasure& g, const Eigen::VectorXd& f2);
double entropy(const Measure1D& m, const GridFunction& f2);

double variance(const GridMeasure& g, const Eigen::VectorXd& f);
double variance(const Measure1D& m, const GridFunction& f);

//! ∫ f′² dμ.
double dirichlet(const GridMeasure& g, const GridFunction& f);
double dirichlet(const Measure1D& m, const GridFunction& f);

enum class Region { all, at_least_two, omega };

std::string to_string(Region region);

//! Indicator of the region. `omega` is
//! {f₊ ≥ 2 (∫f₊²)^{1/2}} ∪ {f₋ ≥ 2 (∫f₋²)^{1/2}}.
Eigen::Array<bool, Eigen::Dynamic, 1> region_mask(const GridMeasure& g, const Eigen::VectorXd& f,
                                                  Region region);

//! ∫_region H(f′/f) f² dμ. A node with f = 0 contributes +∞ when f′ ≠ 0 and
//! 0 when f′ = 0.
double energy(const GridMeasure& g, const GridFunction& f, const CostFunction& H,
              Region region = Region::all);
double energy(const Measure1D& m, const GridFunction& f, const CostFunction& H,
              Region region = Region::all);

//! ∫ f² dμ − (∫ f^p dμ)^{2/p} for p ∈ [1, 2).
double latala_deficit(const GridMeasure& g, const Eigen::VectorXd& f, double p);
double latala_deficit(const Measure1D& m, const GridFunction& f, double p);

struct LemmaSlacks {
    double quintic = kInf;         //!< x² ln x² ≤ 5(x−1)² + x² − 1 + (x−2)₊² ln (x−2)₊²
    double mean_square = kInf;     //!< ∫(f−1)² ≤ 2 Var(f)
    double upper_mass = kInf;      //!< ∫_{f≥2} f² ≤ 8 Var(f)
    double upper_entropy = kInf;   //!< ∫_{f≥2} f² ln f² ≤ ln4/(ln4−1) Ent(f²)
    double positivity = kInf;      //!< x ln x + 1 − x ≥ 0
    int grid_points = 0;
    int trials = 0;
    int rescaled = 0;              //!< instances renormalised to ∫ f² = 1

    double worst() const;
    nlohmann::json to_json() const;
};

//! Slacks of the three integral items for one discrete instance; f is
//! rescaled to ∫ f² dμ = 1 first (counted in `rescaled`).
LemmaSlacks lemma_slacks(const GridMeasure& g, Eigen::VectorXd f);

//! Scalar items on a uniform grid of [0, 100] and the integral items on
//! random discrete instances with `atoms` atoms.
LemmaSlacks verify_pointwise_lemmas(int grid_points = 100000, int trials = 10000, int atoms = 8,
                                    std::uint64_t seed = 1);

}  // namespace funcineq
