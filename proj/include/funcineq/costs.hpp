#pragma once

#include "funcineq/quadrature.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace funcineq {

enum class CostKind { L, H, HGeneral, Scaled, Conjugate, Custom };

//! Even piecewise power function: q·x² on |x| ≤ k, then A·|x|^p + B
//! (or +∞ when `infinite_beyond`). Every L_{a,α} and H_{a,α}, and their
//! rescalings, has this shape.
struct PowerPieces {
    double q = 0.5;
    double k = kInf;
    double A = 0.0;
    double p = 2.0;
    double B = 0.0;
    bool infinite_beyond = false;

    double value(double x) const;
    double slope(double x) const;
    PowerPieces rescaled(double t) const;
    //! True when the outer branch meets the quadratic with matching value and slope.
    bool tangent(double tol = 1e-9) const;
    //! Closed-form conjugate; only valid for tangent pieces.
    PowerPieces conjugate() const;
};

//! Extended-real convex even cost. +∞ is an ordinary value.
struct CostFunction {
    RealFn evaluate;
    RealFn derivative;
    CostKind kind = CostKind::Custom;
    double a = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double beta = std::numeric_limits<double>::quiet_NaN();
    bool convex = true;
    Interval finite_domain;
    std::optional<PowerPieces> pieces;
    nlohmann::json details = nlohmann::json::object();

    double operator()(double x) const { return evaluate(x); }
    nlohmann::json to_json() const;
};

//! Conjugate exponent α/(α−1); +∞ at α = 1.
double conjugate_exponent(double alpha);

CostFunction l_cost(double a, double alpha);
CostFunction h_cost(double a, double alpha);

enum class HGeneralFamily { alpha_beta, alpha1_beta, alpha2_beta };

//! Tail formula for x ≥ 2, c·x² on [0, 2] with c = T(2)/4.
//! `details` records c, T'(2) − 4c and the convexity scan.
CostFunction h_general(HGeneralFamily family, double alpha, double beta);

//! x ↦ c(t x).
CostFunction scale(const CostFunction& c, double t);

//! x², the cost whose LSI constant is the classical one in Ent ≤ C ∫ f′².
CostFunction dirichlet_cost();

//! |x|^p, the cost of the restricted energy ∫_{f≥2} |f′/f|^β f².
CostFunction power_cost(double p);

//! Midpoint convexity on a grid of [-radius, radius], restricted to the finite domain.
bool midpoint_convex(const RealFn& f, double radius, int points, double tol = 1e-10);

enum class LegendreMethod { automatic, numeric };

//! c*(y) = sup_x {x y − c(x)}. Known piecewise shapes are maximised branch by
//! branch; everything else goes through a grid scan on [0, R] and golden
//! refinement, growing R while the maximiser sits on the boundary.
CostFunction legendre(const CostFunction& c, double search_radius = 64.0, int grid_size = 256,
                      LegendreMethod method = LegendreMethod::automatic);

CostFunction cost_from_json(const nlohmann::json& j);

}  // namespace funcineq
