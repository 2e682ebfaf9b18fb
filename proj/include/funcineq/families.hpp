#pragma once

#include "funcineq/functionals.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace funcineq {

struct FamilyMember {
    std::string family;
    nlohmann::json params;
    RealFn f;
    std::optional<double> lipschitz;

    GridFunction on(const Eigen::VectorXd& nodes) const { return GridFunction::sample(f, nodes); }
};

//! Explicit list of test functions standing in for "all smooth f".
struct TestFamily {
    std::string name;
    nlohmann::json spec;
    std::vector<FamilyMember> members;

    //! e^{λx/2}, λ evenly spaced on [lo, hi].
    static TestFamily exponentials(double lo = 0.1, double hi = 3.0, int count = 30);
    //! 1 + h·exp(−(x−c)²/(2w²)).
    static TestFamily bumps(double spread = 3.0, int centers = 13);
    //! 1 + s·(1 + tanh((x−c)/w))/2, a smoothed ramp from 1 to 1+s.
    static TestFamily ramps(double spread = 2.0, int centers = 9);
    //! s + min(|x−c|, M); Lipschitz constant 1.
    static TestFamily lipschitz_caps(double floor = 0.0);
    //! exp(Σ_k (a_k cos kωx + b_k sin kωx)/k²) with seeded coefficients.
    static TestFamily fourier(int count = 60, std::uint64_t seed = 1);
    //! Bounded functions with |f′| ≤ 1: caps, clamped ramps and sin(x+φ).
    static TestFamily lipschitz();
    //! Exponentials (both signs), bumps, ramps and Fourier sums; 200+ members.
    static TestFamily standard(std::uint64_t seed = 1);

    static TestFamily combine(const std::string& name, const std::vector<TestFamily>& parts);
    static TestFamily from_json(const nlohmann::json& j);

    //! Every member multiplied by c.
    TestFamily scaled(double c) const;
    std::size_t size() const { return members.size(); }
    nlohmann::json to_json() const;
};

}  // namespace funcineq
