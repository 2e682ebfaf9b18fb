#include "funcineq/families.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace funcineq {

TestFamily TestFamily::exponentials(double lo, double hi, int count)
{
    if (count < 1) {
        throw Error("family needs at least one member");
    }
    TestFamily t;
    t.name = "exponentials";
    t.spec = {{"name", "exponentials"}, {"lambda", {lo, hi}}, {"count", count}};
    for (int i = 0; i < count; ++i) {
        const double lambda = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
        t.members.push_back({"exponentials",
                             {{"lambda", lambda}},
                             [lambda](double x) { return std::exp(0.5 * lambda * x); },
                             std::nullopt});
    }
    return t;
}

TestFamily TestFamily::bumps(double spread, int centers)
{
    TestFamily t;
    t.name = "bumps";
    t.spec = {{"name", "bumps"}, {"spread", spread}, {"centers", centers}};
    for (int i = 0; i < centers; ++i) {
        const double c = centers == 1 ? 0.0 : -spread + 2.0 * spread * i / (centers - 1);
        for (double h : {0.5, 2.0, 8.0}) {
            for (double w : {0.3, 1.0}) {
                t.members.push_back({"bumps",
                                     {{"center", c}, {"height", h}, {"width", w}},
                                     [c, h, w](double x) {
                                         const double z = (x - c) / w;
                                         return 1.0 + h * std::exp(-0.5 * z * z);
                                     },
                                     std::nullopt});
            }
        }
    }
    return t;
}

TestFamily TestFamily::ramps(double spread, int centers)
{
    TestFamily t;
    t.name = "ramps";
    t.spec = {{"name", "ramps"}, {"spread", spread}, {"centers", centers}};
    const double shapes[3][2] = {{2.0, 0.5}, {2.0, 2.0}, {8.0, 1.0}};
    for (int i = 0; i < centers; ++i) {
        const double c = centers == 1 ? 0.0 : -spread + 2.0 * spread * i / (centers - 1);
        for (const auto& sw : shapes) {
            const double s = sw[0];
            const double w = sw[1];
            t.members.push_back({"ramps",
                                 {{"center", c}, {"rise", s}, {"width", w}},
                                 [c, s, w](double x) {
                                     return 1.0 + 0.5 * s * (1.0 + std::tanh((x - c) / w));
                                 },
                                 0.5 * s / w});
        }
    }
    return t;
}

TestFamily TestFamily::lipschitz_caps(double floor)
{
    TestFamily t;
    t.name = "lipschitz_caps";
    t.spec = {{"name", "lipschitz_caps"}, {"floor", floor}};
    for (double c : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        for (double cap : {0.5, 1.0, 2.0, 4.0}) {
            t.members.push_back({"lipschitz_caps",
                                 {{"center", c}, {"cap", cap}, {"floor", floor}},
                                 [c, cap, floor](double x) {
                                     return floor + std::min(std::abs(x - c), cap);
                                 },
                                 1.0});
        }
    }
    return t;
}

TestFamily TestFamily::fourier(int count, std::uint64_t seed)
{
    TestFamily t;
    t.name = "fourier";
    t.spec = {{"name", "fourier"}, {"count", count}, {"seed", seed}};
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    constexpr int K = 5;
    for (int i = 0; i < count; ++i) {
        const double omega = 0.3 + 1.2 * to_unit(gen());
        std::vector<double> a(K);
        std::vector<double> b(K);
        for (int k = 0; k < K; ++k) {
            a[k] = normal(gen) / ((k + 1.0) * (k + 1.0));
            b[k] = normal(gen) / ((k + 1.0) * (k + 1.0));
        }
        t.members.push_back({"fourier",
                             {{"index", i}, {"omega", omega}},
                             [omega, a, b](double x) {
                                 double s = 0.0;
                                 for (int k = 0; k < K; ++k) {
                                     s += a[k] * std::cos((k + 1) * omega * x) +
                                          b[k] * std::sin((k + 1) * omega * x);
                                 }
                                 return std::exp(s);
                             },
                             std::nullopt});
    }
    return t;
}

TestFamily TestFamily::lipschitz()
{
    TestFamily t = lipschitz_caps(0.0);
    t.name = "lipschitz";
    t.spec = {{"name", "lipschitz"}};
    for (double c : {-2.0, 0.0, 2.0}) {
        for (double m : {1.0, 3.0}) {
            t.members.push_back({"clamped_ramps",
                                 {{"center", c}, {"half_width", m}},
                                 [c, m](double x) { return m + std::clamp(x - c, -m, m); },
                                 1.0});
        }
    }
    for (double phase : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        t.members.push_back({"sines",
                             {{"phase", phase}},
                             [phase](double x) { return 1.0 + std::sin(x + phase); },
                             1.0});
    }
    return t;
}

TestFamily TestFamily::standard(std::uint64_t seed)
{
    auto t = combine("standard", {exponentials(-3.0, -0.1, 20), exponentials(0.1, 3.0, 20), bumps(),
                                  ramps(), fourier(60, seed)});
    t.spec = {{"name", "standard"}, {"seed", seed}};
    return t;
}

TestFamily TestFamily::combine(const std::string& name, const std::vector<TestFamily>& parts)
{
    TestFamily t;
    t.name = name;
    t.spec = {{"name", name}, {"parts", nlohmann::json::array()}};
    for (const auto& p : parts) {
        t.spec["parts"].push_back(p.spec);
        t.members.insert(t.members.end(), p.members.begin(), p.members.end());
    }
    return t;
}

TestFamily TestFamily::scaled(double c) const
{
    TestFamily t = *this;
    t.spec["scale"] = c;
    for (auto& m : t.members) {
        auto f = m.f;
        m.f = [f, c](double x) { return c * f(x); };
        if (m.lipschitz) {
            m.lipschitz = *m.lipschitz * std::abs(c);
        }
    }
    return t;
}

nlohmann::json TestFamily::to_json() const
{
    auto j = spec;
    j["members"] = members.size();
    return j;
}

namespace {

void allow_keys(const nlohmann::json& j, std::initializer_list<const char*> keys)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; })) {
            throw Error("unknown key: " + it.key());
        }
    }
}

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(std::string("bad value for key: ") + key);
    }
}

}  // namespace

TestFamily TestFamily::from_json(const nlohmann::json& j)
{
    if (j.is_string()) {
        return from_json(nlohmann::json{{"name", j.get<std::string>()}});
    }
    if (!j.is_object() || !j.contains("name") || !j.at("name").is_string()) {
        throw Error("family spec needs a string key: name");
    }
    const auto name = j.at("name").get<std::string>();
    if (name == "exponentials") {
        allow_keys(j, {"name", "lambda", "count"});
        auto range = get_or<std::vector<double>>(j, "lambda", {0.1, 3.0});
        if (range.size() != 2) {
            throw Error("bad value for key: lambda");
        }
        return exponentials(range[0], range[1], get_or<int>(j, "count", 30));
    }
    if (name == "bumps") {
        allow_keys(j, {"name", "spread", "centers"});
        return bumps(get_or<double>(j, "spread", 3.0), get_or<int>(j, "centers", 13));
    }
    if (name == "ramps") {
        allow_keys(j, {"name", "spread", "centers"});
        return ramps(get_or<double>(j, "spread", 2.0), get_or<int>(j, "centers", 9));
    }
    if (name == "lipschitz_caps") {
        allow_keys(j, {"name", "floor"});
        return lipschitz_caps(get_or<double>(j, "floor", 0.0));
    }
    if (name == "fourier") {
        allow_keys(j, {"name", "count", "seed"});
        return fourier(get_or<int>(j, "count", 60), get_or<std::uint64_t>(j, "seed", 1));
    }
    if (name == "lipschitz") {
        allow_keys(j, {"name"});
        return lipschitz();
    }
    if (name == "standard") {
        allow_keys(j, {"name", "seed"});
        return standard(get_or<std::uint64_t>(j, "seed", 1));
    }
    throw Error("unknown value for key: name");
}

}  // namespace funcineq
