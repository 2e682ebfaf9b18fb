#include "funcineq/report.hpp"
#include "funcineq/certify.hpp"

#include <charconv>
#include <cmath>

namespace funcineq {

std::string version()
{
#ifdef FUNCINEQ_VERSION
    return FUNCINEQ_VERSION;
#else
    return "0.0.0";
#endif
}

namespace {

nlohmann::json number_or_text(double x)
{
    if (std::isfinite(x)) {
        return x;
    }
    return format_number(x);
}

}  // namespace

nlohmann::json InequalityReport::to_json() const
{
    nlohmann::json r = nlohmann::json::array();
    for (double x : ratios) {
        r.push_back(std::isnan(x) ? nlohmann::json(nullptr) : number_or_text(x));
    }
    return {{"id", id},
            {"measure", measure},
            {"cost", cost},
            {"family", family},
            {"constant", number_or_text(constant)},
            {"witness", witness},
            {"ratios", r},
            {"histogram", histogram},
            {"verdict", to_string(verdict)},
            {"notes", notes},
            {"extra", extra}};
}

nlohmann::json envelope(const nlohmann::json& payload, const nlohmann::json& config,
                        const nlohmann::json& tolerances)
{
    return {{"schema_version", kSchemaVersion},
            {"version", version()},
            {"config", config},
            {"tolerances", tolerances},
            {"result", payload}};
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

std::string csv_row(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += csv_field(fields[i]);
    }
    return out + "\r\n";
}

std::string format_number(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace funcineq
