#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace funcineq {

inline constexpr int kSchemaVersion = 1;

std::string version();

//! Wraps a payload with schema_version, library version, the run config and
//! the tolerance set used.
nlohmann::json envelope(const nlohmann::json& payload, const nlohmann::json& config,
                        const nlohmann::json& tolerances);

//! One RFC-4180 field: quoted when it holds a comma, quote, CR or LF.
std::string csv_field(const std::string& s);
//! Fields joined by commas and terminated by CRLF.
std::string csv_row(const std::vector<std::string>& fields);

//! Shortest decimal that round-trips, "inf"/"-inf"/"nan" otherwise.
std::string format_number(double x);

}  // namespace funcineq
