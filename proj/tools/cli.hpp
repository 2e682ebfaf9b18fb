#pragma once

#include <iosfwd>

namespace funcineq::cli {

enum ExitCode { ok = 0, usage = 1, violation = 2 };

//! Parses argv, runs one subcommand and writes its report. Reports go to
//! --out when given, to `out` otherwise; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace funcineq::cli
