#pragma once

#include <iosfwd>
#include <string>

#include "hardy/common.hpp"
#include "hardy/expfamily.hpp"

namespace hardy::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

// Runs one command; the report goes to `out` unless --out names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "1", "-2.5e-3", "3i", "i", "1+2i", "1 - 0.5i"
cplx parse_complex(const std::string& s);

// JSON array of [a, k, lambda] triples; a and lambda are numbers or [re, im] pairs.
expfam::ExpPoly parse_exppoly_json(const std::string& s);

}  // namespace hardy::cli
