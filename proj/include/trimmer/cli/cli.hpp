#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace trimmer::cli {

inline constexpr std::string_view kVersion = "1.0.0";

// "trimmer <semver> (VSF format <v>, model format <v>)"
std::string version_string();

// Runs one command line (args[0] is the program name). Returns 0 on success,
// 1 on a usage error and 2 on a data or numeric failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trimmer::cli
