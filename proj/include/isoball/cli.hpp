#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace isoball::cli {

enum ExitCode : int {
  kOk = 0,
  kNumericFailure = 1,
  kArgumentError = 2,
  kConvergenceWarning = 3,
};

/// Full command line entry point (argv[0] is the program name).
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs one command from its validated config and writes
/// <out_dir>/<command>.{csv,json} plus <command>.manifest.json.
/// Throws std::invalid_argument for a bad config.
int execute(const std::string& command, const nlohmann::ordered_json& config, const std::filesystem::path& out_dir,
            std::ostream& out, std::ostream& err);

/// Parses "log:a:b:k", "lin:a:b:k" or a comma list into eps values.
std::vector<double> parse_eps_grid(const std::string& spec);

/// "R/200" or a bare divisor "200"; returns the divisor.
double parse_resolution(const std::string& spec);

} // namespace isoball::cli
