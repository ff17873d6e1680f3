#ifndef QMARKOV_CLI_HPP
#define QMARKOV_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace qmarkov::cli {

// Machine-parseable run record; the verdict string always matches the exit
// code: pass <-> 0, fail <-> 2, error <-> 1.
struct Report {
  std::string command;
  std::string verdict = "error";
  int exit_code = 1;
  std::uint64_t seed = 0;
  nlohmann::json tolerances = nlohmann::json::object();
  nlohmann::json diagnostics = nlohmann::json::object();
  std::string error_kind;
  std::string error_message;
};

nlohmann::json to_json(const Report& report);

// Runs one subcommand (check, decompose, double, thm2, gen, classical,
// selftest). `args` excludes the program name. Prints a human-readable
// summary to `out`, writes the JSON report to --report when given, and
// returns the exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                Report* report_out = nullptr);

}  // namespace qmarkov::cli

#endif
