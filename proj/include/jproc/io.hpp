#pragma once

// Problem and report documents. Complex entries are [re, im] pairs; a bare
// number is read as a real entry.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "jproc/problem.hpp"

namespace jproc {

/// Malformed or inconsistent input document. The message starts with the
/// offending field path.
class ParseError : public Error {
public:
  using Error::Error;
};

nlohmann::json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const nlohmann::json &value, const std::string &path);

ProblemInstance<double> parse_instance(const nlohmann::json &doc);
ProblemInstance<double> parse_instance(std::istream &in);
ProblemInstance<double> parse_instance_file(const std::filesystem::path &path);

nlohmann::json to_json(const ProblemInstance<double> &inst);

enum ExitCode : int {
  kExitSolution = 0,
  kExitInputError = 1,
  kExitInfeasible = 2,
  kExitNumericalFailure = 3,
};

struct RunResult {
  int exit_code = kExitSolution;
  nlohmann::json report;
};

/// Solves the instance and builds the report document. Never throws for
/// library errors; they become an `error` report with the matching exit code.
RunResult run(const ProblemInstance<double> &inst);

/// Full command line: argument parsing, input, solve, report output.
int cli_main(int argc, const char *const *argv, std::istream &in, std::ostream &out, std::ostream &err);

} // namespace jproc
