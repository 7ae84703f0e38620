#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "jproc/io.hpp"
#include "jproc/oracle.hpp"

namespace jproc {

using nlohmann::json;

namespace {

json conditions_to_json(const FeasibilityReport<double> &rep) {
  json out = json::object();
  for (Condition c : kAllConditions) {
    const auto &e = rep[c];
    out[std::string(condition_name(c))] = {
        {"step", condition_step(c)},
        {"evaluated", e.evaluated},
        {"residual", e.residual},
        {"threshold", e.threshold},
        {"passed", e.passed()},
    };
  }
  return out;
}

json audit_to_json(const ProblemInstance<double> &inst, const ComplexMatrix &a_hat) {
  const auto count = static_cast<std::size_t>(*inst.audit_samples);
  try {
    const auto batch = sample_feasible(inst, count, inst.seed.value_or(0));
    const auto rep = optimality_audit(inst, a_hat, batch);
    json out = {
        {"requested", count},
        {"sample_count", rep.sample_count},
        {"attempts", batch.attempts},
        {"margin", rep.margin},
        {"near_optimal", rep.near_optimal},
        {"optimal", rep.margin <= 1e-8},
    };
    out["min_near_distance"] = rep.min_near_distance ? json(*rep.min_near_distance) : json(nullptr);
    out["max_near_distance"] = rep.max_near_distance ? json(*rep.max_near_distance) : json(nullptr);
    return out;
  } catch (const Error &e) {
    return {{"requested", count}, {"sample_count", 0}, {"error", e.what()}};
  }
}

json error_report(const std::string &status, const std::string &message) {
  return {{"status", status}, {"error", message}};
}

} // namespace

RunResult run(const ProblemInstance<double> &inst) {
  RunResult result;
  try {
    inst.validate();
    const auto js = JStructure<double>::build(inst.j, inst.tol);
    const auto outcome = solve(js, inst);
    json &rep = result.report;
    rep["mode"] = to_string(inst.mode);
    rep["spectrum_symmetric"] = check_spectrum_symmetry(inst.d, inst.mode, inst.tol);
    const auto &feas = report_of(outcome);
    rep["hermitian_flavor"] = feas.hermitian_flavor;
    rep["conditions"] = conditions_to_json(feas);
    if (const auto *sol = std::get_if<Solution<double>>(&outcome)) {
      rep["status"] = "solution";
      rep["A_hat"] = matrix_to_json(sol->a_hat);
      if (inst.mode != StructureMode::Hamiltonian)
        rep["B_hat"] = matrix_to_json(sol->b_hat);
      rep["residual_fro"] = sol->residual;
      rep["eigen_residual"] = sol->eigen_residual;
      rep["failed_step"] = nullptr;
      rep["is_member"] = is_member(sol->a_hat, js, inst.mode, inst.tol);
      if (inst.audit_samples && *inst.audit_samples > 0)
        rep["audit"] = audit_to_json(inst, sol->a_hat);
      result.exit_code = kExitSolution;
    } else {
      const auto &bad = std::get<Infeasible<double>>(outcome);
      rep["status"] = "infeasible";
      rep["A_hat"] = nullptr;
      rep["residual_fro"] = nullptr;
      rep["eigen_residual"] = nullptr;
      rep["failed_step"] = std::to_string(bad.failed_step);
      result.exit_code = kExitInfeasible;
    }
  } catch (const NumericalError &e) {
    result.report = error_report("numerical_failure", e.what());
    result.exit_code = kExitNumericalFailure;
  } catch (const Error &e) {
    result.report = error_report("input_error", e.what());
    result.exit_code = kExitInputError;
  }
  return result;
}

int cli_main(int argc, const char *const *argv, std::istream &in, std::ostream &out, std::ostream &err) {
  CLI::App app{"Nearest normal (skew) J-Hamiltonian or J-symplectic solution of AX = XD"};
  std::string input = "-";
  std::string output = "-";
  std::string mode;
  std::optional<double> tol_rank, tol_structure;
  std::optional<std::uint64_t> audit, seed;
  bool allow_rank_deficient = false;
  app.add_option("--input,-i", input, "problem document (JSON); '-' reads stdin");
  app.add_option("--output,-o", output, "report path; '-' writes stdout");
  app.add_option("--mode", mode, "override the document's mode")
      ->check(CLI::IsMember({"hamiltonian", "skew_hamiltonian", "symplectic"}));
  app.add_option("--tol-rank", tol_rank, "relative singular-value cutoff");
  app.add_option("--tol-structure", tol_structure, "structure/condition threshold");
  app.add_option("--audit", audit, "number of oracle samples for the optimality audit");
  app.add_option("--seed", seed, "sampler seed");
  app.add_flag("--allow-rank-deficient", allow_rank_deficient, "accept X without full column rank");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return kExitInputError;
  }

  RunResult result;
  try {
    json doc;
    try {
      if (input == "-") {
        doc = json::parse(in);
      } else {
        std::ifstream file(input);
        if (!file)
          throw ParseError("input: cannot open " + input);
        doc = json::parse(file);
      }
    } catch (const json::exception &e) {
      throw ParseError(std::string("document: ") + e.what());
    }
    // command-line overrides are applied before validation
    if (!mode.empty())
      doc["mode"] = mode;
    if (tol_rank || tol_structure) {
      if (!doc.contains("tol") || !doc["tol"].is_object())
        doc["tol"] = json::object();
      if (tol_rank)
        doc["tol"]["rank_cutoff"] = *tol_rank;
      if (tol_structure)
        doc["tol"]["structure_atol"] = *tol_structure;
    }
    if (audit)
      doc["audit_samples"] = *audit;
    if (seed)
      doc["seed"] = *seed;
    if (allow_rank_deficient)
      doc["allow_rank_deficient_x"] = true;
    result = run(parse_instance(doc));
  } catch (const Error &e) {
    result.report = error_report("input_error", e.what());
    result.exit_code = kExitInputError;
  }

  const std::string text = result.report.dump(2);
  if (output == "-") {
    out << text << "\n";
  } else {
    std::ofstream file(output);
    if (!file) {
      err << "output: cannot open " << output << "\n";
      return kExitInputError;
    }
    file << text << "\n";
  }
  if (result.exit_code == kExitInputError || result.exit_code == kExitNumericalFailure)
    err << result.report.value("error", std::string("error")) << "\n";
  return result.exit_code;
}

} // namespace jproc
