#include "jproc/io.hpp"

#include <fstream>
#include <istream>

namespace jproc {

using nlohmann::json;

namespace {

Complex entry_from_json(const json &v, const std::string &path) {
  if (v.is_number())
    return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ParseError(path + ": expected a number or a [re, im] pair");
}

json entry_to_json(const Complex &z) { return json::array({z.real(), z.imag()}); }

bool is_entry(const json &v) { return v.is_number() || (v.is_array() && v.size() == 2 && v[0].is_number()); }

const json &require_field(const json &doc, const char *name) {
  if (!doc.contains(name))
    throw ParseError(std::string(name) + ": missing field");
  return doc.at(name);
}

} // namespace

json matrix_to_json(const ComplexMatrix &m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(entry_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json &value, const std::string &path) {
  if (!value.is_array() || value.empty())
    throw ParseError(path + ": expected a non-empty 2-D array");
  const auto rows = value.size();
  if (!value[0].is_array() || value[0].empty())
    throw ParseError(path + ": expected a 2-D array of entries");
  const auto cols = value[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const auto &row = value[i];
    const std::string rpath = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != cols)
      throw ParseError(rpath + ": row length differs from row 0 (" + std::to_string(cols) + ")");
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          entry_from_json(row[j], rpath + "[" + std::to_string(j) + "]");
  }
  return m;
}

namespace {

// D may be given as the 1-D list of its diagonal entries. A list whose
// items are all entries (numbers or [re, im] pairs) is read that way, so a
// 2-D D must use [re, im] entries when m = 2.
ComplexMatrix diagonal_from_json(const json &value) {
  bool one_d = value.is_array() && !value.empty();
  if (one_d)
    for (const auto &item : value)
      one_d = one_d && is_entry(item) && (item.is_number() || item[1].is_number());
  if (!one_d)
    return matrix_from_json(value, "D");
  const auto m = static_cast<Eigen::Index>(value.size());
  ComplexMatrix d = ComplexMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    d(i, i) = entry_from_json(value[static_cast<std::size_t>(i)], "D[" + std::to_string(i) + "]");
  return d;
}

} // namespace

ProblemInstance<double> parse_instance(const json &doc) {
  if (!doc.is_object())
    throw ParseError("document: expected a JSON object");
  ProblemInstance<double> inst;
  const auto &mode = require_field(doc, "mode");
  if (!mode.is_string())
    throw ParseError("mode: expected a string");
  try {
    inst.mode = parse_mode(mode.get<std::string>());
  } catch (const Error &e) {
    throw ParseError(std::string("mode: ") + e.what());
  }
  inst.j = matrix_from_json(require_field(doc, "J"), "J");
  inst.x = matrix_from_json(require_field(doc, "X"), "X");
  inst.d = diagonal_from_json(require_field(doc, "D"));
  inst.a_tilde = matrix_from_json(require_field(doc, "A_tilde"), "A_tilde");
  if (doc.contains("tol")) {
    const auto &tol = doc.at("tol");
    if (!tol.is_object())
      throw ParseError("tol: expected an object");
    for (const char *key : {"rank_cutoff", "structure_atol"}) {
      if (!tol.contains(key))
        continue;
      if (!tol.at(key).is_number())
        throw ParseError(std::string("tol.") + key + ": expected a number");
      (std::string(key) == "rank_cutoff" ? inst.tol.rank_cutoff : inst.tol.structure_atol) =
          tol.at(key).get<double>();
    }
  }
  if (doc.contains("audit_samples")) {
    if (!doc.at("audit_samples").is_number_unsigned())
      throw ParseError("audit_samples: expected a non-negative integer");
    inst.audit_samples = doc.at("audit_samples").get<std::uint64_t>();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer())
      throw ParseError("seed: expected an integer");
    inst.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("allow_rank_deficient_x")) {
    if (!doc.at("allow_rank_deficient_x").is_boolean())
      throw ParseError("allow_rank_deficient_x: expected a boolean");
    inst.allow_rank_deficient_x = doc.at("allow_rank_deficient_x").get<bool>();
  }
  try {
    inst.validate();
  } catch (const ParseError &) {
    throw;
  } catch (const Error &e) {
    throw ParseError(e.what());
  }
  return inst;
}

ProblemInstance<double> parse_instance(std::istream &in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception &e) {
    throw ParseError(std::string("document: ") + e.what());
  }
  return parse_instance(doc);
}

ProblemInstance<double> parse_instance_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("input: cannot open " + path.string());
  return parse_instance(in);
}

json to_json(const ProblemInstance<double> &inst) {
  json doc;
  doc["mode"] = to_string(inst.mode);
  doc["J"] = matrix_to_json(inst.j);
  doc["X"] = matrix_to_json(inst.x);
  doc["D"] = matrix_to_json(inst.d);
  doc["A_tilde"] = matrix_to_json(inst.a_tilde);
  doc["tol"] = {{"rank_cutoff", inst.tol.rank_cutoff}, {"structure_atol", inst.tol.structure_atol}};
  if (inst.audit_samples)
    doc["audit_samples"] = *inst.audit_samples;
  if (inst.seed)
    doc["seed"] = *inst.seed;
  if (inst.allow_rank_deficient_x)
    doc["allow_rank_deficient_x"] = true;
  return doc;
}

} // namespace jproc
