#pragma once

// Serialization of check reports. JSON is the stable surface:
//   {command, config, checks: [{name, verdict, max_residual, witness?}], version}
// CSV flattens `checks`; text is for people and may change.

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "catalog.hpp"
#include "rep_algebra.hpp"
#include "suites.hpp"

namespace tangent_rep {

inline nlohmann::json matrix_to_json(const Matrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json witness_to_json(const Witness& w) {
  nlohmann::json out{{"note", w.note}};
  if (w.seed) out["seed"] = *w.seed;
  if (w.sample_index) out["sample_index"] = *w.sample_index;
  if (!w.data.empty()) out["data"] = w.data;
  return out;
}

inline nlohmann::json check_to_json(const CheckReport& r) {
  nlohmann::json out{{"name", r.name}, {"verdict", verdict_name(r.verdict)}, {"max_residual", r.max_residual}};
  if (r.witness) out["witness"] = witness_to_json(*r.witness);
  return out;
}

inline nlohmann::json report_to_json(const std::string& command, const nlohmann::json& config,
                                     const std::vector<CheckReport>& checks) {
  auto list = nlohmann::json::array();
  for (const auto& c : checks) list.push_back(check_to_json(c));
  return {{"command", command}, {"config", config}, {"checks", std::move(list)}, {"version", kVersion}};
}

namespace report_detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline std::string number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace report_detail

inline std::string report_to_csv(const std::vector<CheckReport>& checks) {
  using report_detail::csv_field;
  std::string out = "name,verdict,max_residual,witness_note,witness_seed,witness_sample_index\n";
  for (const auto& c : checks) {
    out += csv_field(c.name) + "," + std::string(verdict_name(c.verdict)) + "," + report_detail::number(c.max_residual);
    if (c.witness) {
      out += "," + csv_field(c.witness->note) + "," + (c.witness->seed ? std::to_string(*c.witness->seed) : "") + "," +
             (c.witness->sample_index ? std::to_string(*c.witness->sample_index) : "");
    } else {
      out += ",,,";
    }
    out += "\n";
  }
  return out;
}

inline std::string report_to_text(const std::vector<CheckReport>& checks) {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << std::left << std::setw(14) << verdict_name(c.verdict) << std::setw(48) << c.name
       << " max_residual=" << std::setprecision(3) << std::scientific << c.max_residual;
    if (c.witness) {
      os << "  [" << c.witness->note;
      if (c.witness->sample_index) os << ", sample " << *c.witness->sample_index;
      os << "]";
    }
    os << "\n";
  }
  return os.str();
}

inline nlohmann::json catalog_entry_to_json(const CatalogEntry& e) {
  nlohmann::json subspaces = nlohmann::json::array();
  for (const auto& u : e.known_invariant_subspaces) subspaces.push_back(matrix_to_json(u.vectors().transpose()));
  nlohmann::json out{{"name", e.name},
                     {"group", {{"kind", kind_name(e.rep.group.kind)}, {"dim", e.rep.group.dim}, {"name", e.rep.group.name()}}},
                     {"target_dim", e.rep.target_dim},
                     {"known_faithful", e.known_faithful},
                     {"analytic_differential", e.rep.has_differential()},
                     {"known_invariant_subspaces", std::move(subspaces)},
                     {"notes", e.notes}};
  out["kernel_witness"] = e.kernel_witness ? matrix_to_json(e.kernel_witness->matrix()) : nlohmann::json(nullptr);
  return out;
}

}  // namespace tangent_rep
