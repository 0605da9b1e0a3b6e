// tangent-rep: prolong representations to tangent groups and run the
// verification suites from the command line.
//
// Exit codes: 0 success, 1 a check failed (Fail verdict or tolerance
// exceeded), 2 malformed input.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tangent_rep/tangent_rep.hpp"

namespace {

using namespace tangent_rep;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;

struct RunConfig {
  std::string rep_source;
  std::string suite = "all";
  int samples = 200;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::string output = "-";
  std::string format = "json";
  std::string group_kind;
  std::vector<double> a_coords;
  std::vector<double> fiber;
};

/// TANGENT_REP_SEED overrides the built-in default seed of 0.
std::uint64_t default_seed() {
  if (const char* env = std::getenv("TANGENT_REP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed TANGENT_REP_SEED\n";
    }
  }
  return 0;
}

CatalogEntry resolve(const std::string& source) {
  const bool looks_like_path =
      source.find('/') != std::string::npos || (source.size() > 5 && source.ends_with(".json"));
  if (!looks_like_path) {
    try {
      return catalog_lookup(source);
    } catch (const UnknownRepresentation&) {
      if (!std::filesystem::exists(source)) throw;
    }
  }
  Representation rep = load_representation_file(source);
  CatalogEntry entry;
  entry.name = rep.name;
  entry.rep = std::move(rep);
  entry.notes = "loaded from " + source;
  return entry;
}

void emit(const RunConfig& config, const std::string& text) {
  if (config.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(config.output);
  if (!out) throw DescriptorError("cannot write '" + config.output + "'");
  out << text;
}

std::string render(const RunConfig& config, const std::string& command, const json& config_json,
                   const std::vector<CheckReport>& checks, const json& extra = json::object()) {
  if (config.format == "csv") return report_to_csv(checks);
  if (config.format == "text") return report_to_text(checks);
  json doc = report_to_json(command, config_json, checks);
  for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
  return doc.dump(2) + "\n";
}

int exit_for(const std::vector<CheckReport>& checks) {
  for (const auto& c : checks)
    if (c.failed()) return kExitCheckFailed;
  return kExitOk;
}

int cmd_prolong(const RunConfig& config) {
  const CatalogEntry entry = resolve(config.rep_source);
  const GroupSpec& group = entry.rep.group;
  const std::vector<double> zeros(static_cast<std::size_t>(algebra_dim(group)), 0.0);
  const TangentGroupElement x{mat_exp(AlgebraElement::from_coordinates(group, config.a_coords.empty() ? zeros : config.a_coords)),
                              AlgebraElement::from_coordinates(group, config.fiber.empty() ? zeros : config.fiber)};
  const ProlongedMatrix m = prolong(entry.rep, x);

  // oracle agreement on every canonical basis vector of TV
  double discrepancy = 0.0;
  for (const auto& y : canonical_basis(entry.rep.target_dim).vectors)
    discrepancy = std::max(discrepancy, relative_residual(apply_prolonged(m, y).stacked(),
                                                          tangent_action_oracle(entry.rep, x, y).stacked()));
  CheckReport oracle{"oracle", discrepancy < kOracleTol ? Verdict::Pass : Verdict::Fail, discrepancy, std::nullopt};
  if (oracle.failed()) oracle.witness = Witness{"canonical basis vector of TV", std::nullopt, std::nullopt, {}};
  const std::vector<CheckReport> checks{oracle};

  const json config_json{{"rep", config.rep_source}, {"a_coords", config.a_coords}, {"fiber", config.fiber}};
  const json extra{{"prolongation",
                    {{"n", m.n()},
                     {"top_left", matrix_to_json(m.top_left())},
                     {"bottom_left", matrix_to_json(m.bottom_left())},
                     {"matrix", matrix_to_json(m.dense())}}}};
  if (config.format == "text") {
    std::ostringstream os;
    const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, ", ", "\n", "  [", "]");
    os << "R = Phi(a):\n" << m.top_left().format(fmt) << "\nK R = dPhi(B) Phi(a):\n" << m.bottom_left().format(fmt)
       << "\nprolonged (" << 2 * m.n() << "x" << 2 * m.n() << "):\n" << m.dense().format(fmt) << "\n"
       << report_to_text(checks);
    emit(config, os.str());
  } else {
    emit(config, render(config, "prolong", config_json, checks, extra));
  }
  return exit_for(checks);
}

int cmd_check(const RunConfig& config) {
  if (!is_suite_name(config.suite)) {
    std::cerr << "error: unknown suite '" << config.suite << "'\n";
    return kExitBadInput;
  }
  const CatalogEntry entry = resolve(config.rep_source);
  const auto checks = run_suite(entry, config.suite, {config.samples, config.seed, config.tol});
  const json config_json{{"rep", config.rep_source}, {"suite", config.suite}, {"samples", config.samples},
                         {"seed", config.seed},      {"tol", config.tol}};
  emit(config, render(config, "check", config_json, checks));
  return exit_for(checks);
}

int cmd_catalog(const RunConfig& config) {
  std::vector<const CatalogEntry*> selected;
  for (const auto& e : catalog_list())
    if (config.group_kind.empty() || kind_name(e.rep.group.kind) == config.group_kind) selected.push_back(&e);
  std::string text;
  if (config.format == "json") {
    json entries = json::array();
    for (const auto* e : selected) entries.push_back(catalog_entry_to_json(*e));
    text = json{{"command", "catalog"}, {"config", {{"group_kind", config.group_kind}}}, {"entries", entries},
                {"version", kVersion}}
               .dump(2) +
           "\n";
  } else if (config.format == "csv") {
    text = "name,group,target_dim,known_faithful,kernel_witness,invariant_subspaces\n";
    for (const auto* e : selected)
      text += e->name + "," + e->rep.group.name() + "," + std::to_string(e->rep.target_dim) + "," +
              (e->known_faithful ? "true" : "false") + "," + (e->kernel_witness ? "yes" : "no") + "," +
              std::to_string(e->known_invariant_subspaces.size()) + "\n";
  } else {
    std::ostringstream os;
    for (const auto* e : selected)
      os << std::left << std::setw(40) << e->name << std::setw(10) << e->rep.group.name() << " n=" << e->rep.target_dim
         << (e->known_faithful ? "  faithful" : "  not faithful") << "  " << e->notes << "\n";
    text = os.str();
  }
  emit(config, text);
  return kExitOk;
}

int cmd_report(const RunConfig& config) {
  const auto checks = catalog_report({config.samples, config.seed, config.tol});
  const json config_json{{"samples", config.samples}, {"seed", config.seed}, {"tol", config.tol}};
  emit(config, render(config, "report", config_json, checks));
  return exit_for(checks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prolong Lie group representations to tangent groups and verify their structure"};
  app.require_subcommand(1);
  RunConfig config;
  config.seed = default_seed();

  auto add_output = [&config](CLI::App* cmd) {
    cmd->add_option("--format", config.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_option("-o,--output", config.output, "Output path, - for stdout");
  };
  auto add_sampling = [&config](CLI::App* cmd) {
    cmd->add_option("--samples", config.samples, "Samples per check")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", config.seed, "Random seed (default: $TANGENT_REP_SEED or 0)");
    cmd->add_option("--tol", config.tol, "Tolerance for exact-algebra checks")->check(CLI::PositiveNumber);
  };

  auto* prolong_cmd = app.add_subcommand("prolong", "Print the prolonged matrix of one tangent element");
  prolong_cmd->add_option("--rep", config.rep_source, "Catalog name or descriptor path")->required();
  prolong_cmd->add_option("--a-coords", config.a_coords, "Exponential coordinates of the base element a");
  prolong_cmd->add_option("--fiber", config.fiber, "Algebra coordinates of B");
  add_output(prolong_cmd);

  auto* check_cmd = app.add_subcommand("check", "Run a verification suite on one representation");
  check_cmd->add_option("--rep", config.rep_source, "Catalog name or descriptor path")->required();
  check_cmd->add_option("--suite", config.suite,
                        "homomorphism | oracle | equivalence | invariance | directsum | faithfulness | all");
  add_sampling(check_cmd);
  add_output(check_cmd);

  auto* catalog_cmd = app.add_subcommand("catalog", "List built-in representations");
  catalog_cmd->add_option("--group-kind", config.group_kind, "Only entries on this group kind");
  add_output(catalog_cmd);
  config.format = "json";

  auto* report_cmd = app.add_subcommand("report", "Run every suite over the whole catalog");
  add_sampling(report_cmd);
  add_output(report_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (*prolong_cmd) return cmd_prolong(config);
    if (*check_cmd) return cmd_check(config);
    if (*catalog_cmd) return cmd_catalog(config);
    if (*report_cmd) return cmd_report(config);
  } catch (const CatalogError& e) {
    std::cerr << "catalog self-check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
