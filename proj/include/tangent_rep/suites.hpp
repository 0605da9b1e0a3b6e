#pragma once

// Named verification suites over one representation, as run by the CLI's
// `check` and `report` commands.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "catalog.hpp"
#include "rep_algebra.hpp"

namespace tangent_rep {

inline constexpr std::string_view kVersion = "0.1.0";

/// Finite-difference agreement bound for the tangent-action oracle.
inline constexpr double kOracleTol = 1e-5;
/// Bound for the permutation identity of prolonged direct sums.
inline constexpr double kDirectSumTol = 1e-12;
inline constexpr int kConjugations = 5;

inline constexpr std::array<std::string_view, 6> kSuiteNames{"homomorphism", "oracle",      "equivalence",
                                                             "invariance",   "directsum",   "faithfulness"};

inline bool is_suite_name(std::string_view name) {
  return name == "all" || std::find(kSuiteNames.begin(), kSuiteNames.end(), name) != kSuiteNames.end();
}

struct SuiteConfig {
  int samples = 200;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

/// Random matrix with entries in [-1, 1] and condition number at most 100.
inline Matrix random_invertible(int n, Rng& rng) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (;;) {
    Matrix m(n, n);
    for (auto& x : m.reshaped()) x = uniform(rng);
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s(n - 1) > 0.0 && s(0) / s(n - 1) <= 100.0) return m;
  }
}

/// Worst of several reports under one name; the witness of the worst failing
/// report is kept with its note prefixed by `label(index)`.
template <class Label>
CheckReport merge_reports(std::string name, const std::vector<CheckReport>& parts, Label&& label) {
  CheckReport out{std::move(name), Verdict::Pass, 0.0, std::nullopt};
  bool any_inconclusive = false;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    any_inconclusive |= p.verdict == Verdict::Inconclusive;
    out.max_residual = std::max(out.max_residual, p.max_residual);
    if (p.failed() && !out.failed()) {
      out.verdict = Verdict::Fail;
      out.witness = p.witness;
      if (out.witness) out.witness->note = label(i) + ": " + out.witness->note;
    }
  }
  if (!out.failed() && any_inconclusive) out.verdict = Verdict::Inconclusive;
  return out;
}

namespace suite_detail {

inline void homomorphism(const CatalogEntry& e, const SuiteConfig& c, std::vector<CheckReport>& out) {
  out.push_back(check_homomorphism(e.rep, c.samples, c.seed, c.tol));
  out.push_back(check_embedding_homomorphism(e.rep.group, c.samples, c.seed, c.tol));
  out.push_back(check_prolonged_homomorphism(e.rep, c.samples, c.seed, c.tol));
}

inline void oracle(const CatalogEntry& e, const SuiteConfig& c, std::vector<CheckReport>& out) {
  const double tol = std::max(c.tol, kOracleTol);
  out.push_back(check_oracle(e.rep, c.samples, c.seed, tol));
  if (!e.rep.has_differential()) {
    out.push_back({"differential", Verdict::Inconclusive, 0.0,
                   Witness{"no analytic differential to compare", c.seed, std::nullopt, {}}});
    return;
  }
  out.push_back(detail::sampled_check("differential", c.samples, c.seed, tol, [&](Rng& rng, int) {
    const auto rep = differential_report(e.rep, sample_algebra_element(e.rep.group, rng));
    return rep.discrepancy / std::max(1.0, max_abs(*rep.analytic));
  }));
}

inline void equivalence(const CatalogEntry& e, const SuiteConfig& c, std::vector<CheckReport>& out) {
  std::vector<CheckReport> base, prolonged;
  for (int k = 0; k < kConjugations; ++k) {
    Rng rng(c.seed + 7919u * static_cast<std::uint64_t>(k + 1));
    const Intertwiner a0{random_invertible(e.rep.target_dim, rng)};
    const Representation conj = conjugate(e.rep, a0.matrix);
    base.push_back(is_intertwiner(a0, e.rep, conj, c.samples, c.seed, c.tol));
    prolonged.push_back(is_prolonged_intertwiner(prolong_intertwiner(a0), e.rep, conj, c.samples, c.seed, c.tol));
  }
  auto label = [](std::size_t k) { return "conjugation " + std::to_string(k); };
  out.push_back(merge_reports("equivalence", base, label));
  out.push_back(merge_reports("prolonged_equivalence", prolonged, label));
}

inline CheckReport reducibility(const CatalogEntry& e, const SuiteConfig& c) {
  const auto probe = reducibility_probe(e.rep, std::min(c.samples, 20), c.seed);
  const std::string dim = " (commutant dim " + std::to_string(probe.commutant_dim) + ")";
  switch (probe.verdict) {
    case Reducibility::Irreducible:
      return {"reducibility", Verdict::Pass, 0.0, Witness{"Irreducible" + dim, c.seed, std::nullopt, {}}};
    case Reducibility::Reducible: {
      // an invariant U must prolong to a TU invariant under the prolongation
      const auto tu = is_invariant_subspace_prolonged(e.rep, prolong_subspace(*probe.witness), c.samples, c.seed, 1e-8);
      CheckReport r{"reducibility", tu.verdict, std::max(probe.witness_defect, tu.max_residual),
                    Witness{"Reducible" + dim + "; witness subspace, prolonged subspace " +
                                std::string(verdict_name(tu.verdict)),
                            c.seed, std::nullopt, detail::flatten(probe.witness->vectors())}};
      return r;
    }
    case Reducibility::Inconclusive:
      break;
  }
  if (e.rep.target_dim == 2) {
    const auto sweep = certify_irreducible_2d(e.rep, std::min(c.samples, 20), c.seed);
    if (sweep.passed())
      return {"reducibility", Verdict::Pass, 0.0,
              Witness{"Irreducible (no invariant line; min defect " + std::to_string(sweep.max_residual) + ")" + dim,
                      c.seed, std::nullopt, {}}};
  }
  return {"reducibility", Verdict::Inconclusive, 0.0, Witness{"Inconclusive" + dim, c.seed, std::nullopt, {}}};
}

inline void invariance(const CatalogEntry& e, const SuiteConfig& c, std::vector<CheckReport>& out) {
  auto vertical = is_invariant_subspace_prolonged(e.rep, vertical_subspace(e.rep.target_dim), c.samples, c.seed, c.tol);
  vertical.name = "vertical_subspace";
  out.push_back(std::move(vertical));
  if (!e.known_invariant_subspaces.empty()) {
    std::vector<CheckReport> base, forward, backward;
    for (const auto& u : e.known_invariant_subspaces) {
      base.push_back(is_invariant_subspace(e.rep, u, c.samples, c.seed, c.tol));
      const auto tu = prolong_subspace(u);
      forward.push_back(is_invariant_subspace_prolonged(e.rep, tu, c.samples, c.seed, c.tol));
      backward.push_back(invariance_from_prolongation(e.rep, tu, c.samples, c.seed, c.tol));
    }
    auto label = [](std::size_t k) { return "declared subspace " + std::to_string(k); };
    out.push_back(merge_reports("declared_subspaces", base, label));
    out.push_back(merge_reports("invariance_transfer_forward", forward, label));
    out.push_back(merge_reports("invariance_transfer_backward", backward, label));
  }
  out.push_back(reducibility(e, c));
}

inline void directsum(const CatalogEntry& e, const SuiteConfig& c, std::vector<CheckReport>& out) {
  out.push_back(check_direct_sum_commutation(e.rep, e.rep, c.samples, c.seed, kDirectSumTol));
  auto hom = check_homomorphism(direct_sum(e.rep, e.rep), c.samples, c.seed, c.tol);
  hom.name = "direct_sum_homomorphism";
  out.push_back(std::move(hom));
}

inline void faithfulness(const CatalogEntry& e, const SuiteConfig& c, std::vector<CheckReport>& out) {
  out.push_back(faithfulness_probe(e.rep, c.samples, c.seed, e.kernel_witness));
}

}  // namespace suite_detail

/// Runs one named suite, or every suite for "all". Throws std::invalid_argument
/// for an unknown suite name.
inline std::vector<CheckReport> run_suite(const CatalogEntry& entry, std::string_view suite, const SuiteConfig& config) {
  if (!is_suite_name(suite)) throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
  std::vector<CheckReport> out;
  auto wants = [suite](std::string_view s) { return suite == "all" || suite == s; };
  if (wants("homomorphism")) suite_detail::homomorphism(entry, config, out);
  if (wants("oracle")) suite_detail::oracle(entry, config, out);
  if (wants("equivalence")) suite_detail::equivalence(entry, config, out);
  if (wants("invariance")) suite_detail::invariance(entry, config, out);
  if (wants("directsum")) suite_detail::directsum(entry, config, out);
  if (wants("faithfulness")) suite_detail::faithfulness(entry, config, out);
  return out;
}

/// The faithfulness probe judged against the entry's declared ground truth:
/// Pass when a faithful entry shows no collision, or a non-faithful entry
/// shows one. The second case is the documented divergence from the claim
/// that every prolongation is faithful.
inline CheckReport faithfulness_against_declaration(const CatalogEntry& entry, const SuiteConfig& config) {
  auto probe = faithfulness_probe(entry.rep, config.samples, config.seed, entry.kernel_witness);
  CheckReport out{"faithfulness_matches_declaration", Verdict::Pass, probe.max_residual, probe.witness};
  const bool collided = probe.failed();
  if (collided == entry.known_faithful) {
    out.verdict = Verdict::Fail;
    if (!out.witness)
      out.witness = Witness{"declared non-faithful but no collision was found", config.seed, std::nullopt, {}};
  } else if (collided && out.witness) {
    out.witness->note = "expected divergence (prolongation not faithful): " + out.witness->note;
  }
  return out;
}

/// Every suite over every catalog entry, check names prefixed "<entry>/".
inline std::vector<CheckReport> catalog_report(const SuiteConfig& config) {
  std::vector<CheckReport> out;
  for (const auto& entry : catalog_list()) {
    for (auto suite : kSuiteNames) {
      if (suite == "faithfulness") {
        auto r = faithfulness_against_declaration(entry, config);
        r.name = entry.name + "/" + r.name;
        out.push_back(std::move(r));
        continue;
      }
      for (auto& r : run_suite(entry, suite, config)) {
        r.name = entry.name + "/" + r.name;
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

}  // namespace tangent_rep
