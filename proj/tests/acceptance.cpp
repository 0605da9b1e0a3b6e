// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tangent_rep/tangent_rep.hpp"

using namespace tangent_rep;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double x) {
  std::ostringstream os;
  os.precision(2);
  os << std::scientific << x;
  return os.str();
}

// criterion 1
Outcome jn_homomorphism() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int n : {1, 2, 3, 5}) {
    const auto group = GroupSpec::general_linear(n);
    Rng rng(100 + static_cast<std::uint64_t>(n));
    for (int i = 0; i < 1000; ++i) {
      const auto x = sample_tangent_element(group, rng);
      const auto y = sample_tangent_element(group, rng);
      worst = std::max(worst, relative_residual(jn_embed(tg_multiply(x, y)).dense(),
                                                jn_embed(x).dense() * jn_embed(y).dense()));
    }
  }
  const double t = seconds_since(start);
  return {worst < 1e-9 && t < 5.0, "max residual " + sci(worst) + ", " + sci(t) + " s"};
}

// criterion 2
Outcome prolonged_homomorphism() {
  const auto start = Clock::now();
  Outcome out;
  double worst = 0.0;
  for (const auto& e : catalog_list()) {
    const auto r = check_prolonged_homomorphism(e.rep, 1000, 200, 1e-9);
    worst = std::max(worst, r.max_residual);
    if (!r.passed()) {
      out.ok = false;
      out.detail += e.name + " fails; ";
    }
  }
  const double t = seconds_since(start);
  out.ok = out.ok && t < 30.0;
  out.detail += std::to_string(catalog_list().size()) + " reps, max residual " + sci(worst) + ", " + sci(t) + " s";
  return out;
}

// criterion 3
Outcome oracle_agreement() {
  Outcome out;
  double worst = 0.0;
  for (const auto& e : catalog_list()) {
    const auto r = check_oracle(e.rep, 1000, 300, kOracleTol);
    worst = std::max(worst, r.max_residual);
    if (!r.passed()) {
      out.ok = false;
      out.detail += e.name + " fails; ";
    }
  }
  out.detail += "max discrepancy " + sci(worst) + " against tolerance " + sci(kOracleTol);
  return out;
}

// criterion 4
Outcome equivalence_transfer() {
  Outcome out;
  double worst = 0.0;
  for (const auto& e : catalog_list()) {
    Rng rng(400);
    for (int k = 0; k < 20; ++k) {
      const Intertwiner a0{random_invertible(e.rep.target_dim, rng)};
      const auto conj = conjugate(e.rep, a0.matrix);
      const auto base = is_intertwiner(a0, e.rep, conj, 25, 401 + static_cast<std::uint64_t>(k), 1e-9);
      const auto lifted =
          is_prolonged_intertwiner(prolong_intertwiner(a0), e.rep, conj, 25, 401 + static_cast<std::uint64_t>(k), 1e-9);
      worst = std::max({worst, base.max_residual, lifted.max_residual});
      if (!base.passed() || !lifted.passed() || !prolong_intertwiner(a0).full_rank()) {
        out.ok = false;
        out.detail += e.name + " conjugation " + std::to_string(k) + " fails; ";
      }
    }
  }
  out.detail += "20 conjugations per rep, max residual " + sci(worst);
  return out;
}

// criterion 5
Outcome invariance_transfer() {
  Outcome out;
  double worst = 0.0;
  int declared = 0;
  auto check_both = [&](const Representation& rep, const SubspaceBasis& u, std::uint64_t seed, const std::string& what) {
    const auto base = is_invariant_subspace(rep, u, 50, seed, 1e-9);
    const auto forward = is_invariant_subspace_prolonged(rep, prolong_subspace(u), 50, seed, 1e-9);
    const auto backward = invariance_from_prolongation(rep, prolong_subspace(u), 50, seed, 1e-9);
    worst = std::max({worst, base.max_residual, forward.max_residual, backward.max_residual});
    if (!base.passed() || !forward.passed() || !backward.passed()) {
      out.ok = false;
      out.detail += what + " fails; ";
    }
  };
  for (const auto& e : catalog_list())
    for (const auto& u : e.known_invariant_subspaces) check_both(e.rep, u, 500 + declared++, e.name + " declared");

  // graphs {(x, C x)} with C in the commutant of Phi are invariant under Phi + Phi
  std::vector<const CatalogEntry*> simple;
  for (const auto& e : catalog_list())
    if (e.name.find('+') == std::string::npos) simple.push_back(&e);
  Rng rng(550);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const auto& e = *simple[static_cast<std::size_t>(k) % simple.size()];
    const int n = e.rep.target_dim;
    const auto comm = commutant_basis(e.rep, 8, 560 + static_cast<std::uint64_t>(k));
    Matrix c = Matrix::Zero(n, n);
    for (const auto& b : comm.basis) c += coef(rng) * b;
    Matrix graph(2 * n, n);
    graph.topRows(n) = Matrix::Identity(n, n);
    graph.bottomRows(n) = c;
    check_both(direct_sum(e.rep, e.rep), SubspaceBasis(2 * n, graph), 600 + static_cast<std::uint64_t>(k),
               e.name + " graph " + std::to_string(k));
  }
  out.detail += std::to_string(declared) + " declared + 50 random graph subspaces, max defect " + sci(worst);
  return out;
}

// criterion 6
Outcome vertical_invariance() {
  Outcome out;
  const auto circle = catalog_lookup("circle_rotation").rep;
  Matrix fiber = Matrix::Zero(4, 2);
  fiber(2, 0) = 1.0;
  fiber(3, 1) = 1.0;
  const auto c = is_invariant_subspace_prolonged(circle, SubspaceBasis(4, fiber), 1000, 700, 1e-9);
  double worst = c.max_residual;
  if (!c.passed()) {
    out.ok = false;
    out.detail += "circle fiber {(0,0,x,y)} fails; ";
  }
  for (const auto& e : catalog_list()) {
    const auto r = is_invariant_subspace_prolonged(e.rep, vertical_subspace(e.rep.target_dim), 200, 701, 1e-9);
    worst = std::max(worst, r.max_residual);
    if (!r.passed()) {
      out.ok = false;
      out.detail += e.name + " vertical fails; ";
    }
  }
  out.detail += "circle fiber plane and every rep's vertical subspace, max defect " + sci(worst);
  return out;
}

// criterion 7: the interleaving permutation is rebuilt here from coordinate labels
Outcome direct_sum_identity() {
  Outcome out;
  const std::pair<const char*, const char*> pairs[] = {{"circle_rotation", "circle_winding_2"},
                                                       {"circle_winding_2", "trivial(1)"},
                                                       {"gl_identity(2)", "gl_identity(2)"},
                                                       {"so3_standard", "so3_standard"},
                                                       {"sl2_standard", "sl2_adjoint"}};
  double worst = 0.0;
  for (const auto& [a, b] : pairs) {
    const auto r1 = catalog_lookup(a).rep, r2 = catalog_lookup(b).rep;
    const int n1 = r1.target_dim, n2 = r2.target_dim, n = n1 + n2;
    // label (block, part, index): part 0 = base, 1 = fiber
    std::vector<std::tuple<int, int, int>> source, target;
    for (int part = 0; part < 2; ++part) {
      for (int i = 0; i < n1; ++i) source.emplace_back(0, part, i);
      for (int i = 0; i < n2; ++i) source.emplace_back(1, part, i);
    }
    for (int block = 0; block < 2; ++block)
      for (int part = 0; part < 2; ++part)
        for (int i = 0; i < (block == 0 ? n1 : n2); ++i) target.emplace_back(block, part, i);
    Matrix p = Matrix::Zero(2 * n, 2 * n);
    for (int k = 0; k < 2 * n; ++k)
      for (int s = 0; s < 2 * n; ++s)
        if (target[static_cast<std::size_t>(k)] == source[static_cast<std::size_t>(s)]) p(k, s) = 1.0;

    const auto sum = direct_sum(r1, r2);
    Rng rng(800);
    for (int i = 0; i < 200; ++i) {
      const auto x = sample_tangent_element(r1.group, rng);
      const Matrix lhs = p * prolong(sum, x).dense() * p.transpose();
      const Matrix rhs = block_diagonal(prolong(r1, x).dense(), prolong(r2, x).dense());
      worst = std::max(worst, relative_residual(lhs, rhs));
    }
  }
  out.ok = worst <= kDirectSumTol;
  out.detail = "5 pairs x 200 samples, max residual " + sci(worst);
  return out;
}

// criterion 8
Outcome faithfulness() {
  Outcome out;
  int faithful = 0, diverging = 0;
  for (const auto& e : catalog_list()) {
    if (!e.known_faithful) continue;
    ++faithful;
    if (!faithfulness_probe(e.rep, 1000, 900).passed()) {
      out.ok = false;
      out.detail += e.name + " collided; ";
    }
  }
  for (const char* name : {"circle_winding_2", "trivial(1)", "trivial(2)"}) {
    const auto e = catalog_lookup(name);
    if (faithfulness_probe(e.rep, 1000, 901, e.kernel_witness).failed()) {
      ++diverging;
    } else {
      out.ok = false;
      out.detail += std::string(name) + " produced no collision; ";
    }
  }
  out.detail += std::to_string(faithful) + " faithful reps without collision over 1000 draws; " +
                std::to_string(diverging) +
                " non-faithful reps (circle_winding_2, trivial(n)) give kernel collisions, so faithfulness "
                "of the prolongation needs a faithful Phi (documented divergence)";
  return out;
}

// criterion 9
Outcome vector_space_axioms() {
  Rng rng(1000);
  std::uniform_int_distribution<int> ints(-1000, 1000), scalars(-16, 16);
  auto draw = [&](int n) {
    Vector p(n), v(n);
    for (auto& x : p) x = ints(rng);
    for (auto& x : v) x = ints(rng);
    return TangentVector(p, v);
  };
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 5;
    const auto u = draw(n), v = draw(n), w = draw(n);
    const double a = scalars(rng) / 4.0, b = scalars(rng) / 4.0;
    const auto zero = TangentVector::zero(n);
    const bool all = tv_add(tv_add(u, v), w) == tv_add(u, tv_add(v, w)) && tv_add(u, v) == tv_add(v, u) &&
                     tv_add(u, zero) == u && tv_add(u, tv_negate(u)) == zero &&
                     tv_scale(a, tv_add(u, v)) == tv_add(tv_scale(a, u), tv_scale(a, v)) &&
                     tv_scale(a + b, u) == tv_add(tv_scale(a, u), tv_scale(b, u)) &&
                     tv_scale(a * b, u) == tv_scale(a, tv_scale(b, u)) && tv_scale(1.0, u) == u;
    violations += all ? 0 : 1;
  }
  return {violations == 0, "8 axioms on 1000 triples, " + std::to_string(violations) + " violations"};
}

// criterion 10
Outcome cli_reproducibility() {
  auto capture = [](const std::string& args, int& status) {
    const std::string cmd = "'" TANGENT_REP_CLI "' " + args + " 2>/dev/null";
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return out;
    char buf[4096];
    while (const std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int raw = pclose(pipe);
    status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return out;
  };
  const std::string args = "check --rep circle_rotation --suite all --samples 100 --seed 7 --format json";
  int s1 = -1, s2 = -1;
  const auto first = capture(args, s1);
  const auto second = capture(args, s2);
  const bool ok = s1 == 0 && s2 == 0 && !first.empty() && first == second;
  return {ok, std::to_string(first.size()) + " bytes, exit codes " + std::to_string(s1) + "/" + std::to_string(s2) +
                  (first == second ? ", identical" : ", differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"J_n is a homomorphism", jn_homomorphism},
      {"prolongation is a homomorphism", prolonged_homomorphism},
      {"block formula matches the tangent-action oracle", oracle_agreement},
      {"equivalence transfers to prolongations", equivalence_transfer},
      {"invariant subspaces transfer both ways", invariance_transfer},
      {"vertical subspaces are invariant", vertical_invariance},
      {"direct sums commute with prolongation", direct_sum_identity},
      {"faithfulness", faithfulness},
      {"tangent vector space axioms", vector_space_axioms},
      {"CLI output is reproducible", cli_reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.ok ? 0 : 1;
    std::cout << (o.ok ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail << "\n";
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << "\n";
  return failures == 0 ? 0 : 1;
}
