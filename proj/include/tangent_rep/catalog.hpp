#pragma once

// Built-in representations with analytic differentials and known ground
// truth. The catalog checks its own declarations the first time it is used.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lie_core.hpp"
#include "prolongation.hpp"
#include "rep_algebra.hpp"

namespace tangent_rep {

struct CatalogEntry {
  std::string name;
  Representation rep;
  bool known_faithful = false;
  std::optional<GroupElement> kernel_witness;
  std::vector<SubspaceBasis> known_invariant_subspaces;
  std::string notes;
};

/// Raised when a catalog entry fails verification of its declared properties.
class CatalogError : public Error {
 public:
  using Error::Error;
};

namespace catalog_detail {

inline Representation identity_rep(std::string name, const GroupSpec& group) {
  return {std::move(name), group, group.dim, [](const GroupElement& a) { return a.matrix(); },
          [](const AlgebraElement& b) { return b.matrix(); }};
}

inline CatalogEntry circle_rotation() {
  return {"circle_rotation", identity_rep("circle_rotation", GroupSpec::circle()), true, std::nullopt, {},
          "S1 acting on R2 by (x, y) -> (a x + b y, -b x + a y) with (a, b) = (cos t, sin t)"};
}

inline CatalogEntry circle_winding_2() {
  Representation rep{"circle_winding_2", GroupSpec::circle(), 2,
                     [](const GroupElement& a) -> Matrix { return a.matrix() * a.matrix(); },
                     [](const AlgebraElement& b) -> Matrix { return 2.0 * b.matrix(); }};
  return {"circle_winding_2", std::move(rep), false, GroupElement::circle(std::acos(-1.0)), {},
          "rotation by 2t; t = pi is a nontrivial kernel element"};
}

inline CatalogEntry gl_identity(int n) {
  const std::string name = "gl_identity(" + std::to_string(n) + ")";
  return {name, identity_rep(name, GroupSpec::general_linear(n)), true, std::nullopt, {},
          "defining representation of GL(" + std::to_string(n) + ")"};
}

inline CatalogEntry so3_standard() {
  return {"so3_standard", identity_rep("so3_standard", GroupSpec::special_orthogonal(3)), true, std::nullopt, {},
          "defining representation of SO(3)"};
}

inline CatalogEntry sl2_standard() {
  return {"sl2_standard", identity_rep("sl2_standard", GroupSpec::special_linear(2)), true, std::nullopt, {},
          "defining representation of SL(2)"};
}

/// Adjoint action of SL(2) on sl(2), in the coordinates of algebra_basis.
inline CatalogEntry sl2_adjoint() {
  const GroupSpec group = GroupSpec::special_linear(2);
  auto columns = [group](auto&& image_of) {
    const auto basis = algebra_basis(group);
    Matrix m(3, 3);
    for (int k = 0; k < 3; ++k) {
      const auto c = AlgebraElement(group, image_of(basis[static_cast<std::size_t>(k)])).coordinates();
      for (int i = 0; i < 3; ++i) m(i, k) = c[static_cast<std::size_t>(i)];
    }
    return m;
  };
  Representation rep{"sl2_adjoint", group, 3,
                     [columns](const GroupElement& a) -> Matrix {
                       const Matrix inv = a.inverse().matrix();
                       return columns([&](const Matrix& b) -> Matrix { return a.matrix() * b * inv; });
                     },
                     [columns](const AlgebraElement& x) -> Matrix {
                       return columns([&](const Matrix& b) -> Matrix { return x.matrix() * b - b * x.matrix(); });
                     }};
  return {"sl2_adjoint", std::move(rep), false,
          GroupElement(group, -Matrix::Identity(2, 2)), {},
          "conjugation on sl(2); -I acts trivially"};
}

inline CatalogEntry trivial(int n) {
  const std::string name = "trivial(" + std::to_string(n) + ")";
  Representation rep{name, GroupSpec::circle(), n,
                     [n](const GroupElement&) -> Matrix { return Matrix::Identity(n, n); },
                     [n](const AlgebraElement&) -> Matrix { return Matrix::Zero(n, n); }};
  std::vector<SubspaceBasis> subspaces;
  if (n >= 2) subspaces.emplace_back(n, Matrix(Matrix::Identity(n, n).leftCols(1)));
  return {name, std::move(rep), false, GroupElement::circle(1.0), std::move(subspaces),
          "every element acts as the identity"};
}

/// GL(1) on R2 by [[1, log|a|], [0, 1]]: reducible but not completely
/// reducible; a and -a act the same way.
inline CatalogEntry gl1_log_unipotent() {
  Representation rep{"gl1_log_unipotent", GroupSpec::general_linear(1), 2,
                     [](const GroupElement& a) -> Matrix {
                       Matrix m = Matrix::Identity(2, 2);
                       m(0, 1) = std::log(std::abs(a.matrix()(0, 0)));
                       return m;
                     },
                     [](const AlgebraElement& b) -> Matrix {
                       Matrix m = Matrix::Zero(2, 2);
                       m(0, 1) = b.matrix()(0, 0);
                       return m;
                     }};
  return {"gl1_log_unipotent", std::move(rep), false, GroupElement(GroupSpec::general_linear(1), -Matrix::Identity(1, 1)),
          {SubspaceBasis(2, Matrix(Matrix::Identity(2, 2).leftCols(1)))},
          "span{e1} is invariant and has no invariant complement"};
}

}  // namespace catalog_detail

/// Direct sum of two entries on the same group. Each summand is declared
/// invariant, along with the embedded invariant subspaces of each side.
inline CatalogEntry make_composite(const CatalogEntry& first, const CatalogEntry& second) {
  const int n1 = first.rep.target_dim, n2 = second.rep.target_dim, n = n1 + n2;
  CatalogEntry out;
  out.name = first.name + "+" + second.name;
  out.rep = direct_sum(first.rep, second.rep);
  out.rep.name = out.name;
  out.known_faithful = first.known_faithful || second.known_faithful;
  // a witness of one summand is a witness of the sum if the other summand fixes it
  auto acts_trivially = [](const Representation& rep, const GroupElement& k) {
    return max_abs(rep.apply(k) - Matrix::Identity(rep.target_dim, rep.target_dim)) < 1e-12;
  };
  if (!out.known_faithful) {
    if (first.kernel_witness && acts_trivially(second.rep, *first.kernel_witness))
      out.kernel_witness = first.kernel_witness;
    else if (second.kernel_witness && acts_trivially(first.rep, *second.kernel_witness))
      out.kernel_witness = second.kernel_witness;
  }
  Matrix head = Matrix::Zero(n, n1), tail = Matrix::Zero(n, n2);
  head.topRows(n1) = Matrix::Identity(n1, n1);
  tail.bottomRows(n2) = Matrix::Identity(n2, n2);
  out.known_invariant_subspaces.emplace_back(n, head);
  out.known_invariant_subspaces.emplace_back(n, tail);
  for (const auto& u : first.known_invariant_subspaces) {
    Matrix v = Matrix::Zero(n, u.dim());
    v.topRows(n1) = u.vectors();
    out.known_invariant_subspaces.emplace_back(n, v);
  }
  for (const auto& u : second.known_invariant_subspaces) {
    Matrix v = Matrix::Zero(n, u.dim());
    v.bottomRows(n2) = u.vectors();
    out.known_invariant_subspaces.emplace_back(n, v);
  }
  out.notes = "direct sum of " + first.name + " and " + second.name;
  return out;
}

/// Checks an entry's declarations: homomorphism at 1e-9, declared invariant
/// subspaces, and that a declared kernel witness really collides under
/// prolongation. Throws CatalogError with a diagnostic on the first failure.
inline void verify_entry(const CatalogEntry& entry, int samples = 20, std::uint64_t seed = 0) {
  const auto hom = check_homomorphism(entry.rep, samples, seed, 1e-9);
  if (!hom.passed())
    throw CatalogError(entry.name + ": homomorphism residual " + std::to_string(hom.max_residual));
  for (const auto& u : entry.known_invariant_subspaces) {
    const auto inv = is_invariant_subspace(entry.rep, u, samples, seed, 1e-9);
    if (!inv.passed())
      throw CatalogError(entry.name + ": declared invariant subspace fails, defect " + std::to_string(inv.max_residual));
  }
  if (entry.kernel_witness) {
    const auto probe = faithfulness_probe(entry.rep, 1, seed, entry.kernel_witness);
    if (!probe.failed()) throw CatalogError(entry.name + ": declared kernel witness does not collide");
  }
}

namespace catalog_detail {

inline std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> entries{
      circle_rotation(), circle_winding_2(), gl_identity(1), gl_identity(2), gl_identity(3),
      so3_standard(),    sl2_standard(),     sl2_adjoint(),  trivial(1),     trivial(2),
      gl1_log_unipotent(),
  };
  auto find = [&entries](std::string_view name) -> const CatalogEntry& {
    for (const auto& e : entries)
      if (e.name == name) return e;
    throw UnknownRepresentation(std::string(name));
  };
  const std::pair<std::string_view, std::string_view> composites[] = {
      {"circle_rotation", "circle_rotation"}, {"circle_rotation", "circle_winding_2"},
      {"circle_winding_2", "trivial(1)"},     {"gl_identity(2)", "gl_identity(2)"},
      {"so3_standard", "so3_standard"},       {"sl2_standard", "sl2_adjoint"},
  };
  std::vector<CatalogEntry> sums;
  for (const auto& [a, b] : composites) sums.push_back(make_composite(find(a), find(b)));
  for (auto& s : sums) entries.push_back(std::move(s));
  for (const auto& e : entries) verify_entry(e);
  return entries;
}

}  // namespace catalog_detail

/// Every built-in entry, verified on first access.
inline const std::vector<CatalogEntry>& catalog_list() {
  static const std::vector<CatalogEntry> entries = catalog_detail::build_catalog();
  return entries;
}

namespace catalog_detail {

inline std::optional<int> parse_family(std::string_view name, std::string_view family) {
  if (name.size() <= family.size() + 2 || name.substr(0, family.size()) != family || name[family.size()] != '(' ||
      name.back() != ')')
    return std::nullopt;
  const auto digits = name.substr(family.size() + 1, name.size() - family.size() - 2);
  if (digits.empty() || digits.size() > 3) return std::nullopt;
  int n = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
    n = 10 * n + (c - '0');
  }
  return n >= 1 ? std::optional<int>(n) : std::nullopt;
}

}  // namespace catalog_detail

/// Looks up a built-in entry. Also accepts gl_identity(n) and trivial(n) for
/// any n >= 1, and `a+b` direct sums of resolvable names.
inline CatalogEntry catalog_lookup(std::string_view name) {
  for (const auto& e : catalog_list())
    if (e.name == name) return e;
  if (auto n = catalog_detail::parse_family(name, "gl_identity")) return catalog_detail::gl_identity(*n);
  if (auto n = catalog_detail::parse_family(name, "trivial")) return catalog_detail::trivial(*n);
  if (const auto plus = name.find('+'); plus != std::string_view::npos) {
    auto entry = make_composite(catalog_lookup(name.substr(0, plus)), catalog_lookup(name.substr(plus + 1)));
    verify_entry(entry);
    return entry;
  }
  throw UnknownRepresentation("no catalog representation named '" + std::string(name) + "'");
}

}  // namespace tangent_rep
