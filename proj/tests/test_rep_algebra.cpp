#include <gtest/gtest.h>

#include <numbers>
#include <string>

#include "tangent_rep/catalog.hpp"
#include "tangent_rep/rep_algebra.hpp"
#include "tangent_rep/suites.hpp"

using namespace tangent_rep;

namespace {

Representation perturbed(const Representation& rep, double eps) {
  Representation out = rep;
  out.name = rep.name + "~";
  out.apply_fn = [rep, eps](const GroupElement& a) -> Matrix {
    Matrix m = rep.apply(a);
    m(0, 0) += eps * a.matrix()(0, 1);  // zero at the identity, so Phi(e) = I still holds
    return m;
  };
  return out;
}

SubspaceBasis span(int n, std::initializer_list<std::initializer_list<double>> cols) {
  Matrix m(n, static_cast<Eigen::Index>(cols.size()));
  Eigen::Index j = 0;
  for (const auto& c : cols) {
    Eigen::Index i = 0;
    for (double x : c) m(i++, j) = x;
    ++j;
  }
  return {n, m};
}

}  // namespace

// --- homomorphism -----------------------------------------------------------

TEST(CheckHomomorphism, Examples) {
  const auto gl3 = check_homomorphism(catalog_lookup("gl_identity(3)").rep, 1000, 0, 1e-9);
  EXPECT_TRUE(gl3.passed());
  EXPECT_LT(gl3.max_residual, 1e-13);
  EXPECT_TRUE(check_homomorphism(catalog_lookup("circle_rotation").rep, 200, 1, 1e-9).passed());

  const auto bad = check_homomorphism(perturbed(catalog_lookup("circle_rotation").rep, 1e-3), 200, 2, 1e-9);
  EXPECT_TRUE(bad.failed());
  ASSERT_TRUE(bad.witness.has_value());
  EXPECT_TRUE(bad.witness->sample_index.has_value());
  EXPECT_EQ(bad.witness->seed, 2u);
  EXPECT_GT(bad.max_residual, 1e-5);
  EXPECT_LT(bad.max_residual, 1e-2);
}

TEST(CheckHomomorphism, WitnessReplaysFromSeedAndIndex) {
  const auto rep = perturbed(catalog_lookup("circle_rotation").rep, 1e-3);
  const auto report = check_homomorphism(rep, 50, 77, 1e-9);
  ASSERT_TRUE(report.witness && report.witness->sample_index);
  Rng rng(77);
  double replayed = 0.0;
  for (std::int64_t i = 0; i <= *report.witness->sample_index; ++i) {
    const auto a = sample_group_element(rep.group, rng);
    const auto b = sample_group_element(rep.group, rng);
    replayed = relative_residual(rep.apply(a * b), rep.apply(a) * rep.apply(b));
  }
  EXPECT_EQ(replayed, report.max_residual);
}

TEST(CheckHomomorphism, SampleCountMustBePositive) {
  EXPECT_THROW(check_homomorphism(catalog_lookup("circle_rotation").rep, 0, 0, 1e-9), DimensionError);
}

// --- intertwiners -----------------------------------------------------------

TEST(Intertwiner, Examples) {
  const auto circle = catalog_lookup("circle_rotation").rep;
  const auto same = is_intertwiner({Matrix::Identity(2, 2)}, circle, circle, 100, 0, 1e-12);
  EXPECT_TRUE(same.passed());
  EXPECT_EQ(same.max_residual, 0.0);

  Rng rng(3);
  const Matrix a0 = random_invertible(2, rng);
  const auto conj = conjugate(circle, a0);
  EXPECT_TRUE(is_intertwiner({a0}, circle, conj, 200, 1, 1e-9).passed());

  // circle_rotation and circle_winding_2 are inequivalent; a generic map fails
  const auto winding = catalog_lookup("circle_winding_2").rep;
  const auto miss = is_intertwiner({random_invertible(2, rng)}, circle, winding, 50, 2, 1e-9);
  EXPECT_TRUE(miss.failed());
  EXPECT_GT(miss.max_residual, 1e-2);

  EXPECT_THROW(is_intertwiner({Matrix::Identity(3, 3)}, circle, circle, 10, 0, 1e-9), DimensionError);
}

TEST(Intertwiner, RectangularMapsIntoDirectSum) {
  const auto circle = catalog_lookup("circle_rotation").rep;
  const auto sum = direct_sum(circle, catalog_lookup("circle_winding_2").rep);
  Matrix inclusion = Matrix::Zero(4, 2);
  inclusion.topRows(2) = Matrix::Identity(2, 2);
  EXPECT_TRUE(is_intertwiner({inclusion}, circle, sum, 100, 0, 1e-12).passed());
  EXPECT_FALSE(Intertwiner{inclusion}.full_rank());
}

TEST(ProlongIntertwiner, Examples) {
  EXPECT_EQ(prolong_intertwiner({Matrix::Identity(3, 3)}).matrix, Matrix::Identity(6, 6));
  Matrix two(1, 1);
  two << 2.0;
  Matrix expected(2, 2);
  expected << 2, 0, 0, 2;
  EXPECT_EQ(prolong_intertwiner({two}).matrix, expected);
}

TEST(ProlongIntertwiner, TransfersEquivalence) {
  for (const char* name : {"circle_rotation", "so3_standard", "sl2_adjoint", "gl1_log_unipotent"}) {
    const auto rep = catalog_lookup(name).rep;
    Rng rng(4);
    const Intertwiner a0{random_invertible(rep.target_dim, rng)};
    const auto conj = conjugate(rep, a0.matrix);
    const auto ta = prolong_intertwiner(a0);
    EXPECT_TRUE(ta.full_rank());
    EXPECT_TRUE(is_prolonged_intertwiner(ta, rep, conj, 200, 5, 1e-9).passed()) << name;
  }
}

TEST(ProlongIntertwiner, RankDeficientMapIsStillProlonged) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  const auto ta = prolong_intertwiner({a});
  EXPECT_EQ(ta.matrix.rows(), 4);
  EXPECT_FALSE(ta.full_rank());
}

// --- subspaces --------------------------------------------------------------

TEST(SubspaceBasisType, Validation) {
  EXPECT_THROW(span(2, {{1, 0}, {2, 0}}), DimensionError);
  EXPECT_THROW(SubspaceBasis(0, Matrix(0, 0)), DimensionError);
  EXPECT_EQ(SubspaceBasis::zero(3).dim(), 0);
  EXPECT_EQ(SubspaceBasis::span_of(3, Matrix::Ones(3, 2)).dim(), 1);
}

TEST(InvariantSubspace, Examples) {
  const auto circle = catalog_lookup("circle_rotation").rep;
  EXPECT_TRUE(is_invariant_subspace(circle, SubspaceBasis::full(2), 50, 0, 1e-9).passed());
  EXPECT_TRUE(is_invariant_subspace(circle, SubspaceBasis::zero(2), 50, 0, 1e-9).passed());
  EXPECT_TRUE(is_invariant_subspace(circle, span(2, {{1, 0}}), 50, 0, 1e-9).failed());
  // rotation by pi/2 sends (1,0) to (0,-1): the projection residual is 1
  EXPECT_NEAR(invariance_defect(GroupElement::circle(std::numbers::pi / 2).matrix(), span(2, {{1, 0}})), 1.0, 1e-15);
  EXPECT_THROW(is_invariant_subspace(circle, SubspaceBasis::full(3), 10, 0, 1e-9), DimensionError);
}

TEST(ProlongSubspace, Examples) {
  const auto tu = prolong_subspace(span(2, {{1, 0}}));
  Matrix expected = Matrix::Zero(4, 2);
  expected(0, 0) = 1.0;
  expected(2, 1) = 1.0;
  EXPECT_EQ(tu.vectors(), expected);
  EXPECT_EQ(prolong_subspace(SubspaceBasis::full(3)).dim(), 6);
}

TEST(ProlongSubspace, TransferBothDirections) {
  const auto entry = catalog_lookup("gl1_log_unipotent");
  const auto& u = entry.known_invariant_subspaces.front();
  EXPECT_TRUE(is_invariant_subspace(entry.rep, u, 100, 0, 1e-9).passed());
  EXPECT_TRUE(is_invariant_subspace_prolonged(entry.rep, prolong_subspace(u), 100, 0, 1e-9).passed());
  EXPECT_TRUE(invariance_from_prolongation(entry.rep, prolong_subspace(u), 100, 0, 1e-9).passed());

  // a non-invariant U gives a non-invariant TU, and the backward check sees it
  const auto bad = span(2, {{0, 1}});
  EXPECT_TRUE(is_invariant_subspace(entry.rep, bad, 100, 0, 1e-9).failed());
  EXPECT_TRUE(is_invariant_subspace_prolonged(entry.rep, prolong_subspace(bad), 100, 0, 1e-9).failed());
  EXPECT_TRUE(invariance_from_prolongation(entry.rep, prolong_subspace(bad), 100, 0, 1e-9).failed());
}

TEST(ProlongSubspace, BaseSubspaceRecoversU) {
  const auto u = span(3, {{1, 2, 0}, {0, 1, 1}});
  const auto back = base_subspace(prolong_subspace(u));
  EXPECT_EQ(back.dim(), 2);
  EXPECT_NEAR(invariance_defect(Matrix::Identity(3, 3), back), 0.0, 1e-15);
  const Matrix q = back.orthonormal();
  EXPECT_LT((u.vectors() - q * (q.transpose() * u.vectors())).norm(), 1e-12);
}

TEST(VerticalSubspace, InvariantForEveryCatalogEntry) {
  for (const auto& entry : catalog_list())
    EXPECT_TRUE(is_invariant_subspace_prolonged(entry.rep, vertical_subspace(entry.rep.target_dim), 100, 0, 1e-9)
                    .passed())
        << entry.name;
}

TEST(VerticalSubspace, CircleCounterexample) {
  // {(0, 0, x, y)} in TR^2 is a proper invariant subspace of the prolonged rotation
  const auto circle = catalog_lookup("circle_rotation").rep;
  const auto fiber = span(4, {{0, 0, 1, 0}, {0, 0, 0, 1}});
  EXPECT_TRUE(is_invariant_subspace_prolonged(circle, fiber, 200, 0, 1e-9).passed());
}

// --- commutant --------------------------------------------------------------

TEST(Commutant, IdentityRepresentationHasScalarCommutant) {
  const auto c = commutant_basis(catalog_lookup("gl_identity(2)").rep, 4, 0);
  ASSERT_EQ(c.dim(), 1);
  EXPECT_TRUE(c.conclusive);
  const Matrix& m = c.basis.front();
  EXPECT_LT(max_abs(m - m(0, 0) * Matrix::Identity(2, 2)), 1e-12);
}

TEST(Commutant, CircleCommutantIsSpannedByIdentityAndGenerator) {
  const auto c = commutant_basis(catalog_lookup("circle_rotation").rep, 4, 0);
  ASSERT_EQ(c.dim(), 2);
  // hand solution of [M, R] = 0 for a rotation R: M = x I + y J
  for (const auto& m : c.basis) {
    EXPECT_NEAR(m(0, 0), m(1, 1), 1e-12);
    EXPECT_NEAR(m(0, 1), -m(1, 0), 1e-12);
  }
}

TEST(Commutant, DirectSumOfTwoCopiesHasDimensionFour) {
  const auto rep = catalog_lookup("gl_identity(2)").rep;
  EXPECT_EQ(commutant_basis(direct_sum(rep, rep), 4, 0).dim(), 4);
}

TEST(Commutant, TooFewSamplesIsInconclusive) {
  EXPECT_FALSE(commutant_basis(catalog_lookup("gl_identity(2)").rep, 1, 0).conclusive);
  EXPECT_FALSE(commutant_of({}).conclusive);
}

TEST(Commutant, ElementsCommuteWithFreshSamples) {
  for (const char* name : {"so3_standard+so3_standard", "sl2_standard+sl2_adjoint", "gl1_log_unipotent"}) {
    const auto rep = catalog_lookup(name).rep;
    const auto c = commutant_basis(rep, 6, 1);
    Rng rng(99);
    for (int i = 0; i < 10; ++i) {
      const Matrix g = rep.apply(sample_group_element(rep.group, rng));
      for (const auto& m : c.basis) EXPECT_LT(max_abs(m * g - g * m), 1e-9) << name;
    }
  }
}

// --- reducibility -----------------------------------------------------------

TEST(ReducibilityProbe, Examples) {
  EXPECT_EQ(reducibility_probe(catalog_lookup("gl_identity(2)").rep, 10, 0).verdict, Reducibility::Irreducible);

  const auto circle = catalog_lookup("circle_rotation").rep;
  const auto doubled = reducibility_probe(direct_sum(circle, circle), 10, 0);
  ASSERT_EQ(doubled.verdict, Reducibility::Reducible);
  ASSERT_TRUE(doubled.witness.has_value());
  EXPECT_EQ(doubled.witness->dim(), 2);
  EXPECT_TRUE(is_invariant_subspace(direct_sum(circle, circle), *doubled.witness, 100, 5, 1e-8).passed());

  const auto single = reducibility_probe(circle, 10, 0);
  EXPECT_EQ(single.verdict, Reducibility::Inconclusive);
  EXPECT_EQ(single.commutant_dim, 2);
}

TEST(ReducibilityProbe, NonSplitReducibleRepresentation) {
  const auto probe = reducibility_probe(catalog_lookup("gl1_log_unipotent").rep, 10, 0);
  ASSERT_EQ(probe.verdict, Reducibility::Reducible);
  EXPECT_EQ(probe.witness->dim(), 1);
  EXPECT_NEAR(std::abs(probe.witness->orthonormal()(0, 0)), 1.0, 1e-9);
}

TEST(ReducibilityProbe, ReducibleImpliesProlongedWitnessIsInvariant) {
  for (const auto& entry : catalog_list()) {
    const auto probe = reducibility_probe(entry.rep, 10, 0);
    if (probe.verdict != Reducibility::Reducible) continue;
    EXPECT_TRUE(is_invariant_subspace_prolonged(entry.rep, prolong_subspace(*probe.witness), 100, 0, 1e-8).passed())
        << entry.name;
  }
}

TEST(CertifyIrreducible2d, CircleHasNoInvariantLine) {
  const auto report = certify_irreducible_2d(catalog_lookup("circle_rotation").rep, 10, 0);
  EXPECT_TRUE(report.passed());
  EXPECT_GT(report.max_residual, 0.1);
}

TEST(CertifyIrreducible2d, FindsTheInvariantLine) {
  const auto report = certify_irreducible_2d(catalog_lookup("gl1_log_unipotent").rep, 10, 0);
  EXPECT_TRUE(report.failed());
  ASSERT_TRUE(report.witness.has_value());
  const double phi = report.witness->data.at(0);
  EXPECT_LT(std::abs(std::sin(phi)), 1e-6);  // the line is span{e1}
  EXPECT_THROW(certify_irreducible_2d(catalog_lookup("so3_standard").rep, 5, 0), DimensionError);
}

// --- direct sums ------------------------------------------------------------

TEST(DirectSum, Examples) {
  const auto t = catalog_lookup("trivial(1)").rep;
  const auto tt = direct_sum(t, t);
  EXPECT_EQ(tt.target_dim, 2);
  EXPECT_EQ(tt.apply(GroupElement::circle(0.4)), Matrix::Identity(2, 2));

  const auto circle = catalog_lookup("circle_rotation").rep;
  const auto mixed = direct_sum(circle, catalog_lookup("circle_winding_2").rep);
  const Matrix image = mixed.apply(GroupElement::circle(0.7));
  EXPECT_EQ(max_abs(image.topRightCorner(2, 2)), 0.0);
  EXPECT_EQ(max_abs(image.bottomLeftCorner(2, 2)), 0.0);

  const auto gl = catalog_lookup("gl_identity(2)").rep;
  EXPECT_TRUE(check_homomorphism(direct_sum(gl, gl), 200, 0, 1e-9).passed());
  EXPECT_THROW(direct_sum(circle, gl), SpecMismatch);
}

TEST(InterleavePermutation, Examples) {
  EXPECT_EQ(interleave_permutation(1, 1), (std::vector<int>{0, 2, 1, 3}));
  // enumerate coordinate labels: source (p1a, p1b, p2, v1a, v1b, v2), target (p1a, p1b, v1a, v1b, p2, v2)
  const std::vector<std::string> source{"p1a", "p1b", "p2", "v1a", "v1b", "v2"};
  const std::vector<std::string> target{"p1a", "p1b", "v1a", "v1b", "p2", "v2"};
  std::vector<int> expected;
  for (const auto& label : target)
    expected.push_back(static_cast<int>(std::find(source.begin(), source.end(), label) - source.begin()));
  EXPECT_EQ(interleave_permutation(2, 1), expected);
  EXPECT_EQ(expected, (std::vector<int>{0, 1, 3, 4, 2, 5}));
  EXPECT_THROW(interleave_permutation(0, 1), DimensionError);
}

TEST(InterleavePermutation, ConjugationIdentity) {
  const auto a = catalog_lookup("circle_rotation").rep;
  const auto b = catalog_lookup("circle_winding_2").rep;
  EXPECT_EQ(direct_sum_commutation_residual(a, b, TangentGroupElement::identity(a.group)), 0.0);
  EXPECT_TRUE(check_direct_sum_commutation(a, b, 200, 0, 1e-12).passed());
  const auto so3 = catalog_lookup("so3_standard").rep;
  EXPECT_TRUE(check_direct_sum_commutation(so3, so3, 200, 0, 1e-12).passed());
}

// --- faithfulness -----------------------------------------------------------

TEST(FaithfulnessProbe, Examples) {
  EXPECT_TRUE(faithfulness_probe(catalog_lookup("gl_identity(2)").rep, 1000, 0).passed());

  const auto winding = catalog_lookup("circle_winding_2");
  const auto collision = faithfulness_probe(winding.rep, 100, 0, winding.kernel_witness);
  EXPECT_TRUE(collision.failed());
  ASSERT_TRUE(collision.witness.has_value());
  EXPECT_NE(collision.witness->note.find("kernel"), std::string::npos);
  const TangentGroupElement k{GroupElement::circle(std::numbers::pi), AlgebraElement::zero(GroupSpec::circle())};
  EXPECT_LT(max_abs(prolong(winding.rep, k).dense() - Matrix::Identity(4, 4)), 1e-15);

  // no declared witness: sampled pairs of the trivial representation collide
  EXPECT_TRUE(faithfulness_probe(catalog_lookup("trivial(2)").rep, 10, 0).failed());
}

TEST(FaithfulnessProbe, WindingWithoutWitnessIsNotCaughtBySampling) {
  // random pairs almost never differ by the kernel element, so only the
  // declared witness exposes the collision
  EXPECT_TRUE(faithfulness_probe(catalog_lookup("circle_winding_2").rep, 200, 0).passed());
}
