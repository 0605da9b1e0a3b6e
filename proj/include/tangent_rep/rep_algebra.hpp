#pragma once

// Executable structure theory for representations and their prolongations:
// homomorphism checks, intertwiners, invariant subspaces, commutants, direct
// sums, and a faithfulness probe. Every sampled check is deterministic in its
// seed and reports the index of its worst sample so a failure can be replayed.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lie_core.hpp"
#include "prolongation.hpp"
#include "tv_space.hpp"

namespace tangent_rep {

/// Relative singular-value threshold separating a numerical nullspace from
/// double-precision noise.
inline constexpr double kRankTol = 1e-8;

enum class Verdict { Pass, Fail, Inconclusive };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct Witness {
  std::string note;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> sample_index;
  std::vector<double> data;
};

struct CheckReport {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  double max_residual = 0.0;
  std::optional<Witness> witness;

  bool passed() const { return verdict == Verdict::Pass; }
  bool failed() const { return verdict == Verdict::Fail; }
};

namespace detail {

/// Runs `residual(rng, index)` for index = 0..count-1 on one generator seeded
/// with `seed`; Pass iff every residual is below tol.
template <class ResidualFn>
CheckReport sampled_check(std::string name, int count, std::uint64_t seed, double tol, ResidualFn&& residual) {
  if (count < 1) throw DimensionError(name + ": sample count must be at least 1");
  Rng rng(seed);
  CheckReport report{std::move(name), Verdict::Pass, 0.0, std::nullopt};
  std::int64_t worst = -1;
  for (int i = 0; i < count; ++i) {
    const double r = residual(rng, i);
    if (!(r <= report.max_residual)) {  // also catches NaN
      report.max_residual = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
      worst = i;
    }
  }
  if (!(report.max_residual < tol)) {
    report.verdict = Verdict::Fail;
    report.witness = Witness{"worst sample", seed, worst, {}};
  }
  return report;
}

inline std::vector<double> flatten(const Matrix& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Homomorphism

/// Max over sampled pairs of the relative residual of Phi(ab) against
/// Phi(a) Phi(b), together with Phi(e) against I.
inline CheckReport check_homomorphism(const Representation& rep, int sample_count, std::uint64_t seed, double tol) {
  const double identity_residual =
      relative_residual(rep.apply(GroupElement::identity(rep.group)), Matrix::Identity(rep.target_dim, rep.target_dim));
  auto report = detail::sampled_check("homomorphism", sample_count, seed, tol, [&](Rng& rng, int) {
    const GroupElement a = sample_group_element(rep.group, rng);
    const GroupElement b = sample_group_element(rep.group, rng);
    return relative_residual(rep.apply(a * b), rep.apply(a) * rep.apply(b));
  });
  if (identity_residual > report.max_residual) report.max_residual = identity_residual;
  if (!(report.max_residual < tol) && !report.witness) {
    report.verdict = Verdict::Fail;
    report.witness = Witness{"Phi(identity) differs from I", seed, std::nullopt, {}};
  }
  return report;
}

/// prolong(X Y) against prolong(X) prolong(Y) over sampled tangent pairs.
inline CheckReport check_prolonged_homomorphism(const Representation& rep, int sample_count, std::uint64_t seed,
                                                double tol) {
  return detail::sampled_check("prolonged_homomorphism", sample_count, seed, tol, [&](Rng& rng, int) {
    const auto x = sample_tangent_element(rep.group, rng);
    const auto y = sample_tangent_element(rep.group, rng);
    return relative_residual(prolong(rep, tg_multiply(x, y)).dense(), (prolong(rep, x) * prolong(rep, y)).dense());
  });
}

/// jn_embed(X Y) against jn_embed(X) jn_embed(Y) for the group's own TG.
inline CheckReport check_embedding_homomorphism(const GroupSpec& group, int sample_count, std::uint64_t seed,
                                                double tol) {
  return detail::sampled_check("embedding_homomorphism", sample_count, seed, tol, [&](Rng& rng, int) {
    const auto x = sample_tangent_element(group, rng);
    const auto y = sample_tangent_element(group, rng);
    return relative_residual(jn_embed(tg_multiply(x, y)).dense(), (jn_embed(x) * jn_embed(y)).dense());
  });
}

/// Block formula against the finite-difference tangent action on sampled
/// (X, Y). Inputs Y have entries uniform in [-1, 1].
inline CheckReport check_oracle(const Representation& rep, int sample_count, std::uint64_t seed, double tol) {
  return detail::sampled_check("oracle", sample_count, seed, tol, [&](Rng& rng, int) {
    const auto x = sample_tangent_element(rep.group, rng);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Vector p(rep.target_dim), v(rep.target_dim);
    for (auto& e : p) e = uniform(rng);
    for (auto& e : v) e = uniform(rng);
    const TangentVector y(p, v);
    const TangentVector direct = apply_prolonged(prolong(rep, x), y);
    const TangentVector oracle = tangent_action_oracle(rep, x, y);
    return relative_residual(direct.stacked(), oracle.stacked());
  });
}

// ---------------------------------------------------------------------------
// Intertwiners

/// A linear map from the source representation space (cols) to the target
/// representation space (rows).
struct Intertwiner {
  Matrix matrix;

  bool full_rank() const {
    if (matrix.size() == 0) return false;
    Eigen::JacobiSVD<Matrix> svd(matrix);
    const auto& s = svd.singularValues();
    return matrix.rows() == matrix.cols() && s(s.size() - 1) > kRankTol * s(0);
  }
};

/// Max over sampled a of || A Phi(a) - Phi'(a) A || (relative).
inline CheckReport is_intertwiner(const Intertwiner& a, const Representation& source, const Representation& target,
                                  int samples, std::uint64_t seed, double tol) {
  if (a.matrix.rows() != target.target_dim || a.matrix.cols() != source.target_dim)
    throw DimensionError("is_intertwiner: map shape does not match the representations");
  if (!(source.group == target.group)) throw SpecMismatch("is_intertwiner: representations of different groups");
  return detail::sampled_check("intertwiner", samples, seed, tol, [&](Rng& rng, int) {
    const GroupElement g = sample_group_element(source.group, rng);
    return relative_residual(a.matrix * source.apply(g), target.apply(g) * a.matrix);
  });
}

/// Same as is_intertwiner, for a 2m x 2n map between the prolongations, over
/// sampled tangent elements.
inline CheckReport is_prolonged_intertwiner(const Intertwiner& ta, const Representation& source,
                                            const Representation& target, int samples, std::uint64_t seed,
                                            double tol) {
  if (ta.matrix.rows() != 2 * target.target_dim || ta.matrix.cols() != 2 * source.target_dim)
    throw DimensionError("is_prolonged_intertwiner: map shape does not match the prolongations");
  if (!(source.group == target.group)) throw SpecMismatch("is_prolonged_intertwiner: different groups");
  return detail::sampled_check("prolonged_intertwiner", samples, seed, tol, [&](Rng& rng, int) {
    const auto x = sample_tangent_element(source.group, rng);
    return relative_residual(ta.matrix * prolong(source, x).dense(), prolong(target, x).dense() * ta.matrix);
  });
}

/// TA = [[A, 0], [0, A]] on trivialized coordinates. A rank-deficient A is
/// still prolonged; check full_rank() before reading an intertwining as an
/// equivalence.
inline Intertwiner prolong_intertwiner(const Intertwiner& a) { return {block_diagonal(a.matrix, a.matrix)}; }

/// Phi'(a) = A0 Phi(a) A0^-1, with dPhi' conjugated the same way.
inline Representation conjugate(const Representation& rep, const Matrix& a0) {
  if (a0.rows() != rep.target_dim || a0.cols() != rep.target_dim)
    throw DimensionError("conjugate: matrix size does not match the representation");
  Eigen::FullPivLU<Matrix> lu(a0);
  if (!lu.isInvertible()) throw SingularMatrix("conjugate: matrix is singular");
  const Matrix inv = lu.inverse();
  Representation out = rep;
  out.name = "conj(" + rep.name + ")";
  out.apply_fn = [base = rep, a0, inv](const GroupElement& g) -> Matrix { return a0 * base.apply(g) * inv; };
  if (rep.has_differential())
    out.differential_fn = [base = rep, a0, inv](const AlgebraElement& b) -> Matrix {
      return a0 * *base.analytic_differential(b) * inv;
    };
  return out;
}

// ---------------------------------------------------------------------------
// Subspaces

/// Linearly independent columns spanning a subspace of R^ambient_dim. A basis
/// with zero columns is the zero subspace.
class SubspaceBasis {
 public:
  SubspaceBasis(int ambient_dim, Matrix vectors) : ambient_dim_(ambient_dim), vectors_(std::move(vectors)) {
    if (ambient_dim_ < 1) throw DimensionError("SubspaceBasis: ambient dimension must be positive");
    if (vectors_.cols() == 0) vectors_.resize(ambient_dim_, 0);
    if (vectors_.rows() != ambient_dim_) throw DimensionError("SubspaceBasis: vector length differs from ambient");
    if (vectors_.cols() > ambient_dim_) throw DimensionError("SubspaceBasis: more vectors than the ambient dimension");
    if (!vectors_.allFinite()) throw DimensionError("SubspaceBasis: non-finite entries");
    if (vectors_.cols() > 0 && numerical_rank(vectors_) != vectors_.cols())
      throw DimensionError("SubspaceBasis: vectors are linearly dependent");
  }

  static SubspaceBasis full(int n) { return {n, Matrix::Identity(n, n)}; }
  static SubspaceBasis zero(int n) { return {n, Matrix(n, 0)}; }

  /// Span of the given columns after discarding dependent ones.
  static SubspaceBasis span_of(int ambient_dim, const Matrix& columns) {
    if (columns.cols() == 0) return zero(ambient_dim);
    Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
    const auto r = numerical_rank(columns);
    return {ambient_dim, svd.matrixU().leftCols(r)};
  }

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return static_cast<int>(vectors_.cols()); }
  const Matrix& vectors() const { return vectors_; }

  Matrix orthonormal() const {
    if (dim() == 0) return Matrix(ambient_dim_, 0);
    Eigen::HouseholderQR<Matrix> qr(vectors_);
    return qr.householderQ() * Matrix::Identity(ambient_dim_, dim());
  }

  static Eigen::Index numerical_rank(const Matrix& m, double rel_tol = kRankTol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > rel_tol * s(0)) ++r;
    return r;
  }

 private:
  int ambient_dim_;
  Matrix vectors_;
};

/// Largest relative distance from span(U) of op q, over an orthonormal basis q
/// of U, measured by least-squares projection.
inline double invariance_defect(const Matrix& op, const SubspaceBasis& u) {
  if (op.rows() != u.ambient_dim() || op.cols() != u.ambient_dim())
    throw DimensionError("invariance_defect: operator does not act on the subspace's ambient space");
  if (u.dim() == 0 || u.dim() == u.ambient_dim()) return 0.0;
  const Matrix q = u.orthonormal();
  const Matrix image = op * q;
  const Matrix outside = image - q * (q.transpose() * image);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < image.cols(); ++j) {
    const double norm = image.col(j).norm();
    worst = std::max(worst, norm > 0.0 ? outside.col(j).norm() / norm : 0.0);
  }
  return worst;
}

inline CheckReport is_invariant_subspace(const Representation& rep, const SubspaceBasis& u, int samples,
                                         std::uint64_t seed, double tol) {
  if (u.ambient_dim() != rep.target_dim) throw DimensionError("is_invariant_subspace: wrong ambient dimension");
  return detail::sampled_check("invariant_subspace", samples, seed, tol, [&](Rng& rng, int) {
    return invariance_defect(rep.apply(sample_group_element(rep.group, rng)), u);
  });
}

/// Invariance of a subspace of the 2n-dimensional TV under the prolongation,
/// over sampled tangent elements.
inline CheckReport is_invariant_subspace_prolonged(const Representation& rep, const SubspaceBasis& tu, int samples,
                                                   std::uint64_t seed, double tol) {
  if (tu.ambient_dim() != 2 * rep.target_dim)
    throw DimensionError("is_invariant_subspace_prolonged: wrong ambient dimension");
  return detail::sampled_check("prolonged_invariant_subspace", samples, seed, tol, [&](Rng& rng, int) {
    return invariance_defect(prolong(rep, sample_tangent_element(rep.group, rng)).dense(), tu);
  });
}

/// TU: the vectors (u_i, 0) followed by (0, u_i).
inline SubspaceBasis prolong_subspace(const SubspaceBasis& u) {
  const int n = u.ambient_dim();
  const int k = u.dim();
  Matrix out = Matrix::Zero(2 * n, 2 * k);
  out.topLeftCorner(n, k) = u.vectors();
  out.bottomRightCorner(n, k) = u.vectors();
  return {2 * n, std::move(out)};
}

/// The fiber directions {(0, v)} of TV.
inline SubspaceBasis vertical_subspace(int n) {
  Matrix out = Matrix::Zero(2 * n, n);
  out.bottomRows(n) = Matrix::Identity(n, n);
  return {2 * n, std::move(out)};
}

/// Base components of the horizontal vectors of a subspace of TV: for TU this
/// recovers U.
inline SubspaceBasis base_subspace(const SubspaceBasis& tu) {
  const int n = tu.ambient_dim() / 2;
  if (2 * n != tu.ambient_dim()) throw DimensionError("base_subspace: ambient dimension must be even");
  // horizontal part: vectors of TU whose fiber component vanishes
  const Matrix v = tu.vectors();
  if (v.cols() == 0) return SubspaceBasis::zero(n);
  Eigen::JacobiSVD<Matrix> svd(v.bottomRows(n), Eigen::ComputeFullV);
  const auto r = SubspaceBasis::numerical_rank(v.bottomRows(n));
  const Matrix kernel = svd.matrixV().rightCols(v.cols() - r);
  return SubspaceBasis::span_of(n, v.topRows(n) * kernel);
}

/// Backward direction of invariance transfer: with U = base_subspace(TU),
/// checks that the base components of prolong(X)(u, 0) stay in U.
inline CheckReport invariance_from_prolongation(const Representation& rep, const SubspaceBasis& tu, int samples,
                                                std::uint64_t seed, double tol) {
  const SubspaceBasis u = base_subspace(tu);
  const int n = rep.target_dim;
  if (u.ambient_dim() != n) throw DimensionError("invariance_from_prolongation: wrong ambient dimension");
  Matrix lifted = Matrix::Zero(2 * n, u.dim());
  lifted.topRows(n) = u.vectors();
  return detail::sampled_check("base_invariant_subspace", samples, seed, tol, [&](Rng& rng, int) {
    const auto pm = prolong(rep, sample_tangent_element(rep.group, rng));
    const Matrix base_images = (pm.dense() * lifted).topRows(n);
    // base images of the horizontal lift are Phi(a) u; measure them against U
    double worst = 0.0;
    const Matrix q = u.orthonormal();
    for (Eigen::Index j = 0; j < base_images.cols(); ++j) {
      const Vector img = base_images.col(j);
      const double norm = img.norm();
      if (norm > 0.0) worst = std::max(worst, (img - q * (q.transpose() * img)).norm() / norm);
    }
    return worst;
  });
}

// ---------------------------------------------------------------------------
// Commutant and reducibility

struct CommutantResult {
  std::vector<Matrix> basis;
  bool conclusive = true;

  int dim() const { return static_cast<int>(basis.size()); }
};

/// Nullspace of M -> {M A_i - A_i M} over the given matrices.
inline CommutantResult commutant_of(const std::vector<Matrix>& images, double rank_tol = kRankTol) {
  if (images.empty()) return {{}, false};
  const auto n = images.front().rows();
  const auto n2 = n * n;
  const Matrix eye = Matrix::Identity(n, n);
  Matrix system(static_cast<Eigen::Index>(images.size()) * n2, n2);
  for (std::size_t s = 0; s < images.size(); ++s) {
    const Matrix& a = images[s];
    // column-major vec: vec(M A) = (A^T (x) I) vec M, vec(A M) = (I (x) A) vec M
    Matrix block = Matrix::Zero(n2, n2);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        block.block(i * n, j * n, n, n) += a(j, i) * eye;
        block.block(i * n, j * n, n, n) -= eye(i, j) * a;
      }
    system.middleRows(static_cast<Eigen::Index>(s) * n2, n2) = block;
  }
  Eigen::JacobiSVD<Matrix> svd(system, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  const double top = sv.size() ? sv(0) : 0.0;
  while (r < sv.size() && sv(r) > rank_tol * top) ++r;
  CommutantResult out;
  out.conclusive = images.size() >= 2;
  for (Eigen::Index c = r; c < n2; ++c) out.basis.push_back(svd.matrixV().col(c).reshaped(n, n));
  return out;
}

/// Commutant of rep from `generator_samples` random group elements. Fewer
/// than two samples yields an inconclusive result.
inline CommutantResult commutant_basis(const Representation& rep, int generator_samples, std::uint64_t seed,
                                       double rank_tol = kRankTol) {
  Rng rng(seed);
  std::vector<Matrix> images;
  for (int i = 0; i < generator_samples; ++i) images.push_back(rep.apply(sample_group_element(rep.group, rng)));
  auto out = commutant_of(images, rank_tol);
  out.conclusive = generator_samples >= 2;
  return out;
}

enum class Reducibility { Irreducible, Reducible, Inconclusive };

inline std::string_view reducibility_name(Reducibility r) {
  switch (r) {
    case Reducibility::Irreducible: return "Irreducible";
    case Reducibility::Reducible: return "Reducible";
    case Reducibility::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct ReducibilityReport {
  Reducibility verdict = Reducibility::Inconclusive;
  int commutant_dim = 0;
  std::optional<SubspaceBasis> witness;
  double witness_defect = 0.0;
};

namespace detail {

/// Kernel of m at relative threshold `rel_tol`.
inline Matrix kernel_of(const Matrix& m, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rel_tol * scale) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

inline std::vector<Matrix> candidate_eigenspaces(const Matrix& m) {
  const auto n = m.rows();
  std::vector<Matrix> out;
  Eigen::EigenSolver<Matrix> es(m, false);
  std::vector<double> reals;
  const double scale = std::max(1.0, max_abs(m));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ev = es.eigenvalues()(i);
    if (std::abs(ev.imag()) > 1e-8 * scale) continue;
    if (std::none_of(reals.begin(), reals.end(), [&](double r) { return std::abs(r - ev.real()) < 1e-8 * scale; }))
      reals.push_back(ev.real());
  }
  for (double lambda : reals) {
    Matrix k = kernel_of(m - lambda * Matrix::Identity(n, n), 1e-6);
    if (k.cols() > 0 && k.cols() < n) out.push_back(std::move(k));
  }
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> ses(sym);
  const Vector& vals = ses.eigenvalues();
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || vals(i) - vals(i - 1) > 1e-6 * scale) {
      const auto width = i - start;
      if (width > 0 && width < n) out.push_back(ses.eigenvectors().middleCols(start, width));
      start = i;
    }
  }
  return out;
}

}  // namespace detail

/// Commutant dimension 1 certifies irreducibility. Otherwise random commutant
/// elements are split into real eigenspaces (of the element and of its
/// symmetric part); the first proper eigenspace that passes
/// is_invariant_subspace is returned as a Reducible witness. When no split
/// works the answer is Inconclusive: the commutant may be C or H as a real
/// algebra.
inline ReducibilityReport reducibility_probe(const Representation& rep, int samples, std::uint64_t seed) {
  const CommutantResult comm = commutant_basis(rep, std::max(samples, 2), seed);
  ReducibilityReport report;
  report.commutant_dim = comm.dim();
  if (comm.dim() == 1) {
    report.verdict = Reducibility::Irreducible;
    return report;
  }
  if (comm.dim() == 0) return report;
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  constexpr int kAttempts = 8;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Matrix m = Matrix::Zero(rep.target_dim, rep.target_dim);
    for (const auto& c : comm.basis) m += uniform(rng) * c;
    for (const Matrix& cols : detail::candidate_eigenspaces(m)) {
      const SubspaceBasis candidate = SubspaceBasis::span_of(rep.target_dim, cols);
      if (candidate.dim() == 0 || candidate.dim() == rep.target_dim) continue;
      const auto check = is_invariant_subspace(rep, candidate, std::max(samples, 2), seed + 1, 1e-8);
      if (check.passed()) {
        report.verdict = Reducibility::Reducible;
        report.witness = candidate;
        report.witness_defect = check.max_residual;
        return report;
      }
    }
  }
  return report;
}

/// For a 2-dimensional representation: sweeps every line through the origin
/// and reports the smallest invariance defect found (sine of the angle between
/// u and Phi(a) u, worst over samples). Pass means no line is invariant, which
/// certifies irreducibility over R.
inline CheckReport certify_irreducible_2d(const Representation& rep, int samples, std::uint64_t seed,
                                          double tol = 1e-6) {
  if (rep.target_dim != 2) throw DimensionError("certify_irreducible_2d: representation must be 2-dimensional");
  Rng rng(seed);
  std::vector<Matrix> images;
  for (int i = 0; i < std::max(samples, 1); ++i) images.push_back(rep.apply(sample_group_element(rep.group, rng)));
  auto defect = [&](double phi) {
    const Vector u{{std::cos(phi), std::sin(phi)}};
    double worst = 0.0;
    for (const auto& m : images) {
      const Vector w = m * u;
      const double norm = w.norm();
      if (norm > 0.0) worst = std::max(worst, std::abs(u(0) * w(1) - u(1) * w(0)) / norm);
    }
    return worst;
  };
  constexpr int kGrid = 3600;
  const double pi = std::acos(-1.0);
  const double step = pi / kGrid;
  double best_phi = 0.0;
  double best = defect(0.0);
  for (int i = 1; i < kGrid; ++i) {
    const double d = defect(i * step);
    if (d < best) {
      best = d;
      best_phi = i * step;
    }
  }
  // golden-section refinement around the best grid point
  double lo = best_phi - step, hi = best_phi + step;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 80; ++it) {
    const double m1 = hi - ratio * (hi - lo), m2 = lo + ratio * (hi - lo);
    if (defect(m1) < defect(m2)) hi = m2; else lo = m1;
  }
  const double refined_phi = 0.5 * (lo + hi);
  if (defect(refined_phi) < best) {
    best = defect(refined_phi);
    best_phi = refined_phi;
  }
  CheckReport report{"irreducible_2d", best > tol ? Verdict::Pass : Verdict::Fail, best, std::nullopt};
  if (report.failed())
    report.witness = Witness{"invariant line (cos phi, sin phi)", seed, std::nullopt, {best_phi}};
  return report;
}

// ---------------------------------------------------------------------------
// Direct sums

inline Representation direct_sum(const Representation& first, const Representation& second) {
  if (!(first.group == second.group))
    throw SpecMismatch("direct_sum: " + first.group.name() + " vs " + second.group.name());
  Representation out;
  out.name = first.name + "+" + second.name;
  out.group = first.group;
  out.target_dim = first.target_dim + second.target_dim;
  out.apply_fn = [first, second](const GroupElement& g) { return block_diagonal(first.apply(g), second.apply(g)); };
  if (first.has_differential() && second.has_differential())
    out.differential_fn = [first, second](const AlgebraElement& b) {
      return block_diagonal(*first.analytic_differential(b), *second.analytic_differential(b));
    };
  return out;
}

/// Index map taking trivialized coordinates (p1, p2, v1, v2) of T(V1 + V2) to
/// (p1, v1, p2, v2) of TV1 + TV2: entry k is the source index of target
/// coordinate k.
inline std::vector<int> interleave_permutation(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw DimensionError("interleave_permutation: block sizes must be positive");
  const int total = n1 + n2;
  std::vector<int> perm;
  perm.reserve(static_cast<std::size_t>(2 * total));
  for (int i = 0; i < n1; ++i) perm.push_back(i);
  for (int i = 0; i < n1; ++i) perm.push_back(total + i);
  for (int i = 0; i < n2; ++i) perm.push_back(n1 + i);
  for (int i = 0; i < n2; ++i) perm.push_back(total + n1 + i);
  return perm;
}

/// P with (P x)_k = x_perm[k].
inline Matrix permutation_matrix(const std::vector<int>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) p(k, perm[static_cast<std::size_t>(k)]) = 1.0;
  return p;
}

/// || P prolong(rep1 + rep2, X) P^T - prolong(rep1, X) + prolong(rep2, X) ||
/// (relative) for one tangent element.
inline double direct_sum_commutation_residual(const Representation& first, const Representation& second,
                                              const TangentGroupElement& x) {
  const Matrix p = permutation_matrix(interleave_permutation(first.target_dim, second.target_dim));
  const Matrix lhs = p * prolong(direct_sum(first, second), x).dense() * p.transpose();
  const Matrix rhs = block_diagonal(prolong(first, x).dense(), prolong(second, x).dense());
  return relative_residual(lhs, rhs);
}

inline CheckReport check_direct_sum_commutation(const Representation& first, const Representation& second,
                                                int samples, std::uint64_t seed, double tol) {
  return detail::sampled_check("direct_sum_commutation", samples, seed, tol, [&](Rng& rng, int) {
    return direct_sum_commutation_residual(first, second, sample_tangent_element(first.group, rng));
  });
}

// ---------------------------------------------------------------------------
// Faithfulness

/// Relative threshold below which two prolonged images count as equal.
inline constexpr double kCollisionTol = 1e-12;
/// Relative threshold above which two tangent elements count as distinct.
inline constexpr double kDistinctTol = 1e-9;

/// Compares prolonged images of independently drawn distinct tangent
/// elements and, when a kernel witness k is supplied, prolong([k, 0]) against
/// prolong([e, 0]). Any collision is a Fail carrying the offending pair.
inline CheckReport faithfulness_probe(const Representation& rep, int samples, std::uint64_t seed,
                                      const std::optional<GroupElement>& kernel_witness = std::nullopt) {
  CheckReport report{"faithfulness", Verdict::Pass, 0.0, std::nullopt};
  auto collides = [](const ProlongedMatrix& x, const ProlongedMatrix& y) {
    const double scale = std::max({1.0, max_abs(x.dense()), max_abs(y.dense())});
    return max_abs(x.dense() - y.dense()) <= kCollisionTol * scale;
  };
  auto distinct = [](const TangentGroupElement& x, const TangentGroupElement& y) {
    return relative_residual(x.base.matrix(), y.base.matrix()) > kDistinctTol ||
           relative_residual(x.algebra.matrix(), y.algebra.matrix()) > kDistinctTol;
  };

  if (kernel_witness) {
    const TangentGroupElement k{*kernel_witness, AlgebraElement::zero(rep.group)};
    const TangentGroupElement e = TangentGroupElement::identity(rep.group);
    if (distinct(k, e) && collides(prolong(rep, k), prolong(rep, e))) {
      report.verdict = Verdict::Fail;
      report.witness = Witness{"kernel collision: prolong([k,0]) == prolong([e,0])", seed, std::nullopt,
                               detail::flatten(kernel_witness->matrix())};
      return report;
    }
  }

  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const auto x = sample_tangent_element(rep.group, rng);
    const auto y = sample_tangent_element(rep.group, rng);
    if (!distinct(x, y)) continue;
    if (collides(prolong(rep, x), prolong(rep, y))) {
      std::vector<double> data = detail::flatten(x.base.matrix());
      const auto tail = detail::flatten(y.base.matrix());
      data.insert(data.end(), tail.begin(), tail.end());
      report.verdict = Verdict::Fail;
      report.witness = Witness{"sampled collision: distinct tangent elements with equal prolongations", seed, i,
                               std::move(data)};
      return report;
    }
  }
  return report;
}

}  // namespace tangent_rep
