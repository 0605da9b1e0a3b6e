#pragma once

// Matrix Lie groups, their Lie algebras, and the tangent group TG in right
// trivialization: a tangent vector at a is stored as [a, B] with Y = TR_a(B).

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace tangent_rep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Absolute tolerance on group and algebra membership residuals.
inline constexpr double kMembershipTol = 1e-9;

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Max-abs difference of two equally shaped matrices, scaled by the larger of
/// 1 and their max-abs entries.
inline double relative_residual(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols())
    throw DimensionError("relative_residual: shape mismatch");
  if (lhs.size() == 0) return 0.0;
  const double scale = std::max({1.0, max_abs(lhs), max_abs(rhs)});
  return max_abs(lhs - rhs) / scale;
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline void require_square_finite(const Matrix& m, std::string_view what) {
  if (m.rows() < 1 || m.rows() != m.cols())
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix");
  if (!m.allFinite())
    throw DimensionError(std::string(what) + ": matrix has non-finite entries");
}

inline Matrix block_diagonal(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// ---------------------------------------------------------------------------
// Group descriptions

enum class GroupKind { GeneralLinear, SpecialLinear, SpecialOrthogonal, Circle, Product };

inline std::string_view kind_name(GroupKind kind) {
  switch (kind) {
    case GroupKind::GeneralLinear: return "GeneralLinear";
    case GroupKind::SpecialLinear: return "SpecialLinear";
    case GroupKind::SpecialOrthogonal: return "SpecialOrthogonal";
    case GroupKind::Circle: return "Circle";
    case GroupKind::Product: return "Product";
  }
  return "?";
}

inline GroupKind parse_kind(std::string_view name) {
  for (auto k : {GroupKind::GeneralLinear, GroupKind::SpecialLinear, GroupKind::SpecialOrthogonal,
                 GroupKind::Circle, GroupKind::Product})
    if (kind_name(k) == name) return k;
  throw DescriptorError("unknown group kind '" + std::string(name) + "'");
}

/// A matrix group. `dim` is always the size of the matrices realizing it: a
/// Circle is SO(2) written as [[cos t, sin t], [-sin t, cos t]], and a Product
/// is the block-diagonal embedding of its factors.
struct GroupSpec {
  GroupKind kind = GroupKind::GeneralLinear;
  int dim = 1;
  std::vector<GroupSpec> factors;

  static GroupSpec general_linear(int n) { return make(GroupKind::GeneralLinear, n); }
  static GroupSpec special_linear(int n) { return make(GroupKind::SpecialLinear, n); }
  static GroupSpec special_orthogonal(int n) { return make(GroupKind::SpecialOrthogonal, n); }
  static GroupSpec circle() { return make(GroupKind::Circle, 2); }

  static GroupSpec product(std::vector<GroupSpec> parts) {
    if (parts.empty()) throw DimensionError("product group needs at least one factor");
    GroupSpec spec{GroupKind::Product, 0, std::move(parts)};
    for (const auto& f : spec.factors) spec.dim += f.dim;
    return spec;
  }

  static GroupSpec make(GroupKind kind, int n) {
    if (n < 1) throw DimensionError("group dimension must be positive");
    if (kind == GroupKind::Circle && n != 2) throw DimensionError("Circle is realized by 2x2 matrices");
    if (kind == GroupKind::Product) throw DimensionError("use GroupSpec::product for products");
    return GroupSpec{kind, n, {}};
  }

  std::string name() const {
    switch (kind) {
      case GroupKind::GeneralLinear: return "GL(" + std::to_string(dim) + ")";
      case GroupKind::SpecialLinear: return "SL(" + std::to_string(dim) + ")";
      case GroupKind::SpecialOrthogonal: return "SO(" + std::to_string(dim) + ")";
      case GroupKind::Circle: return "S1";
      case GroupKind::Product: {
        std::string out;
        for (std::size_t i = 0; i < factors.size(); ++i) out += (i ? "x" : "") + factors[i].name();
        return out;
      }
    }
    return "?";
  }

  bool operator==(const GroupSpec&) const = default;
};

/// Ordered basis of the Lie algebra, used for exponential coordinates.
/// GL: E_ij row-major. SL: off-diagonal E_ij row-major, then E_ii - E_nn.
/// SO: E_ij - E_ji for i < j. Circle: [[0,1],[-1,0]]. Product: factor bases
/// placed in their diagonal blocks, in factor order.
inline std::vector<Matrix> algebra_basis(const GroupSpec& spec) {
  const int n = spec.dim;
  std::vector<Matrix> basis;
  auto unit = [n](int i, int j) {
    Matrix e = Matrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
  };
  switch (spec.kind) {
    case GroupKind::GeneralLinear:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) basis.push_back(unit(i, j));
      break;
    case GroupKind::SpecialLinear:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) basis.push_back(unit(i, j));
      for (int i = 0; i + 1 < n; ++i) basis.push_back(unit(i, i) - unit(n - 1, n - 1));
      break;
    case GroupKind::SpecialOrthogonal:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) basis.push_back(unit(i, j) - unit(j, i));
      break;
    case GroupKind::Circle:
      basis.push_back(unit(0, 1) - unit(1, 0));
      break;
    case GroupKind::Product: {
      int offset = 0;
      for (const auto& f : spec.factors) {
        for (const auto& b : algebra_basis(f)) {
          Matrix e = Matrix::Zero(n, n);
          e.block(offset, offset, f.dim, f.dim) = b;
          basis.push_back(std::move(e));
        }
        offset += f.dim;
      }
      break;
    }
  }
  return basis;
}

inline int algebra_dim(const GroupSpec& spec) { return static_cast<int>(algebra_basis(spec).size()); }

namespace detail {

inline double off_block_residual(const GroupSpec& spec, const Matrix& m) {
  Matrix masked = m;
  int offset = 0;
  for (const auto& f : spec.factors) {
    masked.block(offset, offset, f.dim, f.dim).setZero();
    offset += f.dim;
  }
  return max_abs(masked);
}

}  // namespace detail

/// Defining residual of group membership: 0 for an exact member. Singular or
/// non-finite matrices report +inf.
inline double group_membership_residual(const GroupSpec& spec, const Matrix& m) {
  if (m.rows() != spec.dim || m.cols() != spec.dim || !m.allFinite())
    return std::numeric_limits<double>::infinity();
  const int n = spec.dim;
  switch (spec.kind) {
    case GroupKind::GeneralLinear: {
      Eigen::FullPivLU<Matrix> lu(m);
      return lu.isInvertible() ? 0.0 : std::numeric_limits<double>::infinity();
    }
    case GroupKind::SpecialLinear:
      return std::abs(m.determinant() - 1.0);
    case GroupKind::SpecialOrthogonal:
    case GroupKind::Circle:
      return std::max(max_abs(m.transpose() * m - Matrix::Identity(n, n)),
                      std::abs(m.determinant() - 1.0));
    case GroupKind::Product: {
      double worst = detail::off_block_residual(spec, m);
      int offset = 0;
      for (const auto& f : spec.factors) {
        worst = std::max(worst, group_membership_residual(f, m.block(offset, offset, f.dim, f.dim)));
        offset += f.dim;
      }
      return worst;
    }
  }
  return std::numeric_limits<double>::infinity();
}

inline double algebra_membership_residual(const GroupSpec& spec, const Matrix& m) {
  if (m.rows() != spec.dim || m.cols() != spec.dim || !m.allFinite())
    return std::numeric_limits<double>::infinity();
  switch (spec.kind) {
    case GroupKind::GeneralLinear: return 0.0;
    case GroupKind::SpecialLinear: return std::abs(m.trace());
    case GroupKind::SpecialOrthogonal:
    case GroupKind::Circle: return max_abs(m + m.transpose());
    case GroupKind::Product: {
      double worst = detail::off_block_residual(spec, m);
      int offset = 0;
      for (const auto& f : spec.factors) {
        worst = std::max(worst, algebra_membership_residual(f, m.block(offset, offset, f.dim, f.dim)));
        offset += f.dim;
      }
      return worst;
    }
  }
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Elements

class AlgebraElement {
 public:
  AlgebraElement(GroupSpec spec, Matrix matrix) : spec_(std::move(spec)), matrix_(std::move(matrix)) {
    require_square_finite(matrix_, "AlgebraElement");
    if (matrix_.rows() != spec_.dim) throw DimensionError("AlgebraElement: size does not match group");
    const double r = algebra_membership_residual(spec_, matrix_);
    if (!(r < kMembershipTol * std::max(1.0, max_abs(matrix_))))
      throw MembershipError("matrix is not in the Lie algebra of " + spec_.name());
  }

  static AlgebraElement zero(const GroupSpec& spec) {
    return AlgebraElement(spec, Matrix::Zero(spec.dim, spec.dim));
  }

  /// sum_k coords[k] * algebra_basis(spec)[k]
  static AlgebraElement from_coordinates(const GroupSpec& spec, const std::vector<double>& coords) {
    const auto basis = algebra_basis(spec);
    if (coords.size() != basis.size())
      throw DimensionError("expected " + std::to_string(basis.size()) + " algebra coordinates for " +
                           spec.name() + ", got " + std::to_string(coords.size()));
    Matrix m = Matrix::Zero(spec.dim, spec.dim);
    for (std::size_t k = 0; k < basis.size(); ++k) m += coords[k] * basis[k];
    return AlgebraElement(spec, std::move(m));
  }

  /// Least-squares coordinates in algebra_basis(spec).
  std::vector<double> coordinates() const {
    const auto basis = algebra_basis(spec_);
    Matrix stacked(matrix_.size(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k)
      stacked.col(static_cast<Eigen::Index>(k)) = basis[k].reshaped();
    const Vector c = stacked.colPivHouseholderQr().solve(Vector(matrix_.reshaped()));
    return {c.data(), c.data() + c.size()};
  }

  const Matrix& matrix() const { return matrix_; }
  const GroupSpec& spec() const { return spec_; }

 private:
  GroupSpec spec_;
  Matrix matrix_;
};

class GroupElement {
 public:
  GroupElement(GroupSpec spec, Matrix matrix) : spec_(std::move(spec)), matrix_(std::move(matrix)) {
    require_square_finite(matrix_, "GroupElement");
    if (matrix_.rows() != spec_.dim) throw DimensionError("GroupElement: size does not match group");
    if (!(group_membership_residual(spec_, matrix_) < kMembershipTol))
      throw MembershipError("matrix is not an element of " + spec_.name());
  }

  static GroupElement identity(const GroupSpec& spec) {
    return GroupElement(spec, Matrix::Identity(spec.dim, spec.dim));
  }

  /// Circle element for angle theta: [[cos, sin], [-sin, cos]].
  static GroupElement circle(double theta) {
    Matrix m(2, 2);
    m << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    return GroupElement(GroupSpec::circle(), std::move(m));
  }

  const Matrix& matrix() const { return matrix_; }
  const GroupSpec& spec() const { return spec_; }

  GroupElement inverse() const {
    Eigen::FullPivLU<Matrix> lu(matrix_);
    if (!lu.isInvertible()) throw SingularMatrix("group element is singular");
    return GroupElement(spec_, lu.inverse());
  }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    if (!(a.spec_ == b.spec_)) throw SpecMismatch("group product across " + a.spec_.name() + " and " + b.spec_.name());
    return GroupElement(a.spec_, a.matrix_ * b.matrix_);
  }

 private:
  GroupSpec spec_;
  Matrix matrix_;
};

/// a B a^-1
inline AlgebraElement adjoint(const GroupElement& a, const AlgebraElement& b) {
  if (!(a.spec() == b.spec())) throw SpecMismatch("adjoint across different groups");
  return AlgebraElement(a.spec(), a.matrix() * b.matrix() * a.inverse().matrix());
}

// ---------------------------------------------------------------------------
// Exponential and logarithm

/// exp(t A) by scaling and squaring around a Taylor kernel. Throws
/// MagnitudeError when ||tA||_1 exceeds 700 (e^700 is near the double range).
inline Matrix mat_exp(const Matrix& a, double t = 1.0) {
  require_square_finite(a, "mat_exp");
  if (!std::isfinite(t)) throw MagnitudeError("mat_exp: non-finite scale");
  const Matrix x = t * a;
  const double norm = x.cwiseAbs().colwise().sum().maxCoeff();
  if (norm > 700.0) throw MagnitudeError("mat_exp: ||tB||_1 = " + std::to_string(norm) + " exceeds 700");
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix scaled = x / std::ldexp(1.0, squarings);

  const auto n = a.rows();
  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k < 40; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
    if (max_abs(term) <= 1e-17 * max_abs(sum)) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  if (!sum.allFinite()) throw MagnitudeError("mat_exp: overflow");
  return sum;
}

inline GroupElement mat_exp(const AlgebraElement& b, double t = 1.0) {
  return GroupElement(b.spec(), mat_exp(b.matrix(), t));
}

/// Principal logarithm. Throws MembershipError when `a` lies outside the
/// exponential chart (exp(log a) does not reproduce a).
inline AlgebraElement mat_log(const GroupElement& a) {
  const GroupSpec& spec = a.spec();
  Matrix log;
  if (spec.kind == GroupKind::Circle) {
    const double theta = std::atan2(a.matrix()(0, 1), a.matrix()(0, 0));
    log = theta * algebra_basis(spec).front();
  } else {
    log = a.matrix().log();
  }
  if (!log.allFinite() || relative_residual(mat_exp(log), a.matrix()) > 1e-10)
    throw MembershipError("group element is outside the principal exponential chart");
  // project away the roundoff-sized part normal to the algebra
  const auto coords = AlgebraElement(spec, Matrix(log)).coordinates();
  return AlgebraElement::from_coordinates(spec, coords);
}

// ---------------------------------------------------------------------------
// Tangent group TG

/// The pair [a, B]: a point a of G and B in Lie(G), encoding Y = TR_a(B).
struct TangentGroupElement {
  GroupElement base;
  AlgebraElement algebra;

  TangentGroupElement(GroupElement a, AlgebraElement b) : base(std::move(a)), algebra(std::move(b)) {
    if (!(base.spec() == algebra.spec())) throw SpecMismatch("tangent element: base and algebra groups differ");
  }

  static TangentGroupElement identity(const GroupSpec& spec) {
    return {GroupElement::identity(spec), AlgebraElement::zero(spec)};
  }

  const GroupSpec& spec() const { return base.spec(); }
};

/// [a, B] . [a', B'] = [a a', B + a B' a^-1]
inline TangentGroupElement tg_multiply(const TangentGroupElement& x, const TangentGroupElement& y) {
  if (!(x.spec() == y.spec())) throw SpecMismatch("tg_multiply: " + x.spec().name() + " vs " + y.spec().name());
  const Matrix conj = x.base.matrix() * y.algebra.matrix() * x.base.inverse().matrix();
  return {x.base * y.base, AlgebraElement(x.spec(), x.algebra.matrix() + conj)};
}

/// [a, B]^-1 = [a^-1, -a^-1 B a]
inline TangentGroupElement tg_inverse(const TangentGroupElement& x) {
  const GroupElement inv = x.base.inverse();
  return {inv, AlgebraElement(x.spec(), -(inv.matrix() * x.algebra.matrix() * x.base.matrix()))};
}

// ---------------------------------------------------------------------------
// Sampling

/// Algebra element with coordinates uniform in [-1, 1].
inline AlgebraElement sample_algebra_element(const GroupSpec& spec, Rng& rng) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> coords(static_cast<std::size_t>(algebra_dim(spec)));
  for (auto& c : coords) c = uniform(rng);
  return AlgebraElement::from_coordinates(spec, coords);
}

inline GroupElement sample_group_element(const GroupSpec& spec, Rng& rng) {
  return mat_exp(sample_algebra_element(spec, rng));
}

inline GroupElement sample_group_element(const GroupSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return sample_group_element(spec, rng);
}

inline TangentGroupElement sample_tangent_element(const GroupSpec& spec, Rng& rng) {
  GroupElement a = sample_group_element(spec, rng);
  return {std::move(a), sample_algebra_element(spec, rng)};
}

}  // namespace tangent_rep
