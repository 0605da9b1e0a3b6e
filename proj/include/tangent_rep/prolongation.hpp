#pragma once

// Prolongation of a representation Phi: G -> GL(n) to TG -> GL(2n).
//
// For X = [a, B] with R = Phi(a) and K = dPhi(B), the prolonged matrix is
//
//   [ R    0 ]
//   [ K R  R ]
//
// acting on trivialized tangent vectors (p, v) as (R p, K R p + R v).

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "lie_core.hpp"
#include "tv_space.hpp"

namespace tangent_rep {

/// Central-difference step shared by the differential and the tangent-action
/// oracle.
inline constexpr double kFiniteDifferenceStep = 1e-6;

/// A homomorphism G -> GL(target_dim), given in coordinates. `differential`
/// is the analytic dPhi on the Lie algebra; when absent, dPhi is taken by
/// finite differences.
struct Representation {
  using ApplyFn = std::function<Matrix(const GroupElement&)>;
  using DifferentialFn = std::function<Matrix(const AlgebraElement&)>;

  std::string name;
  GroupSpec group;
  int target_dim = 1;
  ApplyFn apply_fn;
  DifferentialFn differential_fn;

  bool has_differential() const { return static_cast<bool>(differential_fn); }

  Matrix apply(const GroupElement& a) const {
    if (!(a.spec() == group)) throw SpecMismatch(name + ": element of " + a.spec().name() + ", expected " + group.name());
    Matrix m = apply_fn(a);
    if (m.rows() != target_dim || m.cols() != target_dim)
      throw DimensionError(name + ": apply returned the wrong shape");
    return m;
  }

  std::optional<Matrix> analytic_differential(const AlgebraElement& b) const {
    if (!differential_fn) return std::nullopt;
    if (!(b.spec() == group)) throw SpecMismatch(name + ": algebra element of " + b.spec().name());
    Matrix m = differential_fn(b);
    if (m.rows() != target_dim || m.cols() != target_dim)
      throw DimensionError(name + ": differential returned the wrong shape");
    return m;
  }
};

/// The 2n x 2n lower block-triangular matrix [[R, 0], [K R, R]], stored by
/// its two distinct blocks so the zero block and the equal diagonal blocks
/// hold exactly.
class ProlongedMatrix {
 public:
  ProlongedMatrix(Matrix top_left, Matrix bottom_left)
      : top_left_(std::move(top_left)), bottom_left_(std::move(bottom_left)) {
    require_square_finite(top_left_, "ProlongedMatrix");
    if (bottom_left_.rows() != top_left_.rows() || bottom_left_.cols() != top_left_.cols())
      throw DimensionError("ProlongedMatrix: block shapes differ");
    if (!bottom_left_.allFinite()) throw DimensionError("ProlongedMatrix: non-finite block");
  }

  static ProlongedMatrix identity(int n) {
    return {Matrix::Identity(n, n), Matrix::Zero(n, n)};
  }

  int n() const { return static_cast<int>(top_left_.rows()); }
  const Matrix& top_left() const { return top_left_; }
  const Matrix& bottom_left() const { return bottom_left_; }
  const Matrix& bottom_right() const { return top_left_; }

  Matrix dense() const {
    const int k = n();
    Matrix m = Matrix::Zero(2 * k, 2 * k);
    m.topLeftCorner(k, k) = top_left_;
    m.bottomLeftCorner(k, k) = bottom_left_;
    m.bottomRightCorner(k, k) = top_left_;
    return m;
  }

  friend ProlongedMatrix operator*(const ProlongedMatrix& x, const ProlongedMatrix& y) {
    if (x.n() != y.n()) throw DimensionError("ProlongedMatrix product: size mismatch");
    return {x.top_left_ * y.top_left_, x.bottom_left_ * y.top_left_ + x.top_left_ * y.bottom_left_};
  }

 private:
  Matrix top_left_;
  Matrix bottom_left_;
};

/// J_n([a, B]) = [[a, 0], [B a, a]]
inline ProlongedMatrix jn_embed(const TangentGroupElement& x) {
  return {x.base.matrix(), x.algebra.matrix() * x.base.matrix()};
}

namespace detail {

inline Matrix central_difference_differential(const Representation& rep, const AlgebraElement& b, double h) {
  const Matrix forward = rep.apply(mat_exp(b, h));
  const Matrix backward = rep.apply(mat_exp(b, -h));
  Matrix d = (forward - backward) / (2.0 * h);
  if (!d.allFinite()) throw StepSizeError(rep.name + ": non-finite difference quotient in dPhi");
  return d;
}

}  // namespace detail

/// Finite-difference dPhi(B) with one Richardson step (h and h/2).
inline Matrix numeric_differential(const Representation& rep, const AlgebraElement& b,
                                   double h = kFiniteDifferenceStep) {
  const Matrix coarse = detail::central_difference_differential(rep, b, h);
  const Matrix fine = detail::central_difference_differential(rep, b, h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

/// dPhi(B): the analytic differential when the representation provides one,
/// otherwise the finite-difference estimate.
inline Matrix differential_rep(const Representation& rep, const AlgebraElement& b) {
  if (auto analytic = rep.analytic_differential(b)) return *std::move(analytic);
  return numeric_differential(rep, b);
}

struct DifferentialReport {
  std::optional<Matrix> analytic;
  Matrix numeric;
  double discrepancy = 0.0;  // max-abs(analytic - numeric); 0 without analytic
};

inline DifferentialReport differential_report(const Representation& rep, const AlgebraElement& b) {
  DifferentialReport report{rep.analytic_differential(b), numeric_differential(rep, b), 0.0};
  if (report.analytic) report.discrepancy = max_abs(*report.analytic - report.numeric);
  return report;
}

inline ProlongedMatrix prolong(const Representation& rep, const TangentGroupElement& x) {
  if (!(x.spec() == rep.group))
    throw SpecMismatch(rep.name + ": tangent element of " + x.spec().name() + ", expected " + rep.group.name());
  const Matrix r = rep.apply(x.base);
  if (!Eigen::FullPivLU<Matrix>(r).isInvertible()) throw SingularMatrix(rep.name + ": Phi(a) is singular");
  const Matrix k = differential_rep(rep, x.algebra);
  return {r, k * r};
}

inline TangentVector apply_prolonged(const ProlongedMatrix& m, const TangentVector& y) {
  if (y.dim() != m.n()) throw DimensionError("apply_prolonged: dimension mismatch");
  return {m.top_left() * y.base, m.bottom_left() * y.base + m.top_left() * y.fiber};
}

/// T rho(X, Y) computed without the block formula: the velocity at t = 0 of
/// t -> Phi(exp(tB) a) (p + t v), by central differences.
inline TangentVector tangent_action_oracle(const Representation& rep, const TangentGroupElement& x,
                                           const TangentVector& y, double h = kFiniteDifferenceStep) {
  if (!(x.spec() == rep.group)) throw SpecMismatch(rep.name + ": oracle input on the wrong group");
  if (y.dim() != rep.target_dim) throw DimensionError("tangent_action_oracle: dimension mismatch");
  auto curve = [&](double t) -> Vector {
    const GroupElement at = mat_exp(x.algebra, t) * x.base;
    return rep.apply(at) * (y.base + t * y.fiber);
  };
  Vector velocity = (curve(h) - curve(-h)) / (2.0 * h);
  if (!velocity.allFinite()) throw StepSizeError(rep.name + ": non-finite difference quotient in oracle");
  return {rep.apply(x.base) * y.base, std::move(velocity)};
}

}  // namespace tangent_rep
