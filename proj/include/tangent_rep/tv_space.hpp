#pragma once

// TV stored in trivialized coordinates: a tangent vector sum_i v_i d/dx_i at p
// is the pair (p, v). The bundle trivialization is linear, so the vector-space
// structure of TV is componentwise on (p, v).

#include <utility>
#include <vector>

#include "lie_core.hpp"

namespace tangent_rep {

struct TangentVector {
  Vector base;
  Vector fiber;

  TangentVector(Vector p, Vector v) : base(std::move(p)), fiber(std::move(v)) {
    if (base.size() != fiber.size()) throw DimensionError("TangentVector: base and fiber lengths differ");
    if (!base.allFinite() || !fiber.allFinite()) throw DimensionError("TangentVector: non-finite entries");
  }

  static TangentVector zero(Eigen::Index n) { return {Vector::Zero(n), Vector::Zero(n)}; }

  /// (p, v) stacked into one length-2n column.
  static TangentVector from_stacked(const Vector& coords) {
    if (coords.size() % 2 != 0) throw DimensionError("stacked tangent coordinates must have even length");
    const auto n = coords.size() / 2;
    return {coords.head(n), coords.tail(n)};
  }

  Eigen::Index dim() const { return base.size(); }

  Vector stacked() const {
    Vector out(2 * dim());
    out << base, fiber;
    return out;
  }

  bool operator==(const TangentVector& other) const {
    return base.size() == other.base.size() && base == other.base && fiber == other.fiber;
  }
};

inline TangentVector tv_add(const TangentVector& u, const TangentVector& w) {
  if (u.dim() != w.dim()) throw DimensionError("tv_add: dimension mismatch");
  return {u.base + w.base, u.fiber + w.fiber};
}

inline TangentVector tv_scale(double c, const TangentVector& u) { return {c * u.base, c * u.fiber}; }

inline TangentVector tv_negate(const TangentVector& u) { return tv_scale(-1.0, u); }

/// Ordered basis of TV: the horizontal lifts (e_i, 0) of the basis of V
/// followed by the fiber directions (0, e_i).
struct TVBasis {
  std::vector<TangentVector> vectors;

  /// Columns are the stacked coordinates of the basis vectors.
  Matrix coordinate_matrix() const {
    if (vectors.empty()) return Matrix(0, 0);
    const auto rows = 2 * vectors.front().dim();
    Matrix m(rows, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t k = 0; k < vectors.size(); ++k) {
      if (2 * vectors[k].dim() != rows) throw DimensionError("TVBasis: mixed dimensions");
      m.col(static_cast<Eigen::Index>(k)) = vectors[k].stacked();
    }
    return m;
  }

  /// Coefficients c with sum_k c_k . vectors[k] == y.
  Vector coordinates_of(const TangentVector& y) const {
    return coordinate_matrix().fullPivLu().solve(y.stacked());
  }

  TangentVector reconstruct(const Vector& coeffs) const {
    if (coeffs.size() != static_cast<Eigen::Index>(vectors.size()))
      throw DimensionError("TVBasis::reconstruct: wrong coefficient count");
    TangentVector acc = TangentVector::zero(vectors.front().dim());
    for (std::size_t k = 0; k < vectors.size(); ++k)
      acc = tv_add(acc, tv_scale(coeffs(static_cast<Eigen::Index>(k)), vectors[k]));
    return acc;
  }

  Eigen::Index rank() const {
    Eigen::ColPivHouseholderQR<Matrix> qr(coordinate_matrix());
    return qr.rank();
  }
};

inline TVBasis canonical_basis(int n) {
  if (n < 1) throw DimensionError("canonical_basis: n must be positive");
  TVBasis basis;
  for (int i = 0; i < n; ++i) basis.vectors.emplace_back(Vector::Unit(n, i), Vector::Zero(n));
  for (int i = 0; i < n; ++i) basis.vectors.emplace_back(Vector::Zero(n), Vector::Unit(n, i));
  return basis;
}

/// A tangent vector of G x V at (a, p): the tangent-group part and the TV part
/// side by side.
struct ProductTangent {
  TangentGroupElement group_part;
  TangentVector space_part;

  const TangentGroupElement& first() const { return group_part; }
  const TangentVector& second() const { return space_part; }
};

inline ProductTangent pair_tangents(TangentGroupElement x, TangentVector y) {
  return {std::move(x), std::move(y)};
}

}  // namespace tangent_rep
