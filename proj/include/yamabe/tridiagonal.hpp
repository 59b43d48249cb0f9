#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

namespace yamabe {

/// Symmetric tridiagonal matrix stored as a diagonal and one off-diagonal.
template <typename Scalar>
struct SymTridiagonal {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector diag;
  Vector off;  // off(i) couples rows i and i+1

  SymTridiagonal() = default;
  explicit SymTridiagonal(Eigen::Index n) : diag(Vector::Zero(n)), off(Vector::Zero(n > 0 ? n - 1 : 0)) {}

  Eigen::Index size() const { return diag.size(); }

  /// Contiguous principal block [first, first + count).
  SymTridiagonal block(Eigen::Index first, Eigen::Index count) const {
    SymTridiagonal out;
    out.diag = diag.segment(first, count);
    out.off = count > 1 ? Vector(off.segment(first, count - 1)) : Vector();
    return out;
  }

  Eigen::SparseMatrix<Scalar> to_sparse() const {
    const Eigen::Index n = size();
    Eigen::SparseMatrix<Scalar> m(n, n);
    m.reserve(Eigen::VectorXi::Constant(n, 3));
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i > 0) m.insert(i, i - 1) = off(i - 1);
      m.insert(i, i) = diag(i);
      if (i + 1 < n) m.insert(i, i + 1) = off(i);
    }
    m.makeCompressed();
    return m;
  }
};

template <typename Scalar>
SymTridiagonal<Scalar> operator+(const SymTridiagonal<Scalar>& a, const SymTridiagonal<Scalar>& b) {
  SymTridiagonal<Scalar> out;
  out.diag = a.diag + b.diag;
  out.off = a.off + b.off;
  return out;
}

template <typename Scalar>
SymTridiagonal<Scalar> operator*(Scalar s, const SymTridiagonal<Scalar>& a) {
  SymTridiagonal<Scalar> out;
  out.diag = s * a.diag;
  out.off = s * a.off;
  return out;
}

template <typename Scalar>
SymTridiagonal<Scalar> operator-(const SymTridiagonal<Scalar>& a, const SymTridiagonal<Scalar>& b) {
  return a + (Scalar(-1) * b);
}

template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> apply(const SymTridiagonal<Scalar>& t,
                                               const Eigen::MatrixBase<Derived>& x) {
  const Eigen::Index n = t.size();
  assert(x.size() == n);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y = t.diag.cwiseProduct(x);
  if (n > 1) {
    y.head(n - 1) += t.off.cwiseProduct(x.tail(n - 1));
    y.tail(n - 1) += t.off.cwiseProduct(x.head(n - 1));
  }
  return y;
}

/// x^T T y.
template <typename Scalar, typename DX, typename DY>
Scalar bilinear(const SymTridiagonal<Scalar>& t, const Eigen::MatrixBase<DX>& x,
                const Eigen::MatrixBase<DY>& y) {
  return x.dot(apply(t, y));
}

/// LDL^T factorization of a symmetric tridiagonal matrix without pivoting.
/// pivots() carries D; the unit lower factor has subdiagonal multipliers().
template <typename Scalar>
class TridiagonalLDLT {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  TridiagonalLDLT() = default;
  explicit TridiagonalLDLT(const SymTridiagonal<Scalar>& t) { compute(t); }

  TridiagonalLDLT& compute(const SymTridiagonal<Scalar>& t) {
    const Eigen::Index n = t.size();
    d_.resize(n);
    l_.resize(n > 0 ? n - 1 : 0);
    zero_pivot_ = false;
    if (n == 0) return *this;
    d_(0) = t.diag(0);
    for (Eigen::Index i = 1; i < n; ++i) {
      if (d_(i - 1) == Scalar(0)) {
        zero_pivot_ = true;
        d_(i - 1) = std::numeric_limits<Scalar>::min();
      }
      l_(i - 1) = t.off(i - 1) / d_(i - 1);
      d_(i) = t.diag(i) - l_(i - 1) * t.off(i - 1);
    }
    if (d_(n - 1) == Scalar(0)) zero_pivot_ = true;
    return *this;
  }

  /// Sylvester inertia: number of negative eigenvalues of the factored matrix.
  Eigen::Index negative_count() const { return (d_.array() < Scalar(0)).count(); }
  bool positive_definite() const { return !zero_pivot_ && negative_count() == 0; }
  const Vector& pivots() const { return d_; }

  template <typename Derived>
  Vector solve(const Eigen::MatrixBase<Derived>& b) const {
    const Eigen::Index n = d_.size();
    Vector x = b;
    for (Eigen::Index i = 1; i < n; ++i) x(i) -= l_(i - 1) * x(i - 1);
    x.array() /= d_.array();
    for (Eigen::Index i = n - 2; i >= 0; --i) x(i) -= l_(i) * x(i + 1);
    return x;
  }

 private:
  Vector d_;
  Vector l_;
  bool zero_pivot_ = false;
};

/// Number of eigenvalues of the pencil (A, B) below sigma, B SPD.
template <typename Scalar>
Eigen::Index count_below(const SymTridiagonal<Scalar>& a, const SymTridiagonal<Scalar>& b, Scalar sigma) {
  return TridiagonalLDLT<Scalar>(a - sigma * b).negative_count();
}

}  // namespace yamabe
