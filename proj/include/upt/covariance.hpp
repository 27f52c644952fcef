#pragma once

// Structured correlation matrices for the random-design model, their lower
// Cholesky factors, and the weak-dependence class report.
//
// Banded matrices (identity, 2x2 block diagonal, penta-diagonal) keep only
// their bands, so p = 5000 never materializes a dense p x p matrix. Custom
// matrices are stored dense.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "upt/common.hpp"
#include "upt/error.hpp"

namespace upt {

enum class CovarianceKind { identity, block_diagonal, penta_diagonal, custom };

struct CovarianceSpec {
  CovarianceKind kind = CovarianceKind::identity;
  Index p = 0;
  double a = 0.5;   // block_diagonal off-diagonal
  double a1 = 0.5;  // penta_diagonal first band
  double a2 = 0.1;  // penta_diagonal second band
  Eigen::MatrixXd custom;

  static CovarianceSpec make(CovarianceKind kind, Index p) {
    CovarianceSpec s;
    s.kind = kind;
    s.p = p;
    return s;
  }
  static CovarianceSpec identity(Index p) { return make(CovarianceKind::identity, p); }
  static CovarianceSpec block_diagonal(Index p, double a) {
    CovarianceSpec s = make(CovarianceKind::block_diagonal, p);
    s.a = a;
    return s;
  }
  static CovarianceSpec penta_diagonal(Index p, double a1 = 0.5, double a2 = 0.1) {
    CovarianceSpec s = make(CovarianceKind::penta_diagonal, p);
    s.a1 = a1;
    s.a2 = a2;
    return s;
  }
  static CovarianceSpec from_matrix(Eigen::MatrixXd omega) {
    CovarianceSpec s = make(CovarianceKind::custom, omega.rows());
    s.custom = std::move(omega);
    return s;
  }
};

namespace detail {

// Band storage shared by covariance and factor: bands(k, j) holds entry (j + k, j)
// of a symmetric (covariance) or lower-triangular (factor) matrix.
template <typename Scalar>
class BandedOrDense {
 public:
  BandedOrDense() = default;

  static BandedOrDense banded(Matrix<Scalar> bands) {
    BandedOrDense m;
    m.bandwidth_ = bands.rows() - 1;
    m.p_ = bands.cols();
    m.bands_ = std::move(bands);
    return m;
  }
  static BandedOrDense dense(Matrix<Scalar> full) {
    BandedOrDense m;
    m.bandwidth_ = -1;
    m.p_ = full.rows();
    m.dense_ = std::move(full);
    return m;
  }

  Index p() const { return p_; }
  bool is_banded() const { return bandwidth_ >= 0; }
  // Number of sub-diagonals stored; -1 for dense storage.
  Index bandwidth() const { return bandwidth_; }
  const Matrix<Scalar>& bands() const { return bands_; }
  const Matrix<Scalar>& dense_storage() const { return dense_; }

  // Entry on or below the diagonal (i >= j).
  Scalar lower(Index i, Index j) const {
    if (!is_banded()) return dense_(i, j);
    const Index k = i - j;
    return (k < 0 || k > bandwidth_) ? Scalar(0) : bands_(k, j);
  }

 protected:
  Index p_ = 0;
  Index bandwidth_ = -1;
  Matrix<Scalar> bands_;
  Matrix<Scalar> dense_;
};

}  // namespace detail

template <typename Scalar>
class CovarianceMatrix : public detail::BandedOrDense<Scalar> {
  using Base = detail::BandedOrDense<Scalar>;

 public:
  CovarianceMatrix() = default;
  explicit CovarianceMatrix(Base storage) : Base(std::move(storage)) {}

  Scalar operator()(Index i, Index j) const {
    if (!this->is_banded()) return this->dense_(i, j);
    return i >= j ? this->lower(i, j) : this->lower(j, i);
  }

  Matrix<Scalar> dense() const {
    if (!this->is_banded()) return this->dense_;
    Matrix<Scalar> out = Matrix<Scalar>::Zero(this->p_, this->p_);
    for (Index j = 0; j < this->p_; ++j) {
      for (Index k = 0; k <= this->bandwidth_ && j + k < this->p_; ++k) {
        out(j + k, j) = this->bands_(k, j);
        out(j, j + k) = this->bands_(k, j);
      }
    }
    return out;
  }
};

template <typename Scalar>
class LowerTriangularFactor : public detail::BandedOrDense<Scalar> {
  using Base = detail::BandedOrDense<Scalar>;

 public:
  LowerTriangularFactor() = default;
  explicit LowerTriangularFactor(Base storage) : Base(std::move(storage)) {}

  Scalar operator()(Index i, Index j) const { return i >= j ? this->lower(i, j) : Scalar(0); }

  Matrix<Scalar> dense() const {
    if (!this->is_banded()) return this->dense_;
    Matrix<Scalar> out = Matrix<Scalar>::Zero(this->p_, this->p_);
    for (Index j = 0; j < this->p_; ++j)
      for (Index k = 0; k <= this->bandwidth_ && j + k < this->p_; ++k)
        out(j + k, j) = this->bands_(k, j);
    return out;
  }

  // Returns Z * L^T, i.e. every row z of Z mapped to L z.
  template <typename Derived>
  Matrix<Scalar> correlate_rows(const Eigen::MatrixBase<Derived>& Z) const {
    if (Z.cols() != this->p_) throw InvalidArgument("correlate_rows: column count differs from factor dimension");
    if (!this->is_banded()) return Z * this->dense_.transpose();
    Matrix<Scalar> out(Z.rows(), Z.cols());
    for (Index i = 0; i < this->p_; ++i) {
      out.col(i) = this->bands_(0, i) * Z.col(i);
      for (Index k = 1; k <= this->bandwidth_ && k <= i; ++k) {
        const Scalar l = this->bands_(k, i - k);
        if (l != Scalar(0)) out.col(i) += l * Z.col(i - k);
      }
    }
    return out;
  }
};

using CovarianceMatrixd = CovarianceMatrix<double>;
using LowerTriangularFactord = LowerTriangularFactor<double>;

template <typename Scalar>
LowerTriangularFactor<Scalar> factorize(const CovarianceMatrix<Scalar>& omega);

namespace detail {

template <typename Scalar>
void require_unit_symmetric(const Matrix<Scalar>& m) {
  using std::abs;
  if (m.rows() != m.cols()) throw InvalidArgument("covariance must be square");
  for (Index j = 0; j < m.cols(); ++j) {
    if (abs(m(j, j) - Scalar(1)) > Scalar(1e-12))
      throw InvalidArgument("covariance diagonal must be 1 (entry " + std::to_string(j + 1) + ")");
    for (Index i = j + 1; i < m.rows(); ++i)
      if (abs(m(i, j) - m(j, i)) > Scalar(1e-12))
        throw InvalidArgument("covariance is not symmetric at (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ")");
  }
}

}  // namespace detail

template <typename Scalar = double>
CovarianceMatrix<Scalar> build_covariance(const CovarianceSpec& spec) {
  const Index p = spec.p;
  if (p < 1) throw InvalidArgument("covariance dimension must be at least 1");
  CovarianceMatrix<Scalar> omega;
  switch (spec.kind) {
    case CovarianceKind::identity:
      omega = CovarianceMatrix<Scalar>(
          detail::BandedOrDense<Scalar>::banded(Matrix<Scalar>::Ones(1, p)));
      break;
    case CovarianceKind::block_diagonal: {
      if (p % 2 != 0) throw InvalidArgument("block diagonal covariance needs an even dimension");
      if (!(std::abs(spec.a) < 1.0)) throw InvalidArgument("block correlation must lie in (-1, 1)");
      Matrix<Scalar> bands = Matrix<Scalar>::Zero(2, p);
      bands.row(0).setOnes();
      for (Index j = 0; j < p; j += 2) bands(1, j) = Scalar(spec.a);
      omega = CovarianceMatrix<Scalar>(detail::BandedOrDense<Scalar>::banded(std::move(bands)));
      break;
    }
    case CovarianceKind::penta_diagonal: {
      Matrix<Scalar> bands = Matrix<Scalar>::Zero(3, p);
      bands.row(0).setOnes();
      for (Index j = 0; j + 1 < p; ++j) bands(1, j) = Scalar(spec.a1);
      for (Index j = 0; j + 2 < p; ++j) bands(2, j) = Scalar(spec.a2);
      omega = CovarianceMatrix<Scalar>(detail::BandedOrDense<Scalar>::banded(std::move(bands)));
      break;
    }
    case CovarianceKind::custom: {
      if (spec.custom.rows() != p) throw InvalidArgument("custom covariance dimension mismatch");
      Matrix<Scalar> m = spec.custom.template cast<Scalar>();
      detail::require_unit_symmetric(m);
      // Exact symmetry from the lower triangle.
      m = m.template triangularView<Eigen::Lower>();
      m.template triangularView<Eigen::StrictlyUpper>() = m.transpose();
      omega = CovarianceMatrix<Scalar>(detail::BandedOrDense<Scalar>::dense(std::move(m)));
      break;
    }
  }
  factorize(omega);  // throws NotPositiveDefinite
  return omega;
}

template <typename Scalar>
LowerTriangularFactor<Scalar> factorize(const CovarianceMatrix<Scalar>& omega) {
  using std::sqrt;
  const Index p = omega.p();
  if (!omega.is_banded()) {
    Eigen::LLT<Matrix<Scalar>> llt(omega.dense_storage());
    if (llt.info() != Eigen::Success)
      throw NotPositiveDefinite("covariance is not positive definite (dense Cholesky failed)");
    return LowerTriangularFactor<Scalar>(
        detail::BandedOrDense<Scalar>::dense(Matrix<Scalar>(llt.matrixL())));
  }
  // Banded Cholesky: the factor has the same bandwidth as the covariance.
  const Index bw = omega.bandwidth();
  Matrix<Scalar> l = Matrix<Scalar>::Zero(bw + 1, p);
  auto L = [&](Index i, Index j) -> Scalar& { return l(i - j, j); };
  for (Index j = 0; j < p; ++j) {
    Scalar d = omega(j, j);
    for (Index k = std::max<Index>(0, j - bw); k < j; ++k) d -= L(j, k) * L(j, k);
    if (!(d > Scalar(0)))
      throw NotPositiveDefinite("covariance is not positive definite (pivot " + std::to_string(j + 1) +
                                " is " + std::to_string(static_cast<double>(d)) + ")");
    L(j, j) = sqrt(d);
    for (Index i = j + 1; i <= std::min(p - 1, j + bw); ++i) {
      Scalar s = omega(i, j);
      for (Index k = std::max<Index>(0, i - bw); k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / L(j, j);
    }
  }
  return LowerTriangularFactor<Scalar>(detail::BandedOrDense<Scalar>::banded(std::move(l)));
}

struct MatrixClassReport {
  double gamma = 0.5;
  double A = 3.0;
  double omega0 = 0.45;
  double max_row_power = 0.0;
  double d_omega = 0.0;
  double delta0 = 0.0;
  bool in_class = false;
  std::optional<double> eta;  // needs (theta, r)
};

// eta(theta, r, omega0); requires 0 < theta < r and 0 < omega0 < 1/2.
inline double compute_eta(double theta, double r, double omega0) {
  if (!(theta > 0.0 && theta < r)) throw InvalidArgument("eta requires 0 < theta < r");
  if (!(omega0 >= 0.0 && omega0 < 0.5)) throw InvalidArgument("eta requires 0 <= omega0 < 1/2");
  const double prefactor = theta * r / ((theta + r) * std::sqrt(1.0 + 2.0 * omega0));
  const double m = std::min({2.0 * theta / r, 1.0 - theta / r,
                             std::sqrt(2.0 * (1.0 - omega0)) - 1.0 + theta / r});
  return prefactor * m;
}

template <typename Scalar>
MatrixClassReport check_matrix_class(const CovarianceMatrix<Scalar>& omega, double gamma = 0.5,
                                     double A = 3.0, double omega0 = 0.45,
                                     std::optional<double> theta = {},
                                     std::optional<double> r = {}) {
  using std::abs;
  using std::pow;
  const Index p = omega.p();
  MatrixClassReport rep;
  rep.gamma = gamma;
  rep.A = A;
  rep.omega0 = omega0;

  // Row sums of the strict upper part (inf-norm) and column sums (1-norm).
  std::vector<double> upper_row(p, 0.0), upper_col(p, 0.0), row_power(p, 0.0);
  auto visit = [&](Index i, Index j, double v) {  // i > j, lower entry
    const double a = std::abs(v);
    if (a == 0.0) return;
    const double w = std::pow(a, gamma);
    row_power[i] += w;
    row_power[j] += w;
    upper_row[j] += a;  // U(j, i)
    upper_col[i] += a;
    rep.delta0 = std::max(rep.delta0, a);
  };
  if (omega.is_banded()) {
    for (Index j = 0; j < p; ++j)
      for (Index k = 1; k <= omega.bandwidth() && j + k < p; ++k)
        visit(j + k, j, static_cast<double>(omega.bands()(k, j)));
  } else {
    for (Index j = 0; j < p; ++j)
      for (Index i = j + 1; i < p; ++i) visit(i, j, static_cast<double>(omega(i, j)));
  }
  for (Index i = 0; i < p; ++i) {
    row_power[i] += std::pow(std::abs(static_cast<double>(omega(i, i))), gamma);
    rep.max_row_power = std::max(rep.max_row_power, row_power[i]);
  }
  const double norm_inf = p ? *std::max_element(upper_row.begin(), upper_row.end()) : 0.0;
  const double norm_one = p ? *std::max_element(upper_col.begin(), upper_col.end()) : 0.0;
  rep.d_omega = std::max(norm_one, norm_inf);
  rep.in_class = rep.max_row_power <= A && rep.d_omega <= omega0;
  if (theta && r && *theta > 0.0 && *theta < *r && omega0 < 0.5) rep.eta = compute_eta(*theta, *r, omega0);
  return rep;
}

}  // namespace upt
