#pragma once

// Mahalanobis metric: distance evaluation, online accumulation of pairwise
// constraints and the closed-form KISSME metric with PSD spectral clipping.
//
// Everything here is templated on the scalar type and accepts Eigen
// expressions; the double-precision aliases at the bottom are what the rest
// of the library uses.

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "okiss/errors.hpp"

namespace okiss {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Relative ridge: each normalized covariance gets ridge * trace(S)/d added
/// to its diagonal before inversion.
inline constexpr double kDefaultRidge = 1e-6;

namespace detail {

template <typename Scalar>
Scalar quadratic_slack(Scalar diff_sq_norm, Scalar metric_scale) {
  return Scalar(1e-12) * std::max<Scalar>(Scalar(1), diff_sq_norm * metric_scale);
}

// Clamp round-off negatives of a quadratic form under a PSD matrix.
template <typename Scalar>
Scalar clamp_quadratic(Scalar q, Scalar slack) {
  if (q >= Scalar(0)) return q;
  if (q >= -slack) return Scalar(0);
  throw NumericError("metric is not positive semi-definite");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols()) throw StructuralError(std::string(what) + " is not square");
}

}  // namespace detail

/// sqrt((x - y)^T M (x - y)).
template <typename DerivedM, typename DerivedX, typename DerivedY>
typename DerivedM::Scalar mahalanobis_distance(const Eigen::MatrixBase<DerivedM>& metric,
                                               const Eigen::MatrixBase<DerivedX>& x,
                                               const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedM::Scalar;
  detail::require_square(metric, "metric");
  if (x.size() != y.size() || x.size() != metric.rows())
    throw StructuralError("dimension mismatch in mahalanobis_distance");
  if (!x.allFinite() || !y.allFinite() || !metric.allFinite())
    throw NumericError("non-finite input to mahalanobis_distance");

  const Vector<Scalar> diff = x - y;
  const Scalar q = diff.dot(metric * diff);
  const Scalar slack =
      detail::quadratic_slack(diff.squaredNorm(), metric.cwiseAbs().maxCoeff());
  return std::sqrt(detail::clamp_quadratic(q, slack));
}

/// Distances from `query` to every row of `points`. Same semantics as
/// mahalanobis_distance, evaluated as one matrix product.
template <typename DerivedM, typename DerivedP, typename DerivedQ>
Vector<typename DerivedM::Scalar> mahalanobis_distances(const Eigen::MatrixBase<DerivedM>& metric,
                                                        const Eigen::MatrixBase<DerivedP>& points,
                                                        const Eigen::MatrixBase<DerivedQ>& query) {
  using Scalar = typename DerivedM::Scalar;
  detail::require_square(metric, "metric");
  if (points.cols() != metric.rows() || query.size() != metric.rows())
    throw StructuralError("dimension mismatch in mahalanobis_distances");
  if (!query.allFinite()) throw NumericError("non-finite query");

  const Matrix<Scalar> diffs = points.rowwise() - query.transpose();
  const Vector<Scalar> quad = (diffs * metric).cwiseProduct(diffs).rowwise().sum();
  const Scalar scale = metric.size() == 0 ? Scalar(0) : metric.cwiseAbs().maxCoeff();

  Vector<Scalar> out(quad.size());
  for (Eigen::Index i = 0; i < quad.size(); ++i) {
    const Scalar slack = detail::quadratic_slack(diffs.row(i).squaredNorm(), scale);
    out(i) = std::sqrt(detail::clamp_quadratic(quad(i), slack));
  }
  return out;
}

/// Running sums of (x - y)(x - y)^T over similar and dissimilar pairs.
template <typename Scalar>
class ConstraintAccumulator {
 public:
  explicit ConstraintAccumulator(Eigen::Index dim)
      : similar_sum_(Matrix<Scalar>::Zero(dim, dim)),
        dissimilar_sum_(Matrix<Scalar>::Zero(dim, dim)) {
    if (dim < 1) throw StructuralError("accumulator dimension must be positive");
  }

  template <typename DerivedX, typename DerivedY>
  void accumulate_pair(const Eigen::MatrixBase<DerivedX>& x,
                       const Eigen::MatrixBase<DerivedY>& y, bool same_class) {
    if (x.size() != dim() || y.size() != dim())
      throw StructuralError("dimension mismatch in accumulate_pair");
    if (!x.allFinite() || !y.allFinite()) throw NumericError("non-finite pair");

    diff_ = x - y;
    if (same_class) {
      similar_sum_.noalias() += diff_ * diff_.transpose();
      ++similar_count_;
    } else {
      dissimilar_sum_.noalias() += diff_ * diff_.transpose();
      ++dissimilar_count_;
    }
  }

  void clear() {
    similar_sum_.setZero();
    dissimilar_sum_.setZero();
    similar_count_ = 0;
    dissimilar_count_ = 0;
  }

  Eigen::Index dim() const { return similar_sum_.rows(); }
  const Matrix<Scalar>& similar_sum() const { return similar_sum_; }
  const Matrix<Scalar>& dissimilar_sum() const { return dissimilar_sum_; }
  std::size_t similar_count() const { return similar_count_; }
  std::size_t dissimilar_count() const { return dissimilar_count_; }

  Matrix<Scalar> similar_covariance() const {
    if (similar_count_ == 0) throw InsufficientConstraints();
    return similar_sum_ / Scalar(similar_count_);
  }
  Matrix<Scalar> dissimilar_covariance() const {
    if (dissimilar_count_ == 0) throw InsufficientConstraints();
    return dissimilar_sum_ / Scalar(dissimilar_count_);
  }

 private:
  Matrix<Scalar> similar_sum_;
  Matrix<Scalar> dissimilar_sum_;
  std::size_t similar_count_ = 0;
  std::size_t dissimilar_count_ = 0;
  Vector<Scalar> diff_;
};

/// Adds ridge * trace(cov)/d to the diagonal (plain `ridge` if the trace is 0).
template <typename Derived>
Matrix<typename Derived::Scalar> regularize(const Eigen::MatrixBase<Derived>& cov,
                                            typename Derived::Scalar ridge) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(cov, "covariance");
  const Scalar trace = cov.trace();
  const Scalar eps = trace > Scalar(0) ? ridge * trace / Scalar(cov.rows()) : ridge;
  Matrix<Scalar> out = cov;
  out.diagonal().array() += eps;
  return out;
}

/// Inverse of a symmetric positive definite matrix via Cholesky.
template <typename Derived>
Matrix<typename Derived::Scalar> spd_inverse(const Eigen::MatrixBase<Derived>& cov) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(cov, "covariance");
  if (!cov.allFinite()) throw NumericError("non-finite covariance");
  Eigen::LLT<Matrix<Scalar>> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericError("covariance is not positive definite (ridge too small for input scale)");
  Matrix<Scalar> inv = llt.solve(Matrix<Scalar>::Identity(cov.rows(), cov.cols()));
  if (!inv.allFinite())
    throw NumericError("non-finite covariance inverse (ridge too small for input scale)");
  return inv;
}

/// Projection onto the PSD cone: eigenvalues of the symmetric part are
/// clamped at 0. The result is exactly symmetric.
template <typename Derived>
Matrix<typename Derived::Scalar> clip_spectrum(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(m, "matrix");
  const Matrix<Scalar> sym = (m + m.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");

  const Vector<Scalar> clipped = solver.eigenvalues().cwiseMax(Scalar(0));
  const Matrix<Scalar>& vecs = solver.eigenvectors();
  const Matrix<Scalar> full = vecs * clipped.asDiagonal() * vecs.transpose();
  Matrix<Scalar> out = full.template selfadjointView<Eigen::Lower>();
  return out;
}

/// KISSME metric from the accumulated constraints:
/// clip(inv(S1 + e1 I) - inv(S0 + e0 I)) with S1, S0 the count-normalized sums.
template <typename Scalar>
Matrix<Scalar> compute_metric(const ConstraintAccumulator<Scalar>& acc,
                              Scalar ridge = Scalar(kDefaultRidge)) {
  if (acc.similar_count() == 0 || acc.dissimilar_count() == 0) throw InsufficientConstraints();
  if (!(ridge >= Scalar(0))) throw DomainError("ridge must be nonnegative");

  const Matrix<Scalar> similar_inv = spd_inverse(regularize(acc.similar_covariance(), ridge));
  const Matrix<Scalar> dissimilar_inv =
      spd_inverse(regularize(acc.dissimilar_covariance(), ridge));
  Matrix<Scalar> metric = clip_spectrum(similar_inv - dissimilar_inv);
  if (!metric.allFinite()) throw NumericError("non-finite metric");
  return metric;
}

/// log N(x - y; 0, dissimilar) - log N(x - y; 0, similar). Positive values
/// favour the dissimilar hypothesis. Diagnostic only.
template <typename DerivedS1, typename DerivedS0, typename DerivedX, typename DerivedY>
typename DerivedS1::Scalar log_likelihood_ratio(const Eigen::MatrixBase<DerivedS1>& similar_cov,
                                                const Eigen::MatrixBase<DerivedS0>& dissimilar_cov,
                                                const Eigen::MatrixBase<DerivedX>& x,
                                                const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedS1::Scalar;
  detail::require_square(similar_cov, "similar covariance");
  detail::require_square(dissimilar_cov, "dissimilar covariance");
  const Eigen::Index d = similar_cov.rows();
  if (dissimilar_cov.rows() != d || x.size() != d || y.size() != d)
    throw StructuralError("dimension mismatch in log_likelihood_ratio");

  const Vector<Scalar> diff = x - y;
  auto log_density = [&diff](const Matrix<Scalar>& cov) {
    Eigen::LLT<Matrix<Scalar>> llt(cov);
    if (llt.info() != Eigen::Success) throw NumericError("singular covariance");
    const Scalar log_det = Scalar(2) * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const Scalar mahal = diff.dot(llt.solve(diff));
    // The (2 pi)^(d/2) factor cancels in the ratio.
    return Scalar(-0.5) * (mahal + log_det);
  };
  const Scalar result = log_density(dissimilar_cov) - log_density(similar_cov);
  if (!std::isfinite(result)) throw NumericError("non-finite log-likelihood ratio");
  return result;
}

using FeatureVector = Vector<double>;
using MetricMatrix = Matrix<double>;
using Accumulator = ConstraintAccumulator<double>;

}  // namespace okiss
