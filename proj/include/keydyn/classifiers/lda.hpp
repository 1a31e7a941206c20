#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "keydyn/classifiers/standardize.hpp"
#include "keydyn/error.hpp"

namespace keydyn {

struct LdaOptions {
  bool standardize = true;
  /// Ridge added to the pooled covariance, as a fraction of its mean eigenvalue.
  double shrinkage = 1e-3;
};

/// Two-class Fisher discriminant: w = (S + lambda I)^-1 (mu_adult - mu_child),
/// with the bias placing the midpoint of the class means at score 0.
template <typename Scalar>
struct LdaModel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::optional<Standardizer<Scalar>> standardizer;
  Vector weights;
  Scalar bias = 0;
  Scalar lambda = 0;
  bool degenerate = false;  // class means (numerically) coincide

  Eigen::Index dimension() const { return weights.size(); }

  template <typename Derived>
  Scalar score(const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != dimension()) {
      throw Error(ErrorCode::dimension_mismatch,
                  "lda model expects " + std::to_string(dimension()) + " features");
    }
    if (standardizer) return weights.dot(standardizer->apply_vector(x)) + bias;
    return weights.dot(x) + bias;
  }
};

/// Pooled within-class covariance with the (n - 2) denominator.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> pooled_covariance(
    const Eigen::MatrixBase<Derived>& x, const Eigen::VectorXi& labels,
    const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>& adult_mean,
    const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>& child_mean) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix centered(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    centered.row(i) = x.row(i) - (labels(i) > 0 ? adult_mean : child_mean).transpose();
  }
  Matrix s = Matrix::Zero(x.cols(), x.cols());
  s.template selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
  s = s.template selfadjointView<Eigen::Lower>();
  return s / static_cast<Scalar>(x.rows() - 2);
}

template <typename Derived>
LdaModel<typename Derived::Scalar> train_lda(const Eigen::MatrixBase<Derived>& x_raw,
                                             const Eigen::VectorXi& labels,
                                             const LdaOptions& opt = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  const Eigen::Index adults = (labels.array() > 0).count();
  const Eigen::Index children = labels.size() - adults;
  if (adults < 2 || children < 2) {
    throw Error(ErrorCode::missing_class, "lda needs at least two samples per class");
  }

  LdaModel<Scalar> m;
  Matrix x = x_raw;
  if (opt.standardize) {
    m.standardizer = fit_standardizer(x);
    x = m.standardizer->apply(x);
  }

  Vector mu_a = Vector::Zero(x.cols()), mu_c = Vector::Zero(x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    (labels(i) > 0 ? mu_a : mu_c) += x.row(i).transpose();
  }
  mu_a /= static_cast<Scalar>(adults);
  mu_c /= static_cast<Scalar>(children);

  Matrix s = pooled_covariance(x, labels, mu_a, mu_c);
  m.lambda = static_cast<Scalar>(opt.shrinkage) * s.trace() / static_cast<Scalar>(s.rows());
  s.diagonal().array() += m.lambda;

  const Vector delta = mu_a - mu_c;
  const Scalar scale = Scalar(1) + std::max(mu_a.norm(), mu_c.norm());
  m.degenerate = delta.norm() <= Scalar(1e-12) * scale;

  Eigen::LDLT<Matrix> ldlt(s);
  m.weights = ldlt.solve(delta);
  if (ldlt.info() != Eigen::Success || !m.weights.allFinite() ||
      !(ldlt.rcond() > std::numeric_limits<Scalar>::epsilon())) {
    throw Error(ErrorCode::singular_covariance, "pooled covariance could not be inverted");
  }
  m.bias = -m.weights.dot((mu_a + mu_c) / Scalar(2));
  return m;
}

}  // namespace keydyn
