#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace keydyn {

/// Per-feature z-scoring fitted on a training fold. Columns whose spread is
/// zero keep mean 0 and stddev 1 (so they pass through unchanged) and are
/// listed in `constant_features`.
template <typename Scalar>
struct Standardizer {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector mean;
  Vector stddev;
  std::vector<Eigen::Index> constant_features;

  Eigen::Index dimension() const { return mean.size(); }

  /// Standardizes every row of `x`.
  template <typename Derived>
  Matrix apply(const Eigen::MatrixBase<Derived>& x) const {
    return ((x.rowwise() - mean.transpose()).array().rowwise() / stddev.transpose().array())
        .matrix();
  }

  /// Standardizes a single column vector.
  template <typename Derived>
  Vector apply_vector(const Eigen::MatrixBase<Derived>& x) const {
    return ((x - mean).array() / stddev.array()).matrix();
  }
};

/// Population (1/N) moments; rows of `x` are samples.
template <typename Derived>
Standardizer<typename Derived::Scalar> fit_standardizer(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Standardizer<Scalar> s;
  const auto n = static_cast<Scalar>(x.rows());
  s.mean = x.colwise().sum().transpose() / n;
  s.stddev.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Scalar var = (x.col(j).array() - s.mean(j)).square().sum() / n;
    const Scalar scale = std::max(Scalar(1), std::abs(s.mean(j)));
    if (!(std::sqrt(var) > Scalar(1e-12) * scale)) {
      s.mean(j) = 0;
      s.stddev(j) = 1;
      s.constant_features.push_back(j);
    } else {
      s.stddev(j) = std::sqrt(var);
    }
  }
  return s;
}

}  // namespace keydyn
