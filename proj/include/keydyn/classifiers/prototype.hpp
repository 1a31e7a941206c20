#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "keydyn/error.hpp"

namespace keydyn {

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar squared_euclidean(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).squaredNorm();
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar manhattan(const Eigen::MatrixBase<DerivedA>& a,
                                    const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).template lpNorm<1>();
}

enum class PrototypeMetric { speed, sqeuclidean, manhattan };

/// Nearest-class-mean classifier on raw features. Scores are positive when
/// the sample is closer to the adult mean.
template <typename Scalar>
struct PrototypeModel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  PrototypeMetric metric = PrototypeMetric::sqeuclidean;
  Vector adult_mean;
  Vector child_mean;

  Eigen::Index dimension() const { return adult_mean.size(); }

  template <typename Derived>
  Scalar score(const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != dimension()) {
      throw Error(ErrorCode::dimension_mismatch, "prototype model expects " +
                                                     std::to_string(dimension()) + " features");
    }
    switch (metric) {
      case PrototypeMetric::speed: {
        const Scalar total = x.sum();
        return std::abs(total - child_mean.sum()) - std::abs(total - adult_mean.sum());
      }
      case PrototypeMetric::sqeuclidean:
        return squared_euclidean(x, child_mean) - squared_euclidean(x, adult_mean);
      case PrototypeMetric::manhattan:
        return manhattan(x, child_mean) - manhattan(x, adult_mean);
    }
    return 0;
  }
};

/// Labels are +1 (adult) and -1 (child); rows of `x` are samples.
template <typename Derived>
PrototypeModel<typename Derived::Scalar> train_prototype(const Eigen::MatrixBase<Derived>& x,
                                                         const Eigen::VectorXi& labels,
                                                         PrototypeMetric metric) {
  using Scalar = typename Derived::Scalar;
  PrototypeModel<Scalar> m;
  m.metric = metric;
  m.adult_mean = decltype(m.adult_mean)::Zero(x.cols());
  m.child_mean = decltype(m.child_mean)::Zero(x.cols());
  Eigen::Index adults = 0, children = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (labels(i) > 0) {
      m.adult_mean += x.row(i).transpose();
      ++adults;
    } else {
      m.child_mean += x.row(i).transpose();
      ++children;
    }
  }
  if (adults == 0 || children == 0) {
    throw Error(ErrorCode::missing_class, "prototype training needs both adult and child samples");
  }
  m.adult_mean /= static_cast<Scalar>(adults);
  m.child_mean /= static_cast<Scalar>(children);
  return m;
}

}  // namespace keydyn
