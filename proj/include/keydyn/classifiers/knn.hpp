#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "keydyn/error.hpp"

namespace keydyn {

/// k-nearest-neighbour vote on raw features with Euclidean distance.
///
/// The score is the plain vote sum (+1 per adult neighbour, -1 per child)
/// plus the inverse-distance-weighted vote normalized to (-1, 1). The
/// fractional part makes the score sweepable for ROC analysis, and because
/// its magnitude stays below one it never flips the sign of an odd-k vote.
template <typename Scalar>
struct KnnModel {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix points;
  Eigen::VectorXi labels;
  int k = 3;
  Scalar epsilon = 1;  // microseconds; keeps duplicate points finite

  Eigen::Index dimension() const { return points.cols(); }

  /// Indices of the k nearest training points; distance ties go to the lower index.
  template <typename Derived>
  std::vector<Eigen::Index> neighbors(const Eigen::MatrixBase<Derived>& x,
                                      std::vector<Scalar>* distances = nullptr) const {
    if (x.size() != dimension()) {
      throw Error(ErrorCode::dimension_mismatch,
                  "knn model expects " + std::to_string(dimension()) + " features");
    }
    const Eigen::Index n = points.rows();
    std::vector<Scalar> d(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      d[static_cast<std::size_t>(i)] = (points.row(i).transpose() - x).norm();
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        const auto da = d[static_cast<std::size_t>(a)];
                        const auto db = d[static_cast<std::size_t>(b)];
                        return da < db || (da == db && a < b);
                      });
    order.resize(kk);
    if (distances) {
      distances->clear();
      for (auto i : order) distances->push_back(d[static_cast<std::size_t>(i)]);
    }
    return order;
  }

  template <typename Derived>
  Scalar score(const Eigen::MatrixBase<Derived>& x) const {
    std::vector<Scalar> dist;
    const auto nn = neighbors(x, &dist);
    Scalar votes = 0, weighted = 0, weight_sum = 0;
    for (std::size_t i = 0; i < nn.size(); ++i) {
      const Scalar y = static_cast<Scalar>(labels(nn[i]));
      const Scalar w = Scalar(1) / (dist[i] + epsilon);
      votes += y;
      weighted += y * w;
      weight_sum += w;
    }
    return votes + weighted / weight_sum;
  }
};

template <typename Derived>
KnnModel<typename Derived::Scalar> train_knn(const Eigen::MatrixBase<Derived>& x,
                                             const Eigen::VectorXi& labels, int k = 3) {
  if (x.rows() == 0) throw Error(ErrorCode::missing_class, "knn needs training samples");
  if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be positive");
  KnnModel<typename Derived::Scalar> m;
  m.points = x;
  m.labels = labels;
  m.k = k;
  return m;
}

}  // namespace keydyn
