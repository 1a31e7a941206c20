#pragma once

#include <Eigen/Core>

namespace keydyn {

enum class LineSearchStatus { ok, not_descent, search_failed };

template <typename Scalar>
struct LineSearchResult {
  LineSearchStatus status = LineSearchStatus::search_failed;
  Scalar step = 0;
  Scalar value = 0;  // f(x0 + step * d) when ok
  Scalar slope = 0;  // g0' d
};

/// Backtracking Armijo search: alpha = 1, 1/2, 1/4, ... until
/// f(x0 + alpha d) <= f0 + c1 alpha g0'd, giving up after `max_halvings`.
template <typename Scalar, typename F>
LineSearchResult<Scalar> line_search(F&& f, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x0,
                                     Scalar f0,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& direction,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& g0,
                                     Scalar c1 = Scalar(1e-4), int max_halvings = 40) {
  LineSearchResult<Scalar> r;
  r.slope = g0.dot(direction);
  if (!(r.slope < 0)) {
    r.status = LineSearchStatus::not_descent;
    return r;
  }
  Scalar alpha = 1;
  for (int i = 0; i <= max_halvings; ++i, alpha /= 2) {
    const Scalar value = f(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(x0 + alpha * direction));
    if (value <= f0 + c1 * alpha * r.slope) {
      r.status = LineSearchStatus::ok;
      r.step = alpha;
      r.value = value;
      return r;
    }
  }
  return r;
}

template <typename Scalar, typename F>
LineSearchResult<Scalar> line_search(F&& f, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x0,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& direction,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& g0) {
  const Scalar f0 = f(x0);
  return line_search<Scalar>(f, x0, f0, direction, g0);
}

}  // namespace keydyn
