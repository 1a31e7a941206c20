#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "keydyn/classifiers/standardize.hpp"
#include "keydyn/error.hpp"

namespace keydyn {

enum class SvmKernel { linear, rbf };

struct SvmOptions {
  SvmKernel kernel = SvmKernel::linear;
  double C = 1.0;
  std::optional<double> gamma;  // rbf width; defaults to 1/d
  double tolerance = 1e-3;      // stop when the maximal KKT violation drops below this
  std::size_t max_iterations = 0;  // 0 picks max(100000, 100 n)
  bool standardize = true;
  bool record_objective = false;
};

template <typename Scalar>
struct SvmModel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  SvmKernel kernel = SvmKernel::linear;
  Scalar gamma = 0;
  std::optional<Standardizer<Scalar>> standardizer;
  Matrix support_vectors;  // rows, in the (standardized) training space
  Vector coefficients;     // alpha_i * y_i
  Scalar bias = 0;
  Vector linear_weights;  // only for the linear kernel

  bool converged = false;
  std::size_t iterations = 0;
  Scalar kkt_gap = 0;
  std::vector<Scalar> dual_objective;  // per iteration, when recorded

  Eigen::Index dimension() const { return support_vectors.cols(); }

  template <typename Derived>
  Scalar score(const Eigen::MatrixBase<Derived>& x_raw) const {
    if (x_raw.size() != dimension()) {
      throw Error(ErrorCode::dimension_mismatch,
                  "svm model expects " + std::to_string(dimension()) + " features");
    }
    const Vector x = standardizer ? standardizer->apply_vector(x_raw) : Vector(x_raw);
    if (kernel == SvmKernel::linear) return linear_weights.dot(x) + bias;
    Scalar s = bias;
    for (Eigen::Index i = 0; i < support_vectors.rows(); ++i) {
      s += coefficients(i) * std::exp(-gamma * (support_vectors.row(i).transpose() - x).squaredNorm());
    }
    return s;
  }
};

namespace detail {

template <typename Matrix>
Matrix kernel_matrix(const Matrix& x, SvmKernel kernel, typename Matrix::Scalar gamma) {
  Matrix k = x * x.transpose();
  if (kernel == SvmKernel::rbf) {
    const auto sq = x.rowwise().squaredNorm().eval();
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      for (Eigen::Index j = 0; j < k.cols(); ++j) {
        const auto d = std::max(typename Matrix::Scalar(0), sq(i) + sq(j) - 2 * k(i, j));
        k(i, j) = std::exp(-gamma * d);
      }
    }
  }
  return k;
}

}  // namespace detail

/// Soft-margin C-SVM trained by SMO with second-order working-set selection.
/// Labels are +1 (adult) / -1 (child); rows of `x` are samples.
template <typename Derived>
SvmModel<typename Derived::Scalar> train_svm(const Eigen::MatrixBase<Derived>& x_raw,
                                             const Eigen::VectorXi& labels,
                                             const SvmOptions& opt = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();
  constexpr Scalar kTau = Scalar(1e-12);

  const Eigen::Index n = x_raw.rows();
  const Eigen::Index adults = (labels.array() > 0).count();
  if (adults == 0 || adults == n) {
    throw Error(ErrorCode::missing_class, "svm training needs both classes");
  }

  SvmModel<Scalar> m;
  m.kernel = opt.kernel;
  m.gamma = static_cast<Scalar>(opt.gamma.value_or(1.0 / static_cast<double>(x_raw.cols())));
  Matrix x = x_raw;
  if (opt.standardize) {
    m.standardizer = fit_standardizer(x);
    x = m.standardizer->apply(x);
  }

  const Matrix k = detail::kernel_matrix(x, opt.kernel, m.gamma);
  const Vector y = labels.cast<Scalar>();
  const Scalar c = static_cast<Scalar>(opt.C);
  Vector alpha = Vector::Zero(n);
  Vector grad = Vector::Constant(n, Scalar(-1));
  auto q = [&](Eigen::Index i, Eigen::Index j) { return y(i) * y(j) * k(i, j); };

  const std::size_t max_iter =
      opt.max_iterations ? opt.max_iterations
                         : std::max<std::size_t>(100000, 100 * static_cast<std::size_t>(n));

  Scalar gap = kInf;
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    // i: maximal violator among the "up" set.
    Scalar gmax = -kInf;
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (y(t) > 0 ? alpha(t) < c : alpha(t) > 0) {
        const Scalar v = -y(t) * grad(t);
        if (v >= gmax) {
          gmax = v;
          i = t;
        }
      }
    }
    // j: best second-order decrease among the "low" set.
    Scalar gmax2 = -kInf;
    Scalar best = kInf;
    Eigen::Index j = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (y(t) > 0 ? alpha(t) > 0 : alpha(t) < c) {
        const Scalar v = y(t) * grad(t);
        gmax2 = std::max(gmax2, v);
        const Scalar diff = gmax + v;
        if (i >= 0 && diff > 0) {
          Scalar quad = k(i, i) + k(t, t) - 2 * k(i, t);
          if (quad <= 0) quad = kTau;
          const Scalar obj = -(diff * diff) / quad;
          if (obj <= best) {
            best = obj;
            j = t;
          }
        }
      }
    }
    gap = gmax + gmax2;
    if (gap < static_cast<Scalar>(opt.tolerance) || j < 0) {
      m.converged = true;
      break;
    }

    const Scalar old_i = alpha(i), old_j = alpha(j);
    if (y(i) != y(j)) {
      Scalar quad = k(i, i) + k(j, j) + 2 * q(i, j);
      if (quad <= 0) quad = kTau;
      const Scalar delta = (-grad(i) - grad(j)) / quad;
      const Scalar diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0) {
        if (alpha(j) < 0) {
          alpha(j) = 0;
          alpha(i) = diff;
        }
      } else if (alpha(i) < 0) {
        alpha(i) = 0;
        alpha(j) = -diff;
      }
      if (diff > 0) {
        if (alpha(i) > c) {
          alpha(i) = c;
          alpha(j) = c - diff;
        }
      } else if (alpha(j) > c) {
        alpha(j) = c;
        alpha(i) = c + diff;
      }
    } else {
      Scalar quad = k(i, i) + k(j, j) - 2 * q(i, j);
      if (quad <= 0) quad = kTau;
      const Scalar delta = (grad(i) - grad(j)) / quad;
      const Scalar sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > c) {
        if (alpha(i) > c) {
          alpha(i) = c;
          alpha(j) = sum - c;
        }
        if (alpha(j) > c) {
          alpha(j) = c;
          alpha(i) = sum - c;
        }
      } else {
        if (alpha(j) < 0) {
          alpha(j) = 0;
          alpha(i) = sum;
        }
        if (alpha(i) < 0) {
          alpha(i) = 0;
          alpha(j) = sum;
        }
      }
    }

    const Scalar di = alpha(i) - old_i, dj = alpha(j) - old_j;
    for (Eigen::Index t = 0; t < n; ++t) grad(t) += q(t, i) * di + q(t, j) * dj;

    if (opt.record_objective) {
      // Dual objective sum(alpha) - 1/2 alpha' Q alpha = -1/2 alpha' (grad - 1).
      m.dual_objective.push_back(-Scalar(0.5) * alpha.dot(grad - Vector::Ones(n)));
    }
  }
  m.iterations = iter;
  m.kkt_gap = gap;

  // Bias from free vectors, else the midpoint of the feasible interval.
  Scalar ub = kInf, lb = -kInf, free_sum = 0;
  Eigen::Index free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const Scalar yg = y(t) * grad(t);
    if (alpha(t) >= c) {
      if (y(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha(t) <= 0) {
      if (y(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const Scalar rho = free_count > 0 ? free_sum / static_cast<Scalar>(free_count) : (ub + lb) / 2;
  m.bias = -rho;

  std::vector<Eigen::Index> sv;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha(t) > 0) sv.push_back(t);
  }
  m.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), x.cols());
  m.coefficients.resize(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t s = 0; s < sv.size(); ++s) {
    const auto r = static_cast<Eigen::Index>(s);
    m.support_vectors.row(r) = x.row(sv[s]);
    m.coefficients(r) = alpha(sv[s]) * y(sv[s]);
  }
  if (m.kernel == SvmKernel::linear) {
    m.linear_weights = m.support_vectors.transpose() * m.coefficients;
  }
  if (sv.empty()) m.support_vectors.resize(0, x.cols());
  return m;
}

}  // namespace keydyn
