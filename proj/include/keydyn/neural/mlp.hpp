#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Core>

#include "keydyn/error.hpp"

namespace keydyn {

enum class InitScheme {
  paper_uniform,  // every weight ~ U(0, 1)
  symmetric,      // U(-r, r) with r = 1/sqrt(fan-in)
};

/// Three-layer perceptron: d inputs, h = round(2d/3) tanh hidden units and a
/// single tanh output. Bias weights sit in the last column of `hidden` and the
/// last entry of `output`.
template <typename Scalar>
struct MlpNetwork {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix hidden;  // h x (d + 1)
  Vector output;  // h + 1

  MlpNetwork() = default;
  MlpNetwork(Eigen::Index inputs, Eigen::Index hidden_units)
      : hidden(Matrix::Zero(hidden_units, inputs + 1)), output(Vector::Zero(hidden_units + 1)) {}

  static Eigen::Index hidden_size_for(Eigen::Index inputs) {
    return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::lround(2.0 * inputs / 3.0)));
  }

  Eigen::Index inputs() const { return hidden.cols() - 1; }
  Eigen::Index hidden_units() const { return hidden.rows(); }
  Eigen::Index parameter_count() const { return hidden.size() + output.size(); }

  /// Hidden weights (column-major) followed by output weights.
  Vector flatten() const {
    Vector p(parameter_count());
    p.head(hidden.size()) = Eigen::Map<const Vector>(hidden.data(), hidden.size());
    p.tail(output.size()) = output;
    return p;
  }

  void unflatten(const Vector& p) {
    if (p.size() != parameter_count()) {
      throw Error(ErrorCode::dimension_mismatch, "flat parameter length mismatch");
    }
    hidden = Eigen::Map<const Matrix>(p.data(), hidden.rows(), hidden.cols());
    output = p.tail(output.size());
  }

  template <typename Derived>
  Scalar forward(const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != inputs()) {
      throw Error(ErrorCode::dimension_mismatch,
                  "network expects " + std::to_string(inputs()) + " inputs");
    }
    const Vector z = hidden.leftCols(inputs()) * x + hidden.col(inputs());
    const Vector h = z.array().tanh().matrix();
    return std::tanh(output.head(hidden_units()).dot(h) + output(hidden_units()));
  }

  /// Outputs for every row of `x`.
  template <typename Derived>
  Vector forward_batch(const Eigen::MatrixBase<Derived>& x) const {
    if (x.cols() != inputs()) {
      throw Error(ErrorCode::dimension_mismatch,
                  "network expects " + std::to_string(inputs()) + " inputs");
    }
    Matrix z = x * hidden.leftCols(inputs()).transpose();
    z.rowwise() += hidden.col(inputs()).transpose();
    const Matrix h = z.array().tanh().matrix();
    Vector out = h * output.head(hidden_units());
    out.array() += output(hidden_units());
    return out.array().tanh().matrix();
  }
};

template <typename Scalar = double>
MlpNetwork<Scalar> init_network(Eigen::Index inputs, std::uint64_t seed,
                                InitScheme scheme = InitScheme::paper_uniform) {
  if (inputs < 1) throw Error(ErrorCode::invalid_argument, "network needs at least one input");
  MlpNetwork<Scalar> net(inputs, MlpNetwork<Scalar>::hidden_size_for(inputs));
  std::mt19937_64 rng(seed);
  auto fill = [&](auto& block, double fan_in) {
    const double r = scheme == InitScheme::paper_uniform ? 1.0 : 1.0 / std::sqrt(fan_in);
    std::uniform_real_distribution<double> u(scheme == InitScheme::paper_uniform ? 0.0 : -r, r);
    for (Eigen::Index i = 0; i < block.size(); ++i) block.data()[i] = static_cast<Scalar>(u(rng));
  };
  fill(net.hidden, static_cast<double>(inputs));
  fill(net.output, static_cast<double>(net.hidden_units()));
  return net;
}

/// Mean squared error against +1/-1 targets, with its exact derivatives.
/// Residuals are e_i = y_i - out_i; the Jacobian rows hold de_i/dtheta, so
/// dMSE/dtheta = (2/N) J' e.
template <typename Scalar>
class MseObjective {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  MseObjective(const MlpNetwork<Scalar>& shape, Matrix inputs, Vector targets)
      : shape_(shape), x_(std::move(inputs)), y_(std::move(targets)) {
    if (x_.rows() == 0) throw Error(ErrorCode::invalid_argument, "empty training batch");
    if (x_.cols() != shape_.inputs() || y_.size() != x_.rows()) {
      throw Error(ErrorCode::dimension_mismatch, "batch does not fit the network");
    }
  }

  Eigen::Index samples() const { return x_.rows(); }
  Eigen::Index parameters() const { return shape_.parameter_count(); }

  Scalar value(const Vector& theta) const {
    return (y_ - net(theta).forward_batch(x_)).squaredNorm() / static_cast<Scalar>(samples());
  }

  Vector residuals(const Vector& theta) const { return y_ - net(theta).forward_batch(x_); }

  Vector gradient(const Vector& theta) const {
    Vector g;
    value_and_gradient(theta, g);
    return g;
  }

  Scalar value_and_gradient(const Vector& theta, Vector& grad) const {
    const auto n = net(theta);
    const Eigen::Index h = n.hidden_units();
    const Eigen::Index d = n.inputs();
    Matrix z = x_ * n.hidden.leftCols(d).transpose();
    z.rowwise() += n.hidden.col(d).transpose();
    const Matrix act = z.array().tanh().matrix();
    Vector out = act * n.output.head(h);
    out.array() += n.output(h);
    out = out.array().tanh().matrix();
    const Vector e = y_ - out;
    const Scalar inv_n = Scalar(1) / static_cast<Scalar>(samples());

    // dMSE/dz_out = -2 e (1 - out^2) / N
    const Vector dz_out = (-2 * inv_n) * (e.array() * (1 - out.array().square())).matrix();
    Vector g_out(h + 1);
    g_out.head(h) = act.transpose() * dz_out;
    g_out(h) = dz_out.sum();

    const Matrix dz_hidden =
        ((dz_out * n.output.head(h).transpose()).array() * (1 - act.array().square())).matrix();
    Matrix g_hidden(h, d + 1);
    g_hidden.leftCols(d) = dz_hidden.transpose() * x_;
    g_hidden.col(d) = dz_hidden.colwise().sum().transpose();

    grad.resize(parameters());
    grad.head(g_hidden.size()) = Eigen::Map<const Vector>(g_hidden.data(), g_hidden.size());
    grad.tail(h + 1) = g_out;
    return e.squaredNorm() * inv_n;
  }

  /// N x W matrix of de_i/dtheta_j.
  Matrix jacobian(const Vector& theta, Vector* residuals_out = nullptr) const {
    const auto n = net(theta);
    const Eigen::Index h = n.hidden_units();
    const Eigen::Index d = n.inputs();
    Matrix z = x_ * n.hidden.leftCols(d).transpose();
    z.rowwise() += n.hidden.col(d).transpose();
    const Matrix act = z.array().tanh().matrix();
    Vector out = act * n.output.head(h);
    out.array() += n.output(h);
    out = out.array().tanh().matrix();

    Matrix jac(samples(), parameters());
    const Eigen::Index hidden_size = h * (d + 1);
    for (Eigen::Index i = 0; i < samples(); ++i) {
      const Scalar s = -(1 - out(i) * out(i));  // de/dz_out
      // Output layer.
      jac.row(i).segment(hidden_size, h) = s * act.row(i);
      jac(i, hidden_size + h) = s;
      // Hidden layer, column-major (unit r, input c) -> r + c*h.
      const Vector dz = s * (n.output.head(h).array() * (1 - act.row(i).transpose().array().square()))
                                .matrix();
      for (Eigen::Index c = 0; c < d; ++c) jac.row(i).segment(c * h, h) = (dz * x_(i, c)).transpose();
      jac.row(i).segment(d * h, h) = dz.transpose();
    }
    if (residuals_out) *residuals_out = y_ - out;
    return jac;
  }

  MlpNetwork<Scalar> net(const Vector& theta) const {
    MlpNetwork<Scalar> n = shape_;
    n.unflatten(theta);
    return n;
  }

 private:
  MlpNetwork<Scalar> shape_;
  Matrix x_;
  Vector y_;
};

}  // namespace keydyn
