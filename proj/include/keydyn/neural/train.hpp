#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "keydyn/classifiers/standardize.hpp"
#include "keydyn/error.hpp"
#include "keydyn/neural/line_search.hpp"
#include "keydyn/neural/mlp.hpp"

namespace keydyn {

enum class Optimizer { gda, cgf, bfg, oss, scg, lm };

inline std::string_view to_string(Optimizer o) {
  switch (o) {
    case Optimizer::gda: return "gda";
    case Optimizer::cgf: return "cgf";
    case Optimizer::bfg: return "bfg";
    case Optimizer::oss: return "oss";
    case Optimizer::scg: return "scg";
    case Optimizer::lm: return "lm";
  }
  return "?";
}

inline std::optional<Optimizer> parse_optimizer(std::string_view s) {
  for (auto o : {Optimizer::gda, Optimizer::cgf, Optimizer::bfg, Optimizer::oss, Optimizer::scg,
                 Optimizer::lm}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

struct TrainConfig {
  Optimizer optimizer = Optimizer::lm;
  int max_epochs = 500;
  double error_goal = 1e-3;
  double min_gradient_norm = 1e-6;
  std::uint64_t seed = 0;
  InitScheme init = InitScheme::paper_uniform;

  // gda
  double learning_rate = 0.01;
  double lr_increase = 1.05;
  double lr_decrease = 0.7;
  double max_perf_increase = 1.04;

  // scg
  double scg_sigma = 1e-5;
  double scg_lambda = 5e-7;

  // lm
  double mu = 1e-3;
  double mu_decrease = 0.1;
  double mu_increase = 10;
  double mu_max = 1e10;
};

enum class StopReason { error_goal, min_gradient, max_epochs, line_search_failed, mu_max };

inline std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::error_goal: return "error_goal";
    case StopReason::min_gradient: return "min_gradient";
    case StopReason::max_epochs: return "max_epochs";
    case StopReason::line_search_failed: return "line_search_failed";
    case StopReason::mu_max: return "mu_max";
  }
  return "?";
}

template <typename Scalar>
struct ArmijoStep {
  Scalar f0, value, step, slope;
};

template <typename Scalar>
struct TrainResult {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  MlpNetwork<Scalar> network;
  StopReason stop = StopReason::max_epochs;
  int epochs = 0;
  std::vector<Scalar> loss_trace;  // initial loss, then the loss after every epoch
  std::vector<ArmijoStep<Scalar>> line_steps;  // accepted searches (cgf, bfg, oss)
  Matrix inverse_hessian;                      // final approximation (bfg only)
};

namespace detail {

template <typename Scalar>
class Trainer {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Trainer(const MseObjective<Scalar>& obj, const TrainConfig& cfg, TrainResult<Scalar>& out)
      : obj_(obj), cfg_(cfg), out_(out) {}

  Vector run(Vector theta) {
    switch (cfg_.optimizer) {
      case Optimizer::gda: return gda(std::move(theta));
      case Optimizer::cgf: return searched(std::move(theta), Optimizer::cgf);
      case Optimizer::bfg: return searched(std::move(theta), Optimizer::bfg);
      case Optimizer::oss: return searched(std::move(theta), Optimizer::oss);
      case Optimizer::scg: return scg(std::move(theta));
      case Optimizer::lm: return lm(std::move(theta));
    }
    return theta;
  }

 private:
  const MseObjective<Scalar>& obj_;
  const TrainConfig& cfg_;
  TrainResult<Scalar>& out_;

  Scalar checked(Scalar loss, int epoch) const {
    if (!std::isfinite(static_cast<double>(loss))) {
      throw Error(ErrorCode::diverged, std::string(to_string(cfg_.optimizer)) + " loss became non-finite at epoch " +
                                           std::to_string(epoch));
    }
    return loss;
  }

  /// Shared stopping test at the top of every epoch.
  bool should_stop(int epoch, Scalar loss, const Vector& grad) {
    out_.epochs = epoch;
    if (loss <= static_cast<Scalar>(cfg_.error_goal)) {
      out_.stop = StopReason::error_goal;
      return true;
    }
    if (grad.norm() < static_cast<Scalar>(cfg_.min_gradient_norm)) {
      out_.stop = StopReason::min_gradient;
      return true;
    }
    if (epoch >= cfg_.max_epochs) {
      out_.stop = StopReason::max_epochs;
      return true;
    }
    return false;
  }

  Vector gda(Vector theta) {
    Vector g;
    Scalar loss = checked(obj_.value_and_gradient(theta, g), 0);
    out_.loss_trace.push_back(loss);
    auto lr = static_cast<Scalar>(cfg_.learning_rate);
    for (int epoch = 0; !should_stop(epoch, loss, g); ++epoch) {
      const Vector trial = theta - lr * g;
      Vector g_trial;
      const Scalar trial_loss = checked(obj_.value_and_gradient(trial, g_trial), epoch + 1);
      if (trial_loss > static_cast<Scalar>(cfg_.max_perf_increase) * loss) {
        lr *= static_cast<Scalar>(cfg_.lr_decrease);
      } else {
        if (trial_loss < loss) lr *= static_cast<Scalar>(cfg_.lr_increase);
        theta = trial;
        g = std::move(g_trial);
        loss = trial_loss;
      }
      out_.loss_trace.push_back(loss);
    }
    return theta;
  }

  /// Conjugate-gradient and quasi-Newton methods driven by the Armijo search.
  Vector searched(Vector theta, Optimizer kind) {
    const Eigen::Index w = theta.size();
    auto f = [&](const Vector& p) { return obj_.value(p); };
    Vector g;
    Scalar loss = checked(obj_.value_and_gradient(theta, g), 0);
    out_.loss_trace.push_back(loss);

    Matrix h;
    if (kind == Optimizer::bfg) h = Matrix::Identity(w, w);
    Vector d = kind == Optimizer::bfg ? Vector(-h * g) : Vector(-g);
    Vector s, y;  // last step and gradient change
    Eigen::Index since_restart = 0;

    for (int epoch = 0; !should_stop(epoch, loss, g); ++epoch) {
      auto ls = line_search<Scalar>(f, theta, loss, d, g);
      if (ls.status != LineSearchStatus::ok) {
        // Restart from steepest descent; give up if even that fails.
        d = -g;
        if (kind == Optimizer::bfg) h.setIdentity();
        since_restart = 0;
        ls = line_search<Scalar>(f, theta, loss, d, g);
        if (ls.status != LineSearchStatus::ok) {
          out_.stop = StopReason::line_search_failed;
          break;
        }
      }
      out_.line_steps.push_back({loss, ls.value, ls.step, ls.slope});
      s = ls.step * d;
      theta += s;
      Vector g_new;
      loss = checked(obj_.value_and_gradient(theta, g_new), epoch + 1);
      y = g_new - g;
      ++since_restart;

      switch (kind) {
        case Optimizer::cgf: {
          const Scalar beta = g_new.squaredNorm() / g.squaredNorm();
          d = since_restart % w == 0 ? Vector(-g_new) : Vector(-g_new + beta * d);
          break;
        }
        case Optimizer::bfg: {
          const Scalar sy = s.dot(y);
          if (sy > Scalar(1e-12)) {
            const Scalar rho = 1 / sy;
            const Vector hy = h * y;
            const Scalar yhy = y.dot(hy);
            h.noalias() -= rho * (s * hy.transpose() + hy * s.transpose());
            h.noalias() += (rho * rho * yhy + rho) * (s * s.transpose());
            h = (h + h.transpose()).eval() / Scalar(2);
          }
          d = -h * g_new;
          break;
        }
        case Optimizer::oss: {
          const Scalar sy = s.dot(y);
          if (sy > Scalar(1e-12)) {
            const Scalar sg = s.dot(g_new);
            const Scalar a = -(1 + y.squaredNorm() / sy) * sg / sy + y.dot(g_new) / sy;
            const Scalar b = sg / sy;
            d = -g_new + a * s + b * y;
          } else {
            d = -g_new;
          }
          break;
        }
        default: break;
      }
      g = std::move(g_new);
      if (!(g.dot(d) < 0)) {
        d = -g;
        since_restart = 0;
        if (kind == Optimizer::bfg) h.setIdentity();
      }
      out_.loss_trace.push_back(loss);
    }
    if (kind == Optimizer::bfg) out_.inverse_hessian = std::move(h);
    return theta;
  }

  /// Scaled conjugate gradient following Moller (1993).
  Vector scg(Vector theta) {
    const Eigen::Index w = theta.size();
    Vector g;
    Scalar loss = checked(obj_.value_and_gradient(theta, g), 0);
    out_.loss_trace.push_back(loss);

    Vector r = -g;
    Vector p = r;
    Scalar lambda = static_cast<Scalar>(cfg_.scg_lambda);
    Scalar lambda_bar = 0;
    Scalar delta = 0;
    bool success = true;
    Eigen::Index k = 0;

    for (int epoch = 0; !should_stop(epoch, loss, g); ++epoch) {
      Scalar p2 = p.squaredNorm();
      Scalar mu = p.dot(r);
      if (!(mu > 0)) {
        p = r;
        p2 = p.squaredNorm();
        mu = p2;
        success = true;
        k = 0;
      }
      if (success) {
        const Scalar sigma = static_cast<Scalar>(cfg_.scg_sigma) / std::sqrt(p2);
        const Vector s = (obj_.gradient(Vector(theta + sigma * p)) - g) / sigma;
        delta = p.dot(s);
      }
      delta += (lambda - lambda_bar) * p2;
      if (delta <= 0) {
        lambda_bar = 2 * (lambda - delta / p2);
        delta = -delta + lambda * p2;
        lambda = lambda_bar;
      }
      const Scalar alpha = mu / delta;
      const Vector trial = theta + alpha * p;
      const Scalar trial_loss = checked(obj_.value(trial), epoch + 1);
      const Scalar cmp = 2 * delta * (loss - trial_loss) / (mu * mu);

      if (cmp >= 0) {
        theta = trial;
        loss = trial_loss;
        const Vector r_old = r;
        g = obj_.gradient(theta);
        r = -g;
        lambda_bar = 0;
        success = true;
        ++k;
        if (k % w == 0) {
          p = r;
        } else {
          const Scalar beta = (r.squaredNorm() - r.dot(r_old)) / mu;
          p = r + beta * p;
        }
        if (cmp >= Scalar(0.75)) lambda /= 4;
      } else {
        lambda_bar = lambda;
        success = false;
      }
      if (cmp < Scalar(0.25)) lambda += delta * (1 - cmp) / p2;
      out_.loss_trace.push_back(loss);
    }
    return theta;
  }

  /// Solves (J'J + mu I) delta = J'e, through the N x N system when N < W.
  static Vector lm_step(const Matrix& j, const Vector& e, Scalar mu) {
    if (j.rows() < j.cols()) {
      Matrix a = j * j.transpose();
      a.diagonal().array() += mu;
      return j.transpose() * Eigen::LDLT<Matrix>(a).solve(e);
    }
    Matrix a = j.transpose() * j;
    a.diagonal().array() += mu;
    return Eigen::LDLT<Matrix>(a).solve(j.transpose() * e);
  }

  Vector lm(Vector theta) {
    Vector e;
    Matrix j = obj_.jacobian(theta, &e);
    const auto n = static_cast<Scalar>(obj_.samples());
    Scalar loss = checked(e.squaredNorm() / n, 0);
    Vector g = (2 / n) * (j.transpose() * e);
    out_.loss_trace.push_back(loss);
    auto mu = static_cast<Scalar>(cfg_.mu);

    for (int epoch = 0; !should_stop(epoch, loss, g); ++epoch) {
      bool accepted = false;
      while (!accepted) {
        const Vector trial = theta - lm_step(j, e, mu);
        const Scalar trial_loss = obj_.value(trial);
        if (trial_loss < loss) {
          theta = trial;
          mu *= static_cast<Scalar>(cfg_.mu_decrease);
          accepted = true;
        } else {
          mu *= static_cast<Scalar>(cfg_.mu_increase);
          if (mu > static_cast<Scalar>(cfg_.mu_max)) break;
        }
      }
      if (!accepted) {
        out_.stop = StopReason::mu_max;
        out_.epochs = epoch + 1;
        out_.loss_trace.push_back(loss);
        break;
      }
      j = obj_.jacobian(theta, &e);
      loss = checked(e.squaredNorm() / n, epoch + 1);
      g = (2 / n) * (j.transpose() * e);
      out_.loss_trace.push_back(loss);
    }
    return theta;
  }
};

}  // namespace detail

/// Full-batch training of `net` on rows of `x` (already standardized) against
/// targets in {+1, -1}.
template <typename Scalar>
TrainResult<Scalar> train_network(const MlpNetwork<Scalar>& net,
                                  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& x,
                                  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& targets,
                                  const TrainConfig& cfg) {
  if (cfg.max_epochs < 0 || !(cfg.error_goal >= 0) || !(cfg.min_gradient_norm >= 0)) {
    throw Error(ErrorCode::invalid_argument, "training bounds must be non-negative");
  }
  const MseObjective<Scalar> obj(net, x, targets);
  TrainResult<Scalar> out;
  detail::Trainer<Scalar> trainer(obj, cfg, out);
  out.network = obj.net(trainer.run(net.flatten()));
  return out;
}

/// A standardizer plus a trained network; the score is the network output.
template <typename Scalar>
struct MlpModel {
  Standardizer<Scalar> standardizer;
  MlpNetwork<Scalar> network;
  StopReason stop = StopReason::max_epochs;
  int epochs = 0;
  Scalar final_loss = 0;

  Eigen::Index dimension() const { return network.inputs(); }

  template <typename Derived>
  Scalar score(const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != dimension()) {
      throw Error(ErrorCode::dimension_mismatch,
                  "mlp model expects " + std::to_string(dimension()) + " features");
    }
    return network.forward(standardizer.apply_vector(x));
  }
};

template <typename Derived>
MlpModel<typename Derived::Scalar> train_mlp(const Eigen::MatrixBase<Derived>& x_raw,
                                             const Eigen::VectorXi& labels, const TrainConfig& cfg) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index adults = (labels.array() > 0).count();
  if (adults == 0 || adults == labels.size()) {
    throw Error(ErrorCode::missing_class, "mlp training needs both classes");
  }
  MlpModel<Scalar> m;
  m.standardizer = fit_standardizer(x_raw);
  const Matrix x = m.standardizer.apply(x_raw);
  const auto init = init_network<Scalar>(x.cols(), cfg.seed, cfg.init);
  auto result = train_network<Scalar>(init, x, labels.cast<Scalar>(), cfg);
  m.network = std::move(result.network);
  m.stop = result.stop;
  m.epochs = result.epochs;
  m.final_loss = result.loss_trace.back();
  return m;
}

}  // namespace keydyn
