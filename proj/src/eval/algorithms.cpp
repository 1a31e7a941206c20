#include "keydyn/eval/algorithms.hpp"

#include <array>
#include <cstring>

#include "keydyn/error.hpp"

namespace keydyn {

namespace {

constexpr std::array kAlgorithms = {
    Algorithm::speed,      Algorithm::euclidean, Algorithm::manhattan, Algorithm::knn, Algorithm::lda,
    Algorithm::svm_linear, Algorithm::svm_rbf,   Algorithm::gda,       Algorithm::cgf, Algorithm::bfg,
    Algorithm::oss,        Algorithm::scg,       Algorithm::lm,
};

class Fnv {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= c[i];
      h_ *= 1099511628211ull;
    }
  }
  void scalar(double v) { bytes(&v, sizeof v); }
  void integer(std::int64_t v) { bytes(&v, sizeof v); }
  template <typename Derived>
  void block(const Eigen::DenseBase<Derived>& m) {
    integer(m.rows());
    integer(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) scalar(static_cast<double>(m(i, j)));
    }
  }
  void standardizer(const Standardizer<double>& s) {
    block(s.mean);
    block(s.stddev);
  }
  void standardizer(const std::optional<Standardizer<double>>& s) {
    integer(s.has_value());
    if (s) standardizer(*s);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 14695981039346656037ull;
};

Optimizer optimizer_for(Algorithm a) {
  switch (a) {
    case Algorithm::gda: return Optimizer::gda;
    case Algorithm::cgf: return Optimizer::cgf;
    case Algorithm::bfg: return Optimizer::bfg;
    case Algorithm::oss: return Optimizer::oss;
    case Algorithm::scg: return Optimizer::scg;
    default: return Optimizer::lm;
  }
}

}  // namespace

std::span<const Algorithm> all_algorithms() { return kAlgorithms; }

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::speed: return "speed";
    case Algorithm::euclidean: return "euclidean";
    case Algorithm::manhattan: return "manhattan";
    case Algorithm::knn: return "knn";
    case Algorithm::lda: return "lda";
    case Algorithm::svm_linear: return "svm-linear";
    case Algorithm::svm_rbf: return "svm-rbf";
    case Algorithm::gda: return "gda";
    case Algorithm::cgf: return "cgf";
    case Algorithm::bfg: return "bfg";
    case Algorithm::oss: return "oss";
    case Algorithm::scg: return "scg";
    case Algorithm::lm: return "lm";
  }
  return "?";
}

std::string_view display_name(Algorithm a) {
  switch (a) {
    case Algorithm::speed: return "Speed (Total time)";
    case Algorithm::euclidean: return "Euclidean distance";
    case Algorithm::manhattan: return "Manhattan distance";
    case Algorithm::knn: return "Nearest neighbor";
    case Algorithm::lda: return "Linear discriminant analysis";
    case Algorithm::svm_linear: return "Support vector machine (Linear)";
    case Algorithm::svm_rbf: return "Support vector machine (RBF)";
    case Algorithm::gda: return "Gradient descent bp.";
    case Algorithm::cgf: return "Conjugate gr. bp. with FR updates";
    case Algorithm::bfg: return "BFGS quasi-Newton bp.";
    case Algorithm::oss: return "One step secant bp.";
    case Algorithm::scg: return "Scaled conjugate gradient bp.";
    case Algorithm::lm: return "Levenberg-Marquardt bp.";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (auto a : kAlgorithms) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

bool is_neural(Algorithm a) {
  switch (a) {
    case Algorithm::gda:
    case Algorithm::cgf:
    case Algorithm::bfg:
    case Algorithm::oss:
    case Algorithm::scg:
    case Algorithm::lm: return true;
    default: return false;
  }
}

double TrainedModel::score(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (pre_) {
    const Eigen::VectorXd z = pre_->apply_vector(x);
    return std::visit([&](const auto& m) { return static_cast<double>(m.score(z)); }, inner_);
  }
  return std::visit([&](const auto& m) { return static_cast<double>(m.score(x)); }, inner_);
}

bool TrainedModel::converged() const {
  if (const auto* svm = std::get_if<SvmModel<double>>(&inner_)) return svm->converged;
  return true;
}

std::uint64_t TrainedModel::fingerprint() const {
  Fnv h;
  h.integer(static_cast<int>(algorithm_));
  h.standardizer(pre_);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PrototypeModel<double>>) {
          h.block(m.adult_mean);
          h.block(m.child_mean);
        } else if constexpr (std::is_same_v<T, KnnModel<double>>) {
          h.block(m.points);
          h.block(m.labels);
          h.integer(m.k);
        } else if constexpr (std::is_same_v<T, LdaModel<double>>) {
          h.standardizer(m.standardizer);
          h.block(m.weights);
          h.scalar(m.bias);
        } else if constexpr (std::is_same_v<T, SvmModel<double>>) {
          h.standardizer(m.standardizer);
          h.block(m.support_vectors);
          h.block(m.coefficients);
          h.scalar(m.bias);
          h.scalar(m.gamma);
        } else {
          h.standardizer(m.standardizer);
          h.block(m.network.hidden);
          h.block(m.network.output);
        }
      },
      inner_);
  return h.value();
}

TrainedModel fit_algorithm(Algorithm algorithm, const Eigen::MatrixXd& x, const Eigen::VectorXi& labels,
                           const AlgorithmConfig& config, std::uint64_t seed) {
  if (x.rows() != labels.size()) {
    throw Error(ErrorCode::dimension_mismatch, "feature rows and labels differ in length");
  }
  const Eigen::Index adults = (labels.array() > 0).count();
  if (adults == 0 || adults == labels.size()) {
    throw Error(ErrorCode::missing_class,
                std::string(to_string(algorithm)) + " training needs both adult and child samples");
  }

  auto distance_model = [&](auto&& train) {
    if (!config.standardize_distances) return TrainedModel(algorithm, train(x));
    auto pre = fit_standardizer(x);
    const Eigen::MatrixXd z = pre.apply(x);
    return TrainedModel(algorithm, train(z), std::move(pre));
  };

  switch (algorithm) {
    case Algorithm::speed:
    case Algorithm::euclidean:
    case Algorithm::manhattan: {
      const auto metric = algorithm == Algorithm::speed       ? PrototypeMetric::speed
                          : algorithm == Algorithm::euclidean ? PrototypeMetric::sqeuclidean
                                                              : PrototypeMetric::manhattan;
      return distance_model([&](const Eigen::MatrixXd& m) { return train_prototype(m, labels, metric); });
    }
    case Algorithm::knn:
      return distance_model([&](const Eigen::MatrixXd& m) {
        auto model = train_knn(m, labels, config.knn_k);
        model.epsilon = config.knn_epsilon;
        return model;
      });
    case Algorithm::lda:
      return TrainedModel(algorithm, train_lda(x, labels, config.lda));
    case Algorithm::svm_linear:
    case Algorithm::svm_rbf: {
      SvmOptions opt;
      opt.kernel = algorithm == Algorithm::svm_linear ? SvmKernel::linear : SvmKernel::rbf;
      opt.C = config.svm_c;
      opt.gamma = config.svm_gamma;
      opt.tolerance = config.svm_tolerance;
      opt.standardize = config.svm_standardize;
      return TrainedModel(algorithm, train_svm(x, labels, opt));
    }
    default: {
      TrainConfig cfg = config.mlp;
      cfg.optimizer = optimizer_for(algorithm);
      cfg.seed = seed;
      return TrainedModel(algorithm, train_mlp(x, labels, cfg));
    }
  }
}

}  // namespace keydyn
