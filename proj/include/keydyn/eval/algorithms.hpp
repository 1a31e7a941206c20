#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Core>

#include "keydyn/classifiers/knn.hpp"
#include "keydyn/classifiers/lda.hpp"
#include "keydyn/classifiers/prototype.hpp"
#include "keydyn/classifiers/standardize.hpp"
#include "keydyn/classifiers/svm.hpp"
#include "keydyn/neural/train.hpp"

namespace keydyn {

/// The thirteen algorithms, in report order.
enum class Algorithm {
  speed,
  euclidean,
  manhattan,
  knn,
  lda,
  svm_linear,
  svm_rbf,
  gda,
  cgf,
  bfg,
  oss,
  scg,
  lm,
};

std::span<const Algorithm> all_algorithms();
std::string_view to_string(Algorithm a);
/// Table label, e.g. "Support vector machine (Linear)".
std::string_view display_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
bool is_neural(Algorithm a);

struct AlgorithmConfig {
  bool standardize_distances = false;  // prototype and kNN run on raw features by default
  int knn_k = 3;
  double knn_epsilon = 1.0;
  LdaOptions lda;
  double svm_c = 1.0;
  std::optional<double> svm_gamma;  // 1/d when unset
  double svm_tolerance = 1e-3;
  bool svm_standardize = true;
  TrainConfig mlp;  // optimizer and seed are filled in per run
};

/// Any fitted classifier; higher scores mean more adult-like.
class TrainedModel {
 public:
  using Inner = std::variant<PrototypeModel<double>, KnnModel<double>, LdaModel<double>,
                             SvmModel<double>, MlpModel<double>>;

  TrainedModel(Algorithm algorithm, Inner inner, std::optional<Standardizer<double>> pre = {})
      : algorithm_(algorithm), inner_(std::move(inner)), pre_(std::move(pre)) {}

  Algorithm algorithm() const { return algorithm_; }
  const Inner& inner() const { return inner_; }

  double score(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// False only when an iterative solver stopped before its tolerance.
  bool converged() const;

  /// FNV-1a hash over every fitted parameter.
  std::uint64_t fingerprint() const;

 private:
  Algorithm algorithm_;
  Inner inner_;
  std::optional<Standardizer<double>> pre_;
};

/// Fits `algorithm` on rows of `x` with labels +1 (adult) / -1 (child).
/// `seed` drives network initialization and is ignored elsewhere.
TrainedModel fit_algorithm(Algorithm algorithm, const Eigen::MatrixXd& x, const Eigen::VectorXi& labels,
                           const AlgorithmConfig& config, std::uint64_t seed);

}  // namespace keydyn
