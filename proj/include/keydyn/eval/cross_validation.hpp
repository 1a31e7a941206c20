#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "keydyn/core/dataset.hpp"
#include "keydyn/eval/algorithms.hpp"
#include "keydyn/eval/roc.hpp"

namespace keydyn {

/// Subject-level fold membership. All samples of a subject share a fold.
struct FoldAssignment {
  int k = 5;
  std::uint64_t seed = 0;
  std::map<int, int> fold_of;  // subject_id -> fold index

  int fold(int subject_id) const;
  std::vector<int> subjects_in(int fold) const;
};

/// Stratified by age group: each group's subjects are shuffled and dealt
/// round-robin, continuing the deal position from one group to the next.
FoldAssignment make_folds(const Dataset& d, int k, std::uint64_t seed);

struct ScoredSample {
  int subject_id = 0;
  int session = 0;
  int label = 0;
  double score = 0;
  int fold = 0;
};

struct FoldTrace {
  int fold = 0;
  std::vector<int> train_subjects;
  std::vector<int> test_subjects;
  std::uint64_t model_fingerprint = 0;
  bool converged = true;
};

struct CvResult {
  std::vector<ScoredSample> scores;  // fold order, dataset order within a fold
  std::vector<FoldTrace> folds;
  bool converged = true;
};

struct EvalOptions {
  AlgorithmConfig config;
  std::uint64_t seed = 0;
  int folds = 5;
  int jobs = 1;
  bool fold_average = false;  // average per-fold EERs instead of pooling scores
};

std::vector<Scored> to_scored(const std::vector<ScoredSample>& s);

/// Trains on every fold but one and scores the held-out fold, for each fold.
/// The model of fold i is seeded with `seed + i`.
CvResult cross_validate(const Dataset& d, Algorithm algorithm, const FoldAssignment& folds,
                        const AlgorithmConfig& config, std::uint64_t seed, int jobs = 1);

/// Pooled (or fold-averaged) EER in percent.
double cv_eer(const CvResult& r, bool fold_average);

struct ImpostorResult {
  double eer_percent = 0;
  double impostor_error_percent = 0;
  CvResult genuine;
  std::vector<ScoredSample> impostor_scores;
};

/// Folds genuine and impostor subjects separately; each fold trains on the
/// remaining genuine and impostor folds with impostors labelled adult. The
/// impostor error is the fraction of held-out impostor samples scoring below
/// the genuine EER threshold.
ImpostorResult impostor_evaluate(const Dataset& genuine, const Dataset& impostors, Algorithm algorithm,
                                 const EvalOptions& options);

}  // namespace keydyn
