#include "keydyn/eval/cross_validation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "keydyn/error.hpp"

namespace keydyn {

int FoldAssignment::fold(int subject_id) const {
  const auto it = fold_of.find(subject_id);
  if (it == fold_of.end()) {
    throw Error(ErrorCode::invalid_argument, "subject " + std::to_string(subject_id) + " has no fold");
  }
  return it->second;
}

std::vector<int> FoldAssignment::subjects_in(int f) const {
  std::vector<int> out;
  for (const auto& [subject, fold] : fold_of) {
    if (fold == f) out.push_back(subject);
  }
  return out;
}

FoldAssignment make_folds(const Dataset& d, int k, std::uint64_t seed) {
  // Group taken from each subject's first sample.
  std::map<int, AgeGroup> group_of;
  for (const auto& s : d.samples) group_of.emplace(s.meta.subject_id, s.meta.age_group);
  if (k < 2) throw Error(ErrorCode::too_few_subjects, "need at least two folds");
  if (group_of.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::too_few_subjects, std::to_string(group_of.size()) + " subjects for " +
                                                 std::to_string(k) + " folds");
  }

  FoldAssignment out;
  out.k = k;
  out.seed = seed;
  std::mt19937_64 rng(seed);
  std::size_t position = 0;
  for (auto group : {AgeGroup::child, AgeGroup::adult, AgeGroup::impostor}) {
    std::vector<int> ids;
    for (const auto& [id, g] : group_of) {
      if (g == group) ids.push_back(id);
    }
    for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng() % i]);
    for (int id : ids) out.fold_of[id] = static_cast<int>(position++ % static_cast<std::size_t>(k));
  }
  return out;
}

std::vector<Scored> to_scored(const std::vector<ScoredSample>& s) {
  std::vector<Scored> out;
  out.reserve(s.size());
  for (const auto& x : s) out.push_back({x.score, x.label});
  return out;
}

namespace {

struct FoldOutput {
  FoldTrace trace;
  std::vector<ScoredSample> genuine;
  std::vector<ScoredSample> impostor;
};

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

FoldOutput run_fold(int fold, const Dataset& genuine, const FoldAssignment& gfolds, const Dataset* impostors,
                    const FoldAssignment* ifolds, Algorithm algorithm, const AlgorithmConfig& config,
                    std::uint64_t seed) {
  FoldOutput out;
  out.trace.fold = fold;
  std::vector<const LabeledSample*> train;
  std::vector<const LabeledSample*> test_genuine, test_impostor;
  auto split = [&](const Dataset& d, const FoldAssignment& f, std::vector<const LabeledSample*>& test) {
    for (const auto& s : d.samples) {
      if (f.fold(s.meta.subject_id) == fold) {
        test.push_back(&s);
        out.trace.test_subjects.push_back(s.meta.subject_id);
      } else {
        train.push_back(&s);
        out.trace.train_subjects.push_back(s.meta.subject_id);
      }
    }
  };
  split(genuine, gfolds, test_genuine);
  if (impostors) split(*impostors, *ifolds, test_impostor);
  out.trace.train_subjects = sorted_unique(std::move(out.trace.train_subjects));
  out.trace.test_subjects = sorted_unique(std::move(out.trace.test_subjects));

  const auto dim = static_cast<Eigen::Index>(genuine.dimension());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(train.size()), dim);
  Eigen::VectorXi y(static_cast<Eigen::Index>(train.size()));
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = 0; j < dim; ++j) x(r, j) = static_cast<double>(train[i]->features.values[static_cast<std::size_t>(j)]);
    y(r) = class_label(train[i]->meta.age_group);
  }

  const TrainedModel model = fit_algorithm(algorithm, x, y, config, seed + static_cast<std::uint64_t>(fold));
  out.trace.model_fingerprint = model.fingerprint();
  out.trace.converged = model.converged();

  auto score_all = [&](const std::vector<const LabeledSample*>& samples, std::vector<ScoredSample>& dest) {
    Eigen::VectorXd v(dim);
    for (const auto* s : samples) {
      for (Eigen::Index j = 0; j < dim; ++j) v(j) = static_cast<double>(s->features.values[static_cast<std::size_t>(j)]);
      dest.push_back({s->meta.subject_id, s->session, class_label(s->meta.age_group), model.score(v), fold});
    }
  };
  score_all(test_genuine, out.genuine);
  score_all(test_impostor, out.impostor);
  return out;
}

std::vector<FoldOutput> run_folds(const Dataset& genuine, const FoldAssignment& gfolds, const Dataset* impostors,
                                  const FoldAssignment* ifolds, Algorithm algorithm, const AlgorithmConfig& config,
                                  std::uint64_t seed, int jobs) {
  const int k = gfolds.k;
  std::vector<FoldOutput> outputs(static_cast<std::size_t>(k));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(k));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int f = next++; f < k; f = next++) {
      try {
        outputs[static_cast<std::size_t>(f)] =
            run_fold(f, genuine, gfolds, impostors, ifolds, algorithm, config, seed);
      } catch (...) {
        errors[static_cast<std::size_t>(f)] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, k);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (int f = 0; f < k; ++f) {
    if (!errors[static_cast<std::size_t>(f)]) continue;
    try {
      std::rethrow_exception(errors[static_cast<std::size_t>(f)]);
    } catch (const Error& e) {
      throw Error(e.code(), "fold " + std::to_string(f) + ": " + e.detail());
    }
  }
  return outputs;
}

void check_layout(const Dataset& d) {
  if (d.empty()) throw Error(ErrorCode::invalid_argument, "dataset is empty");
  for (const auto& s : d.samples) {
    if (s.features.values.size() != d.dimension()) {
      throw Error(ErrorCode::dimension_mismatch, "sample of subject " + std::to_string(s.meta.subject_id) +
                                                     " does not match the dataset layout");
    }
  }
}

}  // namespace

CvResult cross_validate(const Dataset& d, Algorithm algorithm, const FoldAssignment& folds,
                        const AlgorithmConfig& config, std::uint64_t seed, int jobs) {
  check_layout(d);
  CvResult r;
  for (auto& out : run_folds(d, folds, nullptr, nullptr, algorithm, config, seed, jobs)) {
    r.converged = r.converged && out.trace.converged;
    r.scores.insert(r.scores.end(), out.genuine.begin(), out.genuine.end());
    r.folds.push_back(std::move(out.trace));
  }
  return r;
}

double cv_eer(const CvResult& r, bool fold_average) {
  if (!fold_average) return compute_eer(to_scored(r.scores));
  double sum = 0;
  for (const auto& f : r.folds) {
    std::vector<Scored> s;
    for (const auto& x : r.scores) {
      if (x.fold == f.fold) s.push_back({x.score, x.label});
    }
    sum += compute_eer(s);
  }
  return sum / static_cast<double>(r.folds.size());
}

ImpostorResult impostor_evaluate(const Dataset& genuine, const Dataset& impostors, Algorithm algorithm,
                                 const EvalOptions& options) {
  check_layout(genuine);
  check_layout(impostors);
  if (genuine.phrase != impostors.phrase) {
    throw Error(ErrorCode::dimension_mismatch, "impostor and genuine datasets use different phrases");
  }
  std::set<int> genuine_ids;
  for (const auto& s : genuine.samples) genuine_ids.insert(s.meta.subject_id);
  for (const auto& s : impostors.samples) {
    if (genuine_ids.count(s.meta.subject_id)) {
      throw Error(ErrorCode::overlapping_subjects,
                  "subject " + std::to_string(s.meta.subject_id) + " appears in both datasets");
    }
  }

  const auto gfolds = make_folds(genuine, options.folds, options.seed);
  const auto ifolds = make_folds(impostors, options.folds, options.seed);
  ImpostorResult r;
  for (auto& out : run_folds(genuine, gfolds, &impostors, &ifolds, algorithm, options.config, options.seed,
                             options.jobs)) {
    r.genuine.converged = r.genuine.converged && out.trace.converged;
    r.genuine.scores.insert(r.genuine.scores.end(), out.genuine.begin(), out.genuine.end());
    r.impostor_scores.insert(r.impostor_scores.end(), out.impostor.begin(), out.impostor.end());
    r.genuine.folds.push_back(std::move(out.trace));
  }

  auto below = [](const std::vector<ScoredSample>& s, double threshold) {
    std::size_t n = 0;
    for (const auto& x : s) n += x.score < threshold;
    return static_cast<double>(n) / static_cast<double>(s.size());
  };
  if (!options.fold_average) {
    const auto eer = equal_error(roc_curve(to_scored(r.genuine.scores)));
    r.eer_percent = 100.0 * eer.rate;
    r.impostor_error_percent = 100.0 * below(r.impostor_scores, eer.threshold);
    return r;
  }
  double eer_sum = 0, imp_sum = 0;
  for (const auto& f : r.genuine.folds) {
    std::vector<Scored> g;
    std::vector<ScoredSample> imp;
    for (const auto& x : r.genuine.scores) {
      if (x.fold == f.fold) g.push_back({x.score, x.label});
    }
    for (const auto& x : r.impostor_scores) {
      if (x.fold == f.fold) imp.push_back(x);
    }
    const auto eer = equal_error(roc_curve(g));
    eer_sum += 100.0 * eer.rate;
    imp_sum += 100.0 * below(imp, eer.threshold);
  }
  r.eer_percent = eer_sum / static_cast<double>(r.genuine.folds.size());
  r.impostor_error_percent = imp_sum / static_cast<double>(r.genuine.folds.size());
  return r;
}

}  // namespace keydyn
