// Acceptance suite: one PASS/FAIL/SKIP line per criterion, exit status 1 if
// anything failed. Each check builds its inputs from fixed seeds and compares
// the library against an independent test-side oracle.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "keydyn/classifiers/knn.hpp"
#include "keydyn/classifiers/lda.hpp"
#include "keydyn/classifiers/svm.hpp"
#include "keydyn/core/features.hpp"
#include "keydyn/core/raw_session.hpp"
#include "keydyn/error.hpp"
#include "keydyn/eval/cross_validation.hpp"
#include "keydyn/eval/roc.hpp"
#include "keydyn/ingest/store.hpp"
#include "keydyn/neural/train.hpp"
#include "keydyn/synth/population.hpp"
#include "oracles/classifier_oracles.hpp"
#include "oracles/eer_oracle.hpp"
#include "oracles/feature_oracle.hpp"
#include "oracles/random_stream.hpp"
#include "oracles/temp_dir.hpp"

using namespace keydyn;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict = Verdict::pass;
  std::string detail;
};

/// Collects failures without stopping at the first one.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ += !ok;
  }
  Outcome outcome(const std::string& summary) const {
    if (failed_ == 0) return {Verdict::pass, summary};
    std::string d = std::to_string(failed_) + "/" + std::to_string(checks_) + " checks failed";
    for (const auto& f : failures_) d += "; " + f;
    return {Verdict::fail, d};
  }

 private:
  long checks_ = 0;
  long failed_ = 0;
  std::vector<std::string> failures_;
};

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// 1 -------------------------------------------------------------------------

Outcome feature_oracle() {
  Tally t;
  std::mt19937_64 rng(1001);
  int streams = 0;
  for (const auto* spec : {&turkish_phrase(), &password_phrase()}) {
    for (int i = 0; i < 1000; ++i) {
      const auto events = testing::random_stream(*spec, rng, {.sprinkle_modifiers = i % 4 == 0});
      const auto fv = extract_features(events, *spec);
      t.expect(fv.values == testing::oracle_features(events, *spec),
               std::string(to_string(spec->id)) + " stream " + std::to_string(i));
      ++streams;
    }
  }
  return t.outcome(std::to_string(streams) + " streams equal the brute-force recomputation");
}

// 2 -------------------------------------------------------------------------

std::vector<Scored> random_scores(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(2, 200);
  std::uniform_int_distribution<int> coarse(0, 20);
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = size(rng);
  const bool ties = rng() % 2 == 0;
  std::vector<Scored> s;
  for (int i = 0; i < n; ++i) {
    const int label = i == 0 ? 1 : i == 1 ? -1 : (rng() % 2 ? 1 : -1);
    s.push_back({ties ? coarse(rng) + (label > 0 ? 3.0 : 0.0) : g(rng) + (label > 0 ? 0.7 : 0.0), label});
  }
  return s;
}

Outcome eer_oracle() {
  Tally t;
  std::mt19937_64 rng(2002);
  double worst = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = random_scores(rng);
    std::vector<testing::OracleScore> o;
    for (const auto& x : s) o.push_back({x.score, x.label});
    const double eer = compute_eer(s);
    const double expected = testing::brute_force_eer(o);
    worst = std::max(worst, std::abs(eer - expected));
    t.expect(std::abs(eer - expected) <= 1e-12, "set " + std::to_string(trial));

    auto mapped = s, negated = s;
    for (auto& x : mapped) x.score = std::exp(x.score / 4) * 3 + 7;
    for (auto& x : negated) {
      x.score = -x.score;
      x.label = -x.label;
    }
    t.expect(compute_eer(mapped) == eer, "monotone transform, set " + std::to_string(trial));
    t.expect(compute_eer(negated) == eer, "negation, set " + std::to_string(trial));
  }
  return t.outcome("500 sets, max deviation " + fmt(worst) + "; monotone and negation invariance exact");
}

// 3 -------------------------------------------------------------------------

Outcome classifier_oracles() {
  Tally t;
  std::mt19937_64 rng(3003);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-3, 3);

  double lda_worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), b = u(rng), c = 0.5 * u(rng);
    std::vector<testing::Point2> pts;
    MatrixXd x(40, 2);
    VectorXi y(40);
    for (int i = 0; i < 40; ++i) {
      const int label = i < 18 ? 1 : -1;
      const double e0 = g(rng), e1 = g(rng);
      x(i, 0) = e0 + (label > 0 ? a : 0.0);
      x(i, 1) = c * e0 + e1 + (label > 0 ? b : 0.0);
      y(i) = label;
      pts.push_back({x(i, 0), x(i, 1), label});
    }
    const auto f = testing::fisher_2d(pts);
    const auto m = train_lda(x, y, {.standardize = false, .shrinkage = 0.0});
    const VectorXd w = (VectorXd(2) << f[0], f[1]).finished();
    const double rel = (m.weights - w).norm() / w.norm();
    lda_worst = std::max(lda_worst, rel);
    t.expect(rel <= 1e-8, "lda instance " + std::to_string(trial));
  }

  MatrixXd two(2, 1);
  two << -1, 1;
  const auto svm = train_svm(two, (VectorXi(2) << -1, 1).finished(), {.C = 1e3});
  double svm_worst = 0;
  for (double q : {-2.0, -1.0, -0.5, 0.0, 0.25, 1.0, 2.5}) {
    svm_worst = std::max(svm_worst, std::abs(svm.score(VectorXd::Constant(1, q)) - q));
  }
  t.expect(svm_worst <= 1e-3, "two-point svm deviation " + fmt(svm_worst));

  MatrixXd xor_x(4, 2);
  xor_x << 1, 1, -1, -1, 1, -1, -1, 1;
  const VectorXi xor_y = (VectorXi(4) << 1, 1, -1, -1).finished();
  const auto rbf = train_svm(xor_x, xor_y, {.kernel = SvmKernel::rbf, .gamma = 1.0});
  int xor_correct = 0;
  for (Eigen::Index i = 0; i < 4; ++i) xor_correct += (rbf.score(VectorXd(xor_x.row(i).transpose())) >= 0 ? 1 : -1) == xor_y(i);
  t.expect(xor_correct == 4, "rbf xor training accuracy " + std::to_string(xor_correct) + "/4");

  std::uniform_int_distribution<int> v(0, 1000);
  int knn_checked = 0, knn_ties = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 6 + trial % 10, d = 1 + trial % 4;
    std::vector<std::vector<double>> pts(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(d)));
    std::vector<int> lab(static_cast<std::size_t>(n));
    MatrixXd x(n, d);
    VectorXi y(n);
    for (int i = 0; i < n; ++i) {
      const auto si = static_cast<std::size_t>(i);
      lab[si] = y(i) = v(rng) % 2 ? 1 : -1;
      for (int j = 0; j < d; ++j) x(i, j) = pts[si][static_cast<std::size_t>(j)] = v(rng);
    }
    std::vector<double> q(static_cast<std::size_t>(d));
    VectorXd qv(d);
    for (int j = 0; j < d; ++j) qv(j) = q[static_cast<std::size_t>(j)] = v(rng);
    const int expected = testing::majority_of_three(pts, lab, q);
    if (expected == 0) {
      ++knn_ties;  // the neighbour set itself is ambiguous
      continue;
    }
    ++knn_checked;
    t.expect((train_knn(x, y, 3).score(qv) >= 0 ? 1 : -1) == expected, "3-nn instance " + std::to_string(trial));
  }
  return t.outcome("lda rel. err " + fmt(lda_worst) + ", two-point svm dev " + fmt(svm_worst) + ", xor " +
                   std::to_string(xor_correct) + "/4, 3-nn " + std::to_string(knn_checked) + " agree (" +
                   std::to_string(knn_ties) + " distance ties skipped)");
}

// 4 -------------------------------------------------------------------------

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

Outcome neural_correctness() {
  Tally t;
  std::mt19937_64 rng(4004);
  std::normal_distribution<double> g(0.0, 1.0);
  double grad_worst = 0, identity_worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 2 + trial % 5, n = 4 + trial;
    MatrixXd x(n, d);
    VectorXd y(n);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = g(rng) > 0 ? 1.0 : -1.0;
    const auto net = init_network(d, static_cast<std::uint64_t>(100 + trial), InitScheme::symmetric);
    const MseObjective<double> obj(net, x, y);
    const VectorXd theta = net.flatten();
    const VectorXd grad = obj.gradient(theta);
    VectorXd e;
    const MatrixXd j = obj.jacobian(theta, &e);
    const double dev = (grad - (2.0 / static_cast<double>(n)) * j.transpose() * e).cwiseAbs().maxCoeff();
    identity_worst = std::max(identity_worst, dev);
    t.expect(dev <= 1e-10, "identity, network " + std::to_string(trial));
    for (Eigen::Index p = 0; p < theta.size(); ++p) {
      VectorXd plus = theta, minus = theta;
      plus(p) += 1e-6;
      minus(p) -= 1e-6;
      const double fd = (obj.value(plus) - obj.value(minus)) / 2e-6;
      grad_worst = std::max(grad_worst, relative_error(grad(p), fd));
      t.expect(relative_error(grad(p), fd) <= 1e-5, "gradient, network " + std::to_string(trial));
    }
  }

  std::normal_distribution<double> blob(0.0, 0.3);
  MatrixXd x(100, 2);
  VectorXd y(100);
  int row = 0;
  for (double cx : {-2.0, 2.0}) {
    for (double cy : {-2.0, 2.0}) {
      for (int i = 0; i < 25; ++i, ++row) {
        x(row, 0) = cx + blob(rng);
        x(row, 1) = cy + blob(rng);
        y(row) = cx > 0 ? 1.0 : -1.0;
      }
    }
  }
  std::string losses;
  for (auto opt : {Optimizer::gda, Optimizer::cgf, Optimizer::bfg, Optimizer::oss, Optimizer::scg, Optimizer::lm}) {
    TrainConfig cfg;
    cfg.optimizer = opt;
    cfg.init = InitScheme::symmetric;
    cfg.seed = 3;
    const auto res = train_network<double>(init_network(2, cfg.seed, cfg.init), x, y, cfg);
    const double mse = res.loss_trace.back();
    losses += std::string(losses.empty() ? "" : " ") + std::string(to_string(opt)) + "=" + fmt(mse, 2);
    t.expect(mse < 0.05 && res.epochs <= 500, std::string(to_string(opt)) + " final mse " + fmt(mse));
    if (opt == Optimizer::lm) {
      for (std::size_t k = 1; k < res.loss_trace.size(); ++k) {
        t.expect(res.loss_trace[k] <= res.loss_trace[k - 1], "lm loss rose at epoch " + std::to_string(k));
      }
    }
  }
  return t.outcome("fd rel. err " + fmt(grad_worst) + ", identity " + fmt(identity_worst) + ", mse " + losses);
}

// 5 -------------------------------------------------------------------------

Dataset shuffle_groups(Dataset d, std::uint64_t seed) {
  std::vector<int> ids;
  for (const auto& s : d.samples) {
    if (ids.empty() || ids.back() != s.meta.subject_id) ids.push_back(s.meta.subject_id);
  }
  std::vector<AgeGroup> groups;
  for (std::size_t i = 0; i < ids.size(); ++i) groups.push_back(i % 2 ? AgeGroup::child : AgeGroup::adult);
  std::mt19937_64 rng(seed);
  std::shuffle(groups.begin(), groups.end(), rng);
  std::map<int, AgeGroup> of;
  for (std::size_t i = 0; i < ids.size(); ++i) of[ids[i]] = groups[i];
  for (auto& s : d.samples) s.meta.age_group = of[s.meta.subject_id];
  return d;
}

Outcome pipeline_property() {
  Tally t;
  const std::uint64_t seed = 2016;
  const auto pop = synthesize_population({.subjects = 100, .sessions = 5, .seed = seed});
  const auto concat = concat_datasets(pop.turkish, pop.password);
  std::string detail;
  for (const Dataset* d : {&pop.turkish, &pop.password, &concat}) {
    const auto folds = make_folds(*d, 5, seed);
    const std::string name(to_string(d->phrase));
    const double svm = cv_eer(cross_validate(*d, Algorithm::svm_linear, folds, {}, seed, 1), false);
    t.expect(svm <= 10.0, name + " svm-linear " + fmt(svm));
    detail += name + ": svm " + fmt(svm);
    for (auto a : {Algorithm::speed, Algorithm::euclidean, Algorithm::manhattan}) {
      const double eer = cv_eer(cross_validate(*d, a, folds, {}, seed, 1), false);
      t.expect(eer <= 15.0, name + " " + std::string(to_string(a)) + " " + fmt(eer));
      detail += " " + std::string(to_string(a)) + " " + fmt(eer);
    }
    detail += "; ";
  }
  // Shuffled-label control: the mean over ten independent relabelings.
  double sum = 0, lo = 100, hi = 0;
  for (std::uint64_t r = 0; r < 10; ++r) {
    const auto d = shuffle_groups(pop.turkish, 500 + r);
    const double eer = cv_eer(cross_validate(d, Algorithm::svm_linear, make_folds(d, 5, r), {}, r, 1), false);
    sum += eer;
    lo = std::min(lo, eer);
    hi = std::max(hi, eer);
  }
  const double control = sum / 10;
  t.expect(control >= 40 && control <= 60, "shuffled control " + fmt(control));
  return t.outcome(detail + "shuffled control mean " + fmt(control) + " (range " + fmt(lo) + ".." + fmt(hi) + ")");
}

// 6 -------------------------------------------------------------------------

const std::map<Algorithm, std::array<double, 3>> kTable1 = {
    {Algorithm::speed, {10.4, 16.4, 12.4}},     {Algorithm::euclidean, {10.4, 16.0, 12.8}},
    {Algorithm::manhattan, {10.4, 16.4, 12.0}}, {Algorithm::knn, {10.8, 16.0, 12.0}},
    {Algorithm::lda, {10.0, 11.6, 9.6}},
};

std::optional<Dataset> load_optional(const std::filesystem::path& p) {
  if (!std::filesystem::exists(p)) return std::nullopt;
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset_csv(ss.str());
}

double mean_eer(const Dataset& d, Algorithm a, int seeds) {
  double sum = 0;
  for (int s = 0; s < seeds; ++s) {
    sum += cv_eer(cross_validate(d, a, make_folds(d, 5, static_cast<std::uint64_t>(s)), {}, static_cast<std::uint64_t>(s), 1),
                  false);
  }
  return sum / seeds;
}

Outcome conditional_reproduction() {
  const char* dir = std::getenv("KEYDYN_PAPER_DATA_DIR");
  if (!dir || !*dir) return {Verdict::skip, "KEYDYN_PAPER_DATA_DIR not set"};
  const std::filesystem::path root(dir);
  const auto turkish = load_optional(root / "turkish.csv");
  const auto password = load_optional(root / "password.csv");
  if (!turkish || !password) return {Verdict::fail, "expected turkish.csv and password.csv in " + root.string()};
  const Dataset concat = concat_datasets(*turkish, *password);

  Tally t;
  std::string detail;
  const std::array<const Dataset*, 3> sets{&*turkish, &*password, &concat};
  for (const auto& [algo, expected] : kTable1) {
    for (std::size_t k = 0; k < 3; ++k) {
      const double eer = mean_eer(*sets[k], algo, 10);
      t.expect(std::abs(eer - expected[k]) <= 3.0,
               std::string(to_string(algo)) + "/" + std::string(to_string(sets[k]->phrase)) + " " + fmt(eer) +
                   " vs " + fmt(expected[k]));
    }
  }
  const double svm = mean_eer(*turkish, Algorithm::svm_linear, 10);
  t.expect(std::abs(svm - 8.8) <= 3.0, "svm-linear/turkish " + fmt(svm) + " vs 8.8");
  detail += "svm-linear turkish " + fmt(svm);

  const auto imp_t = load_optional(root / "impostor_turkish.csv");
  const auto imp_p = load_optional(root / "impostor_password.csv");
  if (imp_t && imp_p) {
    const Dataset imp_concat = concat_datasets(*imp_t, *imp_p);
    double eer = 0, imp = 0;
    for (int s = 0; s < 10; ++s) {
      EvalOptions opt;
      opt.seed = static_cast<std::uint64_t>(s);
      const auto r = impostor_evaluate(concat, imp_concat, Algorithm::svm_linear, opt);
      eer += r.eer_percent / 10;
      imp += r.impostor_error_percent / 10;
    }
    t.expect(std::abs(eer - 15.7) <= 5.0, "impostor eer " + fmt(eer) + " vs 15.7");
    t.expect(std::abs(imp - 28.0) <= 5.0, "impostor error " + fmt(imp) + " vs 28.0");
    detail += ", impostor concat " + fmt(eer) + "/" + fmt(imp);
  } else {
    detail += ", no impostor files";
  }
  return t.outcome(detail);
}

// 7 -------------------------------------------------------------------------

Outcome fold_invariants() {
  Tally t;
  const auto pop = synthesize_population({.subjects = 100, .sessions = 2, .seed = 77});
  const Dataset& d = pop.turkish;
  std::map<int, AgeGroup> group;
  for (const auto& s : d.samples) group[s.meta.subject_id] = s.meta.age_group;

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto folds = make_folds(d, 5, seed);
    const std::string tag = "seed " + std::to_string(seed);
    t.expect(folds.fold_of.size() == 100, tag + " covers every subject");
    for (int f = 0; f < 5; ++f) {
      int adults = 0, children = 0;
      for (int id : folds.subjects_in(f)) (group[id] == AgeGroup::adult ? adults : children)++;
      t.expect(adults == 10 && children == 10, tag + " fold " + std::to_string(f) + " balance");
    }
    // Scan every fold's training set for a test subject.
    const auto cv = cross_validate(d, seed % 2 ? Algorithm::speed : Algorithm::lda, folds, {}, seed, 1);
    for (const auto& trace : cv.folds) {
      const std::set<int> train(trace.train_subjects.begin(), trace.train_subjects.end());
      for (int id : trace.test_subjects) {
        t.expect(!train.contains(id), tag + " subject " + std::to_string(id) + " trained and tested");
        t.expect(folds.fold(id) == trace.fold, tag + " subject in the wrong test fold");
      }
      t.expect(train.size() + trace.test_subjects.size() == 100, tag + " partition");
    }
    for (const auto& s : cv.scores) t.expect(folds.fold(s.subject_id) == s.fold, tag + " score fold");
  }
  return t.outcome("100 seeds: disjoint, 10 adults + 10 children per fold, no test subject in training");
}

// 8 -------------------------------------------------------------------------

struct SimulatedCrash {};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

/// Orphan scan plus bit-identical re-derivation of every stored row.
void audit_store(const std::filesystem::path& dir, Tally& t, const std::string& tag) {
  std::map<PhraseId, std::vector<std::string>> rederived;
  for (const auto& line : lines_of(slurp(dir / "raw.jsonl"))) {
    const auto raw = parse_raw_session(line);
    Dataset one;
    one.phrase = raw.phrase;
    one.samples.push_back(ingest::derive_sample(raw));
    rederived[raw.phrase].push_back(lines_of(serialize_dataset_csv(one)).at(1));
  }
  for (auto p : {PhraseId::turkish, PhraseId::password}) {
    auto rows = lines_of(slurp(dir / (std::string(to_string(p)) + ".csv")));
    if (!rows.empty()) rows.erase(rows.begin());
    const auto& want = rederived[p];
    // Orphans: rows past the log, or rows that no raw session produces.
    t.expect(rows.size() <= want.size(), tag + " orphan derived row");
    t.expect(rows == want, tag + " derived rows differ from re-derivation");
  }
}

Outcome ingest_durability() {
  Tally t;
  testing::TempDir dir("acceptance-store");
  std::mt19937_64 rng(8008);
  std::uniform_int_distribution<int> pick(0, 3);
  int crashes = 0, accepted = 0;
  for (int round = 0; round < 150; ++round) {
    ingest::Store store(dir.path());
    audit_store(dir.path(), t, "round " + std::to_string(round));
    const int id = 1 + round % 10;
    const auto phrase = (round / 10) % 2 ? PhraseId::password : PhraseId::turkish;
    const int next = store.progress(id, phrase) + 1;
    if (next > ingest::kSessionsPerPhrase) continue;
    RawSession s;
    s.subject.subject_id = id;
    s.subject.age_group = id % 2 ? AgeGroup::adult : AgeGroup::child;
    s.subject.birth_year = id % 2 ? 1980 : 2005;
    s.phrase = phrase;
    s.session_index = next;
    s.events = synthesize_events(phrase_spec(phrase), draw_profile(s.subject.age_group, rng), rng);
    const int choice = pick(rng);
    if (choice < 3) {
      const auto point = static_cast<ingest::CrashPoint>(choice);
      store.set_crash_hook([point](ingest::CrashPoint p) {
        if (p == point) throw SimulatedCrash{};
      });
      try {
        store.submit(s);
        t.expect(false, "crash hook did not fire");
      } catch (const SimulatedCrash&) {
        ++crashes;
      }
    } else {
      accepted += store.submit(s).status == ingest::SubmitStatus::accepted;
    }
  }
  ingest::Store last(dir.path());
  audit_store(dir.path(), t, "final");
  return t.outcome(std::to_string(crashes) + " injected crashes across 3 write points, " + std::to_string(last.size()) +
                   " sessions stored, every row re-derives bit-identically");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget_s;  // 0 means no runtime bound
  };
  const std::vector<Criterion> criteria = {
      {1, "feature-extraction oracle", feature_oracle, 5},
      {2, "EER oracle and invariances", eer_oracle, 0},
      {3, "classifier oracles", classifier_oracles, 0},
      {4, "neural correctness", neural_correctness, 60},
      {5, "pipeline property check", pipeline_property, 90},
      {6, "conditional reproduction", conditional_reproduction, 0},
      {7, "fold invariants", fold_invariants, 0},
      {8, "ingest durability", ingest_durability, 0},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Verdict::fail, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.verdict == Verdict::pass && c.budget_s > 0 && secs >= c.budget_s) {
      o = {Verdict::fail, "took " + fmt(secs) + " s, bound " + fmt(c.budget_s) + " s; " + o.detail};
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::skip ? "SKIP" : "FAIL";
    failed += o.verdict == Verdict::fail;
    std::printf("%s %d %s (%.2f s): %s\n", tag, c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
