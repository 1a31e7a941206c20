#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "doctest.h"
#include "keydyn/core/features.hpp"
#include "keydyn/eval/cross_validation.hpp"
#include "keydyn/synth/population.hpp"

using namespace keydyn;

TEST_CASE("every synthesized session validates and featurizes") {
  std::mt19937_64 rng(11);
  for (auto group : {AgeGroup::adult, AgeGroup::child, AgeGroup::impostor}) {
    for (int i = 0; i < 200; ++i) {
      const auto profile = draw_profile(group, rng);
      for (auto phrase : {PhraseId::turkish, PhraseId::password}) {
        const auto& spec = phrase_spec(phrase);
        const auto events = synthesize_events(spec, profile, rng);
        const auto verdict = validate_session(events, spec);
        REQUIRE(is_accepted(verdict));
        const auto fv = extract_features(events, spec);
        CHECK(fv.size() == 31);
        for (std::size_t k = 0; k < fv.size(); k += 3) CHECK(fv.values[k] > 0);
      }
    }
  }
}

TEST_CASE("population shape and determinism") {
  const auto a = synthesize_population({.subjects = 20, .sessions = 5, .seed = 3});
  const auto b = synthesize_population({.subjects = 20, .sessions = 5, .seed = 3});
  const auto c = synthesize_population({.subjects = 20, .sessions = 5, .seed = 4});
  CHECK(a.turkish.size() == 100);
  CHECK(a.password.size() == 100);
  CHECK(a.sessions.size() == 200);
  CHECK(a.turkish.samples == b.turkish.samples);
  CHECK(a.sessions == b.sessions);
  CHECK_FALSE(a.turkish.samples == c.turkish.samples);
  check_dataset(a.turkish);
  check_dataset(a.password);

  const auto adults = std::count_if(a.turkish.samples.begin(), a.turkish.samples.end(),
                                    [](const LabeledSample& s) { return s.meta.age_group == AgeGroup::adult; });
  CHECK(adults == 50);
  for (const auto& s : a.turkish.samples) {
    CHECK(age_consistent(s.meta, 2016));
  }

  const auto imp = synthesize_population({.subjects = 6, .sessions = 2, .first_id = 500, .seed = 3, .impostors = true});
  for (const auto& s : imp.password.samples) {
    CHECK(s.meta.age_group == AgeGroup::impostor);
    CHECK(s.meta.subject_id >= 500);
  }
}

TEST_CASE("adults type faster and more consistently than children") {
  const auto pop = synthesize_population({.subjects = 100, .sessions = 5, .seed = 9});
  double adult_total = 0, child_total = 0;
  for (const auto& s : pop.turkish.samples) {
    (s.meta.age_group == AgeGroup::adult ? adult_total : child_total) +=
        static_cast<double>(total_typing_time(s.features));
  }
  CHECK(adult_total * 1.5 < child_total);
}

namespace {

// Reassigns age groups across subjects, keeping the 50/50 split so folds stay
// stratified while any timing signal is destroyed.
Dataset shuffle_groups(Dataset d, std::uint64_t seed) {
  std::vector<int> ids;
  for (const auto& s : d.samples) {
    if (ids.empty() || ids.back() != s.meta.subject_id) ids.push_back(s.meta.subject_id);
  }
  std::vector<AgeGroup> groups;
  for (std::size_t i = 0; i < ids.size(); ++i) groups.push_back(i % 2 == 0 ? AgeGroup::adult : AgeGroup::child);
  std::mt19937_64 rng(seed);
  std::shuffle(groups.begin(), groups.end(), rng);
  std::map<int, AgeGroup> of;
  for (std::size_t i = 0; i < ids.size(); ++i) of[ids[i]] = groups[i];
  for (auto& s : d.samples) s.meta.age_group = of[s.meta.subject_id];
  return d;
}

}  // namespace

TEST_CASE("synthetic population separates under cross-validation") {
  for (std::uint64_t seed : {1, 2}) {
    const auto pop = synthesize_population({.subjects = 100, .sessions = 5, .seed = seed});
    const auto concat = concat_datasets(pop.turkish, pop.password);
    for (const Dataset* d : {&pop.turkish, &pop.password, &concat}) {
      const auto folds = make_folds(*d, 5, seed);
      CAPTURE(seed);
      CAPTURE(to_string(d->phrase));
      CHECK(cv_eer(cross_validate(*d, Algorithm::svm_linear, folds, {}, seed, 1), false) <= 10.0);
      for (auto algo : {Algorithm::speed, Algorithm::euclidean, Algorithm::manhattan}) {
        CHECK(cv_eer(cross_validate(*d, algo, folds, {}, seed, 1), false) <= 15.0);
      }
    }
  }
}

TEST_CASE("shuffled age groups fall to chance") {
  const auto pop = synthesize_population({.subjects = 100, .sessions = 5, .seed = 1});
  double total = 0;
  const int runs = 8;
  for (int r = 0; r < runs; ++r) {
    const auto d = shuffle_groups(pop.turkish, 100 + r);
    total += cv_eer(cross_validate(d, Algorithm::euclidean, make_folds(d, 5, r), {}, r, 1), false);
  }
  const double mean = total / runs;
  CHECK(mean >= 40.0);
  CHECK(mean <= 60.0);
}
