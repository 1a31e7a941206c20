#include <random>
#include <sstream>

#include "doctest.h"
#include "keydyn/core/dataset.hpp"
#include "keydyn/error.hpp"
#include "oracles/sample_data.hpp"

using namespace keydyn;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_dataset_csv(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::io_error;
}

std::string one_row_csv(int features) {
  std::ostringstream os;
  os << dataset_csv_header(PhraseId::turkish) << '\n' << "7,F,child,2003,1,turkish";
  for (int i = 0; i < features; ++i) os << ',' << (1000 + i);
  os << '\n';
  return os.str();
}

}  // namespace

TEST_CASE("header is bit-exact") {
  const auto h = dataset_csv_header(PhraseId::turkish);
  CHECK(h.rfind("subject_id,gender,age_group,birth_year,session,phrase_id,H.M,DD.M.e,UD.M.e,H.e,",
                0) == 0);
  CHECK(h.size() - h.rfind(",H.Enter") == std::string(",H.Enter").size());
}

TEST_CASE("parse a minimal file") {
  auto d = parse_dataset_csv(one_row_csv(31));
  REQUIRE(d.size() == 1);
  CHECK(d.phrase == PhraseId::turkish);
  CHECK(d.samples[0].meta.subject_id == 7);
  CHECK(d.samples[0].meta.gender == Gender::female);
  CHECK(d.samples[0].meta.age_group == AgeGroup::child);
  CHECK(d.samples[0].features.values[30] == 1030);
}

TEST_CASE("parse errors") {
  SUBCASE("30 feature columns in header") {
    auto text = one_row_csv(31);
    auto h = dataset_csv_header(PhraseId::turkish);
    text.replace(0, h.size(), h.substr(0, h.rfind(',')));
    CHECK(code_of(text) == ErrorCode::bad_header);
  }
  SUBCASE("short row") { CHECK(code_of(one_row_csv(30)) == ErrorCode::bad_row); }
  SUBCASE("non-integer feature") {
    auto text = one_row_csv(31);
    text.insert(text.size() - 1, ".5");
    CHECK(code_of(text) == ErrorCode::bad_row);
  }
  SUBCASE("bad gender names the row") {
    auto text = one_row_csv(31);
    text.replace(text.find(",F,"), 3, ",X,");
    try {
      parse_dataset_csv(text);
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::bad_row);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("duplicate key") {
    auto text = one_row_csv(31);
    text += text.substr(text.find('\n') + 1);
    CHECK(code_of(text) == ErrorCode::duplicate_key);
  }
}

TEST_CASE("round trip on 1000 generated rows") {
  std::mt19937_64 rng(3);
  auto d = testing::random_dataset(PhraseId::password, 200, 5, rng);
  REQUIRE(d.size() == 1000);
  const auto text = serialize_dataset_csv(d);
  auto back = parse_dataset_csv(text);
  CHECK(back.phrase == d.phrase);
  CHECK(back.samples == d.samples);
  CHECK(serialize_dataset_csv(back) == text);
}

TEST_CASE("concatenation") {
  std::mt19937_64 rng(5);
  auto tr = testing::random_dataset(PhraseId::turkish, 100, 5, rng);
  auto pw = testing::random_dataset(PhraseId::password, 100, 5, rng);
  auto cat = concat_datasets(tr, pw);
  CHECK(cat.size() == 500);
  CHECK(design_matrix(cat).rows() == 500);
  CHECK(design_matrix(cat).cols() == 62);
  check_dataset(cat);
  const auto back = parse_dataset_csv(serialize_dataset_csv(cat));
  CHECK(back.samples == cat.samples);

  CHECK_THROWS_AS(concat_samples(tr.samples[0], pw.samples[1]), Error);
  auto self = concat_features(tr.samples[0].features,
                              FeatureVector{PhraseId::password, tr.samples[0].features.values});
  CHECK(std::equal(self.values.begin(), self.values.begin() + 31, self.values.begin() + 31));
}

TEST_CASE("quartiles use closest-rank interpolation") {
  // Independent R-7 evaluation: h = (n-1)p, interpolate between floor and ceil.
  auto r7 = [](std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    double h = (v.size() - 1) * p;
    std::size_t lo = static_cast<std::size_t>(h);
    double frac = h - lo;
    return frac == 0 ? v[lo] : v[lo] * (1 - frac) + v[lo + 1] * frac;
  };
  auto s = summarize_group(AgeGroup::adult, {5, 3, 1, 4, 2});
  CHECK(s.median == 3);
  CHECK(s.q1 == r7({1, 2, 3, 4, 5}, 0.25));
  CHECK(s.q3 == r7({1, 2, 3, 4, 5}, 0.75));
  CHECK(s.q1 == 2);
  CHECK(s.q3 == 4);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 100);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> v(3 + t);
    for (auto& x : v) x = u(rng);
    auto g = summarize_group(AgeGroup::child, v);
    CHECK(g.q1 == doctest::Approx(r7(v, 0.25)).epsilon(1e-12));
    CHECK(g.median == doctest::Approx(r7(v, 0.5)).epsilon(1e-12));
    CHECK(g.q3 == doctest::Approx(r7(v, 0.75)).epsilon(1e-12));
  }
}

TEST_CASE("degenerate and outlier summaries") {
  auto same = summarize_group(AgeGroup::adult, {7, 7, 7, 7});
  CHECK(same.q1 == 7);
  CHECK(same.q3 == 7);
  CHECK(same.whisker_low == 7);
  CHECK(same.outliers.empty());

  auto out = summarize_group(AgeGroup::child, {1, 2, 3, 4, 100});
  REQUIRE(out.outliers.size() == 1);
  CHECK(out.outliers[0] == 100);
  CHECK(out.whisker_high == 4);

  CHECK_THROWS_AS(summarize_group(AgeGroup::child, {}), Error);
  CHECK_THROWS_AS(dataset_stats(Dataset{}), Error);
}

TEST_CASE("dataset_stats groups by age") {
  std::mt19937_64 rng(1);
  auto d = testing::random_dataset(PhraseId::turkish, 10, 5, rng);
  auto stats = dataset_stats(d);
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].group == AgeGroup::child);
  CHECK(stats[0].count == 25);
  const auto csv = stats_csv(stats);
  CHECK(csv.rfind("age_group,count,min,q1,median,q3,max,whisker_low,whisker_high,outliers\n", 0) ==
        0);
}

TEST_CASE("age consistency") {
  SubjectMeta child{1, Gender::male, AgeGroup::child, 2000, std::nullopt};
  CHECK(age_consistent(child, 2012));
  CHECK_FALSE(age_consistent(child, 2016));
  SubjectMeta adult{2, Gender::female, AgeGroup::adult, 1990, std::nullopt};
  CHECK(age_consistent(adult, 2012));
  adult.birth_year = 1996;
  CHECK_FALSE(age_consistent(adult, 2012));
}
